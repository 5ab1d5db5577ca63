//! Integral Chevalley-basis construction of the E8 lattice algebra.
//!
//! Signs come from a bimultiplicative 2-cocycle on the root lattice:
//! `ε(m, n) = (−1)^{mᵀ Q n}` with `Q` lower triangular, `q_ii = 1` and
//! `q_ij = (α_i, α_j) mod 2` for `i > j`. With the raw cocycle the bracket
//! `[e_a, e_{−a}]` is `−h_a`; negating every negative-root vector flips it
//! to `+h_a` uniformly while also arranging `N(−a, −b) = −N(a, b)`, which
//! makes the basis a genuine Chevalley basis (so sign-coherent lifts of
//! diagram automorphisms exist and one-parameter subgroups are integral).
//!
//! The basis is indexed `0..8` for the simple coroots `h_1..h_8` followed
//! by `8..248` for the root vectors `e_β` in root-system order.

use super::{build_root_system, Family, RootSystem};
use std::sync::OnceLock;

pub const DIM: usize = 248;
pub const RANK: usize = 8;
pub const NROOTS: usize = 240;
const NO_SUM: u32 = u32::MAX;

pub struct E8Lattice {
    pub rs: RootSystem,
    /// Cocycle exponent matrix over GF(2).
    q: [[u8; RANK]; RANK],
    /// `sum[i * 240 + j]` = index of `α_i + α_j`, or `NO_SUM`.
    sum: Vec<u32>,
    /// Structure constant `N(α_i, α_j)` where defined, else 0.
    n: Vec<i8>,
    /// `pair[j][i] = (α_i, β_j) = ⟨β_j, α_i∨⟩` (all roots have norm 2).
    pair: Vec<[i8; RANK]>,
}

/// The lattice algebra, built once per process.
pub fn e8() -> &'static E8Lattice {
    static CELL: OnceLock<E8Lattice> = OnceLock::new();
    CELL.get_or_init(E8Lattice::build)
}

impl E8Lattice {
    fn build() -> E8Lattice {
        let rs = build_root_system(Family::E8);
        assert_eq!(rs.num_roots(), NROOTS);

        let mut q = [[0u8; RANK]; RANK];
        for i in 0..RANK {
            q[i][i] = 1;
            for j in 0..i {
                q[i][j] = (rs.inner(&unit(i), &unit(j)).rem_euclid(2)) as u8;
            }
        }

        let mut sum = vec![NO_SUM; NROOTS * NROOTS];
        let mut n = vec![0i8; NROOTS * NROOTS];
        let mut pair = vec![[0i8; RANK]; NROOTS];
        for j in 0..NROOTS {
            for i in 0..RANK {
                pair[j][i] = rs.pairing_with_simple_coroot(rs.root(j), i) as i8;
            }
        }
        let flip = |i: usize| -> i64 {
            if i < NROOTS / 2 {
                1
            } else {
                -1
            }
        };
        for i in 0..NROOTS {
            for j in 0..NROOTS {
                if let Some(k) = rs.sum_index(i, j) {
                    sum[i * NROOTS + j] = k as u32;
                    let eps = cocycle_sign(&q, rs.root(i), rs.root(j));
                    n[i * NROOTS + j] = (flip(i) * flip(j) * flip(k) * eps) as i8;
                }
            }
        }
        E8Lattice { rs, q, sum, n, pair }
    }

    /// `ε(m, n)` on arbitrary lattice vectors (as ±1).
    pub fn cocycle(&self, m: &[i64], n: &[i64]) -> i64 {
        cocycle_sign(&self.q, m, n)
    }

    /// Index of `α_i + α_j` when that is a root.
    pub fn sum_index(&self, i: usize, j: usize) -> Option<usize> {
        let s = self.sum[i * NROOTS + j];
        if s == NO_SUM {
            None
        } else {
            Some(s as usize)
        }
    }

    /// Structure constant `N(α_i, α_j)` (0 when `α_i + α_j` is not a root).
    pub fn n(&self, i: usize, j: usize) -> i64 {
        self.n[i * NROOTS + j] as i64
    }

    /// `(α_i, β_j)` for simple `i`, root `j`.
    pub fn pairing(&self, j: usize, i: usize) -> i64 {
        self.pair[j][i] as i64
    }

    /// Sparse bracket of two basis elements; appends `(index, coeff)`
    /// terms to `out`.
    pub fn bracket_basis(&self, x: usize, y: usize, out: &mut Vec<(usize, i64)>) {
        match (x < RANK, y < RANK) {
            (true, true) => {}
            (true, false) => {
                let c = self.pair[y - RANK][x];
                if c != 0 {
                    out.push((y, c as i64));
                }
            }
            (false, true) => {
                let c = self.pair[x - RANK][y];
                if c != 0 {
                    out.push((x, -(c as i64)));
                }
            }
            (false, false) => {
                let (a, b) = (x - RANK, y - RANK);
                if self.rs.neg_index(a) == b {
                    // [e_a, e_{−a}] = h_a; for norm-2 roots the coroot has
                    // the same coordinates as the root.
                    for (l, &m) in self.rs.root(a).iter().enumerate() {
                        if m != 0 {
                            out.push((l, m));
                        }
                    }
                } else if let Some(k) = self.sum_index(a, b) {
                    out.push((RANK + k, self.n(a, b)));
                }
            }
        }
    }

    /// Column-major sparse matrix of `ad(e_a)` on the 248-dim basis.
    pub fn ad_cols(&self, a: usize) -> Vec<Vec<(usize, i64)>> {
        let mut cols = vec![Vec::new(); DIM];
        let mut buf = Vec::new();
        for y in 0..DIM {
            buf.clear();
            self.bracket_basis(RANK + a, y, &mut buf);
            cols[y] = buf.clone();
        }
        cols
    }

    /// Column-major sparse matrices of the divided powers
    /// `(ad e_a)^k / k!` for `k = 1 ..= max_k`, with exactness asserted.
    pub fn divided_power_cols(&self, a: usize, max_k: u32) -> Vec<Vec<Vec<(usize, i64)>>> {
        let d1 = self.ad_cols(a);
        let mut out = vec![d1];
        let mut fact = 1i64;
        for k in 2..=max_k {
            fact *= k as i64;
            let prev = &out[(k - 2) as usize];
            // (ad)^k column j = ad applied to (ad)^{k−1} column j, then the
            // accumulated (k−1)! denominator is upgraded to k!.
            let mut cols = vec![Vec::new(); DIM];
            let mut acc = vec![0i64; DIM];
            let mut touched: Vec<usize> = Vec::new();
            let mut buf = Vec::new();
            for j in 0..DIM {
                for &(i, c) in &prev[j] {
                    buf.clear();
                    self.bracket_basis(RANK + a, i, &mut buf);
                    for &(t, v) in &buf {
                        if acc[t] == 0 {
                            touched.push(t);
                        }
                        acc[t] += c * v;
                    }
                }
                let mut col = Vec::new();
                for &t in &touched {
                    let v = acc[t];
                    acc[t] = 0;
                    if v != 0 {
                        assert_eq!(v % (k as i64), 0, "divided power not integral");
                        col.push((t, v / k as i64));
                    }
                }
                col.sort_unstable();
                touched.clear();
                cols[j] = col;
            }
            let _ = fact;
            out.push(cols);
        }
        out
    }
}

fn unit(i: usize) -> Vec<i64> {
    let mut v = vec![0i64; RANK];
    v[i] = 1;
    v
}

fn cocycle_sign(q: &[[u8; RANK]; RANK], m: &[i64], n: &[i64]) -> i64 {
    let mut parity = 0u8;
    for i in 0..RANK {
        if m[i] & 1 == 0 {
            continue;
        }
        for j in 0..RANK {
            parity ^= (q[i][j] as i64 & n[j] & 1) as u8;
        }
    }
    if parity & 1 == 1 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cocycle_is_bimultiplicative_and_normalized() {
        let lat = e8();
        let rs = &lat.rs;
        // ε(m+m', n) = ε(m,n)ε(m',n) and symmetrically; ε(m,n)ε(n,m) =
        // (−1)^{(m,n)}; ε(m,m) = (−1)^{(m,m)/2}. Spot-check on root pairs.
        for i in (0..NROOTS).step_by(7) {
            for j in (0..NROOTS).step_by(11) {
                let (a, b) = (rs.root(i), rs.root(j));
                let sum: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| x + y).collect();
                for k in (0..NROOTS).step_by(13) {
                    let c = rs.root(k);
                    assert_eq!(
                        lat.cocycle(&sum, c),
                        lat.cocycle(a, c) * lat.cocycle(b, c)
                    );
                }
                let comm = lat.cocycle(a, b) * lat.cocycle(b, a);
                let ip = rs.inner(a, b);
                assert_eq!(comm, if ip % 2 == 0 { 1 } else { -1 });
            }
        }
        for i in 0..NROOTS {
            let a = rs.root(i);
            assert_eq!(lat.cocycle(a, a), -1, "(a,a)/2 = 1 for roots");
        }
    }

    #[test]
    fn structure_constants_are_signs_with_chevalley_symmetry() {
        let lat = e8();
        let rs = &lat.rs;
        for i in 0..NROOTS {
            for j in 0..NROOTS {
                if lat.sum_index(i, j).is_some() {
                    let n = lat.n(i, j);
                    assert!(n == 1 || n == -1);
                    assert_eq!(lat.n(j, i), -n, "antisymmetry");
                    // Chevalley property: N(−a, −b) = −N(a, b).
                    let (ni, nj) = (rs.neg_index(i), rs.neg_index(j));
                    assert_eq!(lat.n(ni, nj), -n);
                }
            }
        }
    }

    #[test]
    fn opposite_root_brackets_give_plus_coroot() {
        let lat = e8();
        let rs = &lat.rs;
        let mut out = Vec::new();
        for i in 0..NROOTS {
            out.clear();
            lat.bracket_basis(RANK + i, RANK + rs.neg_index(i), &mut out);
            let mut h = vec![0i64; RANK];
            for &(t, c) in &out {
                assert!(t < RANK);
                h[t] = c;
            }
            assert_eq!(&h[..], rs.root(i), "[e_a, e_{{−a}}] = h_a");
        }
    }

    #[test]
    fn jacobi_identity_on_all_basis_triples() {
        let lat = e8();
        let mut acc = vec![0i64; DIM];
        let mut touched: Vec<usize> = Vec::new();
        let mut ab = Vec::new();
        let mut t1 = Vec::new();
        // [[x,y],z] + [[y,z],x] + [[z,x],y] = 0 over every basis triple.
        for x in 0..DIM {
            for y in x..DIM {
                for z in y..DIM {
                    for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                        ab.clear();
                        lat.bracket_basis(p, q, &mut ab);
                        for &(m, c) in &ab {
                            t1.clear();
                            lat.bracket_basis(m, r, &mut t1);
                            for &(t, v) in &t1 {
                                if acc[t] == 0 {
                                    touched.push(t);
                                }
                                acc[t] += c * v;
                            }
                        }
                    }
                    for &t in &touched {
                        assert_eq!(
                            acc[t], 0,
                            "jacobi fails at triple ({}, {}, {})",
                            x, y, z
                        );
                        acc[t] = 0;
                    }
                    touched.clear();
                }
            }
        }
    }

    #[test]
    fn divided_powers_terminate_at_degree_two() {
        let lat = e8();
        for a in (0..NROOTS).step_by(17) {
            let dp = lat.divided_power_cols(a, 3);
            assert!(dp[1].iter().any(|c| !c.is_empty()), "D2 nonzero");
            assert!(dp[2].iter().all(|c| c.is_empty()), "D3 vanishes");
        }
    }

    #[test]
    fn ad_preserves_the_invariant_form_spotcheck() {
        // (h_i, h_j) = (α_i, α_j), (e_a, e_b) = δ_{b,−a}, (h, e) = 0 is
        // invariant: ([x,y], z) + (y, [x,z]) = 0. Check x ranging over root
        // vectors on a sample of (y, z).
        let lat = e8();
        let rs = &lat.rs;
        let form = |u: usize, v: usize| -> i64 {
            match (u < RANK, v < RANK) {
                (true, true) => rs.inner(&unit(u), &unit(v)),
                (false, false) => {
                    if rs.neg_index(u - RANK) == v - RANK {
                        1
                    } else {
                        0
                    }
                }
                _ => 0,
            }
        };
        let mut b1 = Vec::new();
        let mut b2 = Vec::new();
        for a in (0..NROOTS).step_by(23) {
            let x = RANK + a;
            for y in (0..DIM).step_by(5) {
                for z in (0..DIM).step_by(3) {
                    b1.clear();
                    b2.clear();
                    lat.bracket_basis(x, y, &mut b1);
                    lat.bracket_basis(x, z, &mut b2);
                    let mut s = 0i64;
                    for &(m, c) in &b1 {
                        s += c * form(m, z);
                    }
                    for &(m, c) in &b2 {
                        s += c * form(y, m);
                    }
                    assert_eq!(s, 0);
                }
            }
        }
    }
}
