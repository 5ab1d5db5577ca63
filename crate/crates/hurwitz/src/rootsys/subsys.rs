//! Subsystem restriction and diagram folding: integral module operators
//! for every supported family, all transported out of the E8 lattice
//! algebra.
//!
//! Plain families (A1, A2, D4, E6, E7, E8) arise as root subsystems of E8:
//! the adjoint module is the bracket action on the sub-basis (root vectors
//! plus embedded coroots — a saturated sublattice, so restriction stays
//! integral), and minimal modules are root cosets on which the subsystem
//! acts by structure constants alone. F4 and G2 arise by folding E6 and D4
//! along their diagram automorphisms: a sign lift of the automorphism is
//! solved by height recursion and verified on every root pair, the fixed
//! sublattice furnishes the folded basis, and one-parameter operators are
//! commuting products over σ-orbits whose polynomial coefficients stay
//! integral with no division at all.

use super::lattice::{self, RANK as E8RANK};
use super::{build_root_system, Family, ModuleKind, RootSystem};
use crate::util::{
    cols_to_imat, integer_kernel, integer_left_inverse, primitive_kernel_basis,
    rational_solve_integral, IMat,
};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Column-major sparse integer matrix (square).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    pub n: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

type Cols = Vec<Vec<(usize, i64)>>;

impl SparseMat {
    fn from_cols(n: usize, cols: Cols) -> Self {
        debug_assert_eq!(cols.len(), n);
        SparseMat { n, cols }
    }

    pub fn col(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// Iterates entries as `(row, col, value)` in column order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)))
    }

    pub fn to_imat(&self) -> IMat {
        let mut m = IMat::zero(self.n, self.n);
        for (i, j, v) in self.entries() {
            m.set(i, j, v);
        }
        m
    }

    /// True if the matrix is diagonal with the given diagonal.
    fn is_diag(&self, diag: &[i64]) -> bool {
        if self.n != diag.len() {
            return false;
        }
        for j in 0..self.n {
            let expect = diag[j];
            match (self.cols[j].len(), expect) {
                (0, 0) => {}
                (1, d) if d != 0 => {
                    if self.cols[j][0] != (j, d) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

fn identity_cols(n: usize) -> Cols {
    (0..n).map(|j| vec![(j, 1)]).collect()
}

/// Sparse product A·B of column-major matrices of size n.
fn sp_mul(a: &Cols, b: &Cols, n: usize) -> Cols {
    let mut out: Cols = Vec::with_capacity(n);
    let mut acc = vec![0i64; n];
    let mut touched: Vec<usize> = Vec::new();
    for bcol in b {
        for &(i, v) in bcol {
            for &(r, w) in &a[i] {
                if acc[r] == 0 {
                    touched.push(r);
                }
                acc[r] += v * w;
            }
        }
        touched.sort_unstable();
        let mut col = Vec::with_capacity(touched.len());
        for &r in &touched {
            if acc[r] != 0 {
                col.push((r, acc[r]));
            }
            acc[r] = 0;
        }
        touched.clear();
        out.push(col);
    }
    out
}

fn sp_add(a: &Cols, b: &Cols, n: usize) -> Cols {
    let mut out: Cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut col: Vec<(usize, i64)> = a[j].clone();
        for &(i, v) in &b[j] {
            match col.iter_mut().find(|e| e.0 == i) {
                Some(e) => e.1 += v,
                None => col.push((i, v)),
            }
        }
        col.retain(|e| e.1 != 0);
        col.sort_unstable();
        out.push(col);
    }
    out
}

fn sp_scale(a: &Cols, s: i64) -> Cols {
    a.iter()
        .map(|c| c.iter().map(|&(i, v)| (i, v * s)).collect())
        .collect()
}

/// Polynomial (in t) with sparse-matrix coefficients, degree 0 first.
type MatPoly = Vec<Cols>;

fn poly_conv(p: &MatPoly, q: &MatPoly, n: usize) -> MatPoly {
    let mut out: MatPoly = vec![vec![Vec::new(); n]; p.len() + q.len() - 1];
    for (i, pc) in p.iter().enumerate() {
        for (j, qc) in q.iter().enumerate() {
            let prod = sp_mul(pc, qc, n);
            out[i + j] = sp_add(&out[i + j], &prod, n);
        }
    }
    while out.len() > 1 && out.last().unwrap().iter().all(|c| c.is_empty()) {
        out.pop();
    }
    out
}

// ---------------------------------------------------------------------------
// Embedded bases and integral restriction.
// ---------------------------------------------------------------------------

struct Block {
    coords: Vec<usize>,
    basis_ids: Vec<usize>,
    mat: IMat,
    left_inv: IMat,
}

/// A saturated sublattice basis inside an ambient coordinate module,
/// organized into coordinate blocks so that restriction of an operator is
/// a sparse scan with exact verification instead of a big rational solve.
struct EmbeddedBasis {
    ambient: usize,
    cols: Cols,
    block_of: Vec<i32>,
    blocks: Vec<Block>,
}

impl EmbeddedBasis {
    fn new(ambient: usize, cols: Cols, block_spec: Vec<(Vec<usize>, Vec<usize>)>) -> Self {
        let mut block_of = vec![-1i32; ambient];
        let mut blocks = Vec::new();
        let mut seen_basis = vec![false; cols.len()];
        for (bid, (coords, basis_ids)) in block_spec.into_iter().enumerate() {
            for &c in &coords {
                assert_eq!(block_of[c], -1, "coordinate in two blocks");
                block_of[c] = bid as i32;
            }
            let mut mat = IMat::zero(coords.len(), basis_ids.len());
            for (bj, &b) in basis_ids.iter().enumerate() {
                assert!(!seen_basis[b], "basis vector in two blocks");
                seen_basis[b] = true;
                for &(coord, v) in &cols[b] {
                    let pos = coords
                        .iter()
                        .position(|&c| c == coord)
                        .expect("basis vector leaves its block");
                    mat.set(pos, bj, v);
                }
            }
            let left_inv = integer_left_inverse(&mat);
            blocks.push(Block { coords, basis_ids, mat, left_inv });
        }
        assert!(seen_basis.iter().all(|&b| b), "basis vector not in any block");
        EmbeddedBasis { ambient, cols, block_of, blocks }
    }

    fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Restricts an ambient operator (column-major sparse) to the basis,
    /// asserting exactness: images must decompose integrally over the
    /// basis with nothing left over.
    fn restrict(&self, op: &Cols) -> SparseMat {
        let dim = self.dim();
        let mut out: Cols = Vec::with_capacity(dim);
        let mut acc = vec![0i64; self.ambient];
        let mut touched: Vec<usize> = Vec::new();
        for bcol in &self.cols {
            for &(c, v) in bcol {
                for &(r, w) in &op[c] {
                    if acc[r] == 0 {
                        touched.push(r);
                    }
                    acc[r] += v * w;
                }
            }
            let mut hit_blocks: Vec<usize> = Vec::new();
            for &r in &touched {
                if acc[r] != 0 {
                    let b = self.block_of[r];
                    assert!(b >= 0, "operator leaks outside the sublattice at coord {}", r);
                    if !hit_blocks.contains(&(b as usize)) {
                        hit_blocks.push(b as usize);
                    }
                }
            }
            hit_blocks.sort_unstable();
            let mut col: Vec<(usize, i64)> = Vec::new();
            for &bid in &hit_blocks {
                let block = &self.blocks[bid];
                let y: Vec<i64> = block.coords.iter().map(|&c| acc[c]).collect();
                let k = block.coords.len();
                let m = block.basis_ids.len();
                let mut coeffs = vec![0i64; m];
                for i in 0..m {
                    let mut s = 0i64;
                    for c in 0..k {
                        s += block.left_inv.at(i, c) * y[c];
                    }
                    coeffs[i] = s;
                }
                // Exactness: the image must be reproduced entirely.
                for c in 0..k {
                    let mut s = 0i64;
                    for i in 0..m {
                        s += block.mat.at(c, i) * coeffs[i];
                    }
                    assert_eq!(s, y[c], "operator image not in the sublattice");
                }
                for (i, &co) in coeffs.iter().enumerate() {
                    if co != 0 {
                        col.push((block.basis_ids[i], co));
                    }
                }
            }
            for &r in &touched {
                acc[r] = 0;
            }
            touched.clear();
            col.sort_unstable();
            out.push(col);
        }
        SparseMat::from_cols(dim, out)
    }
}

// ---------------------------------------------------------------------------
// Subsystem embeddings.
// ---------------------------------------------------------------------------

struct Embedding {
    family: Family,
    abs: RootSystem,
    /// Abstract root index → E8 root index.
    to_e8: Vec<usize>,
    /// Abstract simple i → E8 root index.
    simples_e8: Vec<usize>,
}

/// Rows of pairings of the given roots against the E8 simple basis;
/// `integer_kernel` of this matrix spans the orthogonal complement.
fn pairing_rows(roots_e8: &[usize]) -> IMat {
    let lat = lattice::e8();
    let mut a = IMat::zero(roots_e8.len(), E8RANK);
    for (r, &idx) in roots_e8.iter().enumerate() {
        for j in 0..E8RANK {
            a.set(r, j, lat.pairing(idx, j));
        }
    }
    a
}

/// Membership tester for span_ℚ(generators): returns the complement form
/// rows W; `v ∈ span ⟺ W·(Bv) = 0`, precomputed as pairings.
struct SpanTest {
    /// Rows are E8-bilinear forms: w[r][j] = (k_r, α_j).
    w: Vec<Vec<i64>>,
}

impl SpanTest {
    fn new(generators_e8: &[usize]) -> Self {
        let rs8 = &lattice::e8().rs;
        let a = pairing_rows(generators_e8);
        let k = integer_kernel(&a);
        let mut w = Vec::new();
        for c in 0..k.cols {
            let kv = k.col(c);
            let row: Vec<i64> = (0..E8RANK)
                .map(|j| {
                    let unit: Vec<i64> =
                        (0..E8RANK).map(|i| if i == j { 1 } else { 0 }).collect();
                    rs8.inner(&kv, &unit)
                })
                .collect();
            w.push(row);
        }
        SpanTest { w }
    }

    fn contains(&self, v: &[i64]) -> bool {
        self.w
            .iter()
            .all(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum::<i64>() == 0)
    }
}

/// Indecomposable positive roots of a closed member set.
fn subsystem_simples(members: &[usize]) -> Vec<usize> {
    let rs8 = &lattice::e8().rs;
    let member_set: std::collections::HashSet<usize> = members.iter().copied().collect();
    let positives: Vec<usize> =
        members.iter().copied().filter(|&i| rs8.is_positive(i)).collect();
    let mut simples = Vec::new();
    for &p in &positives {
        let decomposable = positives.iter().any(|&a| {
            if a == p {
                return false;
            }
            let diff: Vec<i64> = rs8
                .root(p)
                .iter()
                .zip(rs8.root(a))
                .map(|(&x, &y)| x - y)
                .collect();
            match rs8.index_of(&diff) {
                Some(b) => rs8.is_positive(b) && member_set.contains(&b),
                None => false,
            }
        });
        if !decomposable {
            simples.push(p);
        }
    }
    simples.sort_unstable();
    simples
}

/// Matches the subsystem simples to the abstract diagram; returns, for each
/// abstract simple, the chosen E8 root index. Lexicographically smallest
/// assignment, so deterministic even when the diagram has automorphisms.
fn match_diagram(simples: &[usize], abs: &RootSystem) -> Vec<usize> {
    let rs8 = &lattice::e8().rs;
    let r = abs.rank();
    assert_eq!(simples.len(), r, "simple count mismatch for {:?}", abs.family());
    let unit = |i: usize| -> Vec<i64> {
        (0..r).map(|j| if j == i { 1 } else { 0 }).collect()
    };
    let gram_abs: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| abs.inner(&unit(i), &unit(j))).collect())
        .collect();
    let gram_sub: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| rs8.root_inner(simples[i], simples[j])).collect())
        .collect();
    fn dfs(
        pos: usize,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        gram_abs: &[Vec<i64>],
        gram_sub: &[Vec<i64>],
    ) -> bool {
        let r = gram_abs.len();
        if pos == r {
            return true;
        }
        for c in 0..r {
            if used[c] || gram_sub[c][c] != gram_abs[pos][pos] {
                continue;
            }
            if (0..pos).any(|j| gram_sub[assign[j]][c] != gram_abs[j][pos]) {
                continue;
            }
            assign.push(c);
            used[c] = true;
            if dfs(pos + 1, assign, used, gram_abs, gram_sub) {
                return true;
            }
            assign.pop();
            used[c] = false;
        }
        false
    }
    let mut assign = Vec::new();
    let mut used = vec![false; r];
    assert!(
        dfs(0, &mut assign, &mut used, &gram_abs, &gram_sub),
        "diagram match failed for {:?}",
        abs.family()
    );
    assign.iter().map(|&c| simples[c]).collect()
}

impl Embedding {
    fn build(family: Family, members: Vec<usize>) -> Embedding {
        let abs = build_root_system(family);
        assert_eq!(members.len(), abs.num_roots(), "member count for {:?}", family);
        let rs8 = &lattice::e8().rs;
        let simples = subsystem_simples(&members);
        let simples_e8 = match_diagram(&simples, &abs);
        let mut to_e8 = Vec::with_capacity(abs.num_roots());
        let mut seen = std::collections::HashSet::new();
        for rr in 0..abs.num_roots() {
            let coords = abs.root(rr);
            let mut v = vec![0i64; E8RANK];
            for (i, &m) in coords.iter().enumerate() {
                for (j, &c) in rs8.root(simples_e8[i]).iter().enumerate() {
                    v[j] += m * c;
                }
            }
            let idx = rs8
                .index_of(&v)
                .unwrap_or_else(|| panic!("transported root not a root for {:?}", family));
            assert!(members.contains(&idx), "transported root outside subsystem");
            assert!(seen.insert(idx), "transport not injective");
            to_e8.push(idx);
        }
        Embedding { family, abs, to_e8, simples_e8 }
    }
}

fn embedding(family: Family) -> Arc<Embedding> {
    static CACHE: OnceLock<Mutex<HashMap<Family, Arc<OnceLock<Arc<Embedding>>>>>> =
        OnceLock::new();
    let cell = {
        let map = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut g = map.lock().unwrap();
        g.entry(family).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(build_embedding(family))).clone()
}

fn build_embedding(family: Family) -> Embedding {
    let lat = lattice::e8();
    let rs8 = &lat.rs;
    let nroots = rs8.num_roots();
    let delta = rs8.highest_root();
    let members: Vec<usize> = match family {
        Family::E8 => (0..nroots).collect(),
        Family::E7 => (0..nroots)
            .filter(|&b| rs8.root_inner(b, delta) == 0)
            .collect(),
        Family::A1 => vec![delta, rs8.neg_index(delta)],
        Family::A2 => {
            let gamma = (0..nroots)
                .find(|&b| rs8.root_inner(b, delta) == -1)
                .expect("adjacent root to highest root");
            let sum = rs8.sum_index(delta, gamma).expect("A2 closure");
            let mut m = vec![delta, gamma, sum];
            let negs: Vec<usize> = m.iter().map(|&i| rs8.neg_index(i)).collect();
            m.extend(negs);
            m.sort_unstable();
            m
        }
        Family::E6 => {
            let a2 = build_embedding(Family::A2);
            let (d, g) = (a2.to_e8[0], a2.to_e8[1]);
            (0..nroots)
                .filter(|&b| rs8.root_inner(b, d) == 0 && rs8.root_inner(b, g) == 0)
                .collect()
        }
        Family::D4 => {
            let abs = build_root_system(Family::D4);
            // Depth-first search for four roots realizing the D4 Gram
            // matrix; first solution in index order.
            let unit = |i: usize| -> Vec<i64> {
                (0..4).map(|j| if j == i { 1 } else { 0 }).collect()
            };
            let gram: Vec<Vec<i64>> = (0..4)
                .map(|i| (0..4).map(|j| abs.inner(&unit(i), &unit(j))).collect())
                .collect();
            fn dfs(
                pos: usize,
                assign: &mut Vec<usize>,
                gram: &[Vec<i64>],
                rs8: &RootSystem,
            ) -> bool {
                if pos == 4 {
                    return true;
                }
                for c in 0..rs8.num_roots() {
                    if assign.contains(&c) {
                        continue;
                    }
                    if (0..pos).any(|j| rs8.root_inner(assign[j], c) != gram[j][pos]) {
                        continue;
                    }
                    assign.push(c);
                    if dfs(pos + 1, assign, gram, rs8) {
                        return true;
                    }
                    assign.pop();
                }
                false
            }
            let mut assign = Vec::new();
            assert!(dfs(0, &mut assign, &gram, rs8), "no D4 subsystem found");
            let span = SpanTest::new(&assign);
            (0..nroots).filter(|&b| span.contains(rs8.root(b))).collect()
        }
        Family::F4 | Family::G2 => unreachable!("folded families have no plain embedding"),
    };
    Embedding::build(family, members)
}

// ---------------------------------------------------------------------------
// Folding data.
// ---------------------------------------------------------------------------

struct FoldData {
    parent: Family,
    abs: RootSystem,
    /// Folded abstract root → τ-invariant combination of parent roots.
    realize: Vec<Vec<(usize, i64)>>,
    /// Folded simple → orbit of parent simple labels (0-based).
    cartan_orbits: Vec<Vec<usize>>,
}

fn fold_data(folded: Family) -> Arc<FoldData> {
    static CACHE: OnceLock<Mutex<HashMap<Family, Arc<OnceLock<Arc<FoldData>>>>>> =
        OnceLock::new();
    let cell = {
        let map = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut g = map.lock().unwrap();
        g.entry(folded).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(build_fold_data(folded))).clone()
}

fn build_fold_data(folded: Family) -> FoldData {
    let (parent, perm, cartan_orbits): (Family, Vec<usize>, Vec<Vec<usize>>) = match folded {
        Family::F4 => (Family::E6, vec![5, 1, 4, 3, 2, 0], vec![vec![1], vec![3], vec![2, 4], vec![0, 5]]),
        Family::G2 => (Family::D4, vec![2, 1, 3, 0], vec![vec![0, 2, 3], vec![1]]),
        _ => panic!("not a folded family: {:?}", folded),
    };
    let pabs = build_root_system(parent);
    let abs = build_root_system(folded);
    let order: usize = if folded == Family::F4 { 2 } else { 3 };
    let prank = pabs.rank();
    let nroots = pabs.num_roots();

    // The automorphism on parent roots, via coordinate permutation.
    let sigma: Vec<usize> = (0..nroots)
        .map(|r| {
            let c = pabs.root(r);
            let mut p = vec![0i64; prank];
            for i in 0..prank {
                p[perm[i]] = c[i];
            }
            pabs.index_of(&p).expect("automorphism image is a root")
        })
        .collect();
    for r in 0..nroots {
        let mut x = r;
        for _ in 0..order {
            x = sigma[x];
        }
        assert_eq!(x, r, "automorphism order");
        if sigma[r] != r {
            assert_eq!(pabs.root_inner(r, sigma[r]), 0, "orbit roots must be orthogonal");
            if order == 3 {
                assert_eq!(pabs.root_inner(r, sigma[sigma[r]]), 0);
            }
        }
    }

    // Sign lift by height recursion: s = +1 on simples, and on γ = a + b
    // forced by s(γ) N(a,b) = s(a) s(b) N(σa, σb). Verified on all pairs.
    let consts = structure_constants(parent);
    let npos = pabs.num_positive();
    let mut sign = vec![0i64; nroots];
    for r in 0..npos {
        if pabs.height(r) == 1 {
            sign[r] = 1;
            continue;
        }
        let mut found = false;
        for a in 0..npos {
            let diff: Vec<i64> = pabs
                .root(r)
                .iter()
                .zip(pabs.root(a))
                .map(|(&x, &y)| x - y)
                .collect();
            if let Some(b) = pabs.index_of(&diff) {
                if b < npos && sign[a] != 0 && sign[b] != 0 {
                    let n_ab = consts.n(a, b);
                    let n_sab = consts.n(sigma[a], sigma[b]);
                    assert!(n_ab.abs() == 1 && n_sab.abs() == 1);
                    sign[r] = sign[a] * sign[b] * n_sab * n_ab;
                    found = true;
                    break;
                }
            }
        }
        assert!(found, "no decomposition for positive root {}", r);
    }
    for r in 0..npos {
        sign[npos + r] = sign[r];
    }
    // Full verification of the lift on every summable pair.
    for a in 0..nroots {
        for b in 0..nroots {
            if pabs.sum_index(a, b).is_some() {
                let c = pabs.index_of(
                    &pabs
                        .root(a)
                        .iter()
                        .zip(pabs.root(b))
                        .map(|(&x, &y)| x + y)
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                assert_eq!(
                    sign[a] * sign[b] * consts.n(sigma[a], sigma[b]),
                    sign[c] * consts.n(a, b),
                    "sign lift inconsistent at pair ({}, {})",
                    a,
                    b
                );
            }
        }
    }
    for r in 0..nroots {
        // τ^order = 1 on every root vector, and fixed roots must carry +1
        // so that they survive into the fixed subalgebra.
        let mut prod = 1i64;
        let mut x = r;
        for _ in 0..order {
            prod *= sign[x];
            x = sigma[x];
        }
        assert_eq!(prod, 1, "orbit sign product");
        if sigma[r] == r {
            assert_eq!(sign[r], 1, "fixed root with sign −1");
        }
    }

    // Folded root ↔ σ-orbit, identified through scaled restrictions:
    // R(O) = (order/|O|)·Σ_{γ∈O} γ expressed over the simple restrictions.
    let scale = order as i64;
    let s_cols: Vec<Vec<i64>> = cartan_orbits
        .iter()
        .map(|orbit| {
            let mut v = vec![0i64; prank];
            for &l in orbit {
                v[l] += scale / orbit.len() as i64;
            }
            v
        })
        .collect();
    // Gram proportionality check: (R_i, R_j) = order · (β_i, β_j).
    let frank = abs.rank();
    let funit = |i: usize| -> Vec<i64> {
        (0..frank).map(|j| if j == i { 1 } else { 0 }).collect()
    };
    for i in 0..frank {
        for j in 0..frank {
            assert_eq!(
                pabs.inner(&s_cols[i], &s_cols[j]),
                scale * abs.inner(&funit(i), &funit(j)),
                "folded simple Gram mismatch"
            );
        }
    }
    let s_mat = cols_to_imat(&s_cols);
    let mut realize: Vec<Vec<(usize, i64)>> = vec![Vec::new(); abs.num_roots()];
    let mut covered = 0usize;
    let mut orbit_seen = vec![false; nroots];
    for r in 0..nroots {
        if orbit_seen[r] {
            continue;
        }
        let mut orbit = vec![r];
        let mut x = sigma[r];
        while x != r {
            orbit.push(x);
            x = sigma[x];
        }
        for &o in &orbit {
            orbit_seen[o] = true;
        }
        let osize = orbit.len() as i64;
        let mut rest = vec![0i64; prank];
        for &o in &orbit {
            for (i, &c) in pabs.root(o).iter().enumerate() {
                rest[i] += c * (scale / osize);
            }
        }
        let sol = rational_solve_integral(&s_mat, &cols_to_imat(&[rest]));
        let coords: Vec<i64> = (0..frank).map(|i| sol.at(i, 0)).collect();
        let fr = abs
            .index_of(&coords)
            .expect("orbit restriction is a folded root");
        assert!(realize[fr].is_empty(), "two orbits map to one folded root");
        // τ-invariant combination with cumulative signs along the orbit.
        let mut coeff = 1i64;
        let mut comb = Vec::new();
        for (k, &o) in orbit.iter().enumerate() {
            comb.push((o, coeff));
            if k + 1 < orbit.len() {
                coeff *= sign[o];
            }
        }
        realize[fr] = comb;
        covered += 1;
    }
    assert_eq!(covered, abs.num_roots(), "orbit count vs folded roots");
    FoldData { parent, abs, realize, cartan_orbits }
}

// ---------------------------------------------------------------------------
// Module operators.
// ---------------------------------------------------------------------------

/// Integral operator data for a (family, module) pair: for every abstract
/// root the coefficients of the one-parameter operator
/// `x_r(t) = 1 + t·C₁ + t²·C₂ + …`, the Cartan actions `dρ(h_i)`, and the
/// weight of every basis vector in fundamental coordinates.
pub struct ModuleOps {
    pub family: Family,
    pub kind: ModuleKind,
    pub dim: usize,
    op_polys: Vec<Vec<SparseMat>>,
    cartan_mats: Vec<SparseMat>,
    weights: Vec<Vec<i64>>,
}

impl ModuleOps {
    /// Coefficients `C₁, C₂, …` of `x_r(t)`; index k is the t^{k+1} term.
    pub fn op_poly(&self, root: usize) -> &[SparseMat] {
        &self.op_polys[root]
    }

    pub fn cartan(&self, i: usize) -> &SparseMat {
        &self.cartan_mats[i]
    }

    pub fn rank(&self) -> usize {
        self.cartan_mats.len()
    }

    pub fn num_roots(&self) -> usize {
        self.op_polys.len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// `dρ(e_r)`, the degree-1 coefficient.
    pub fn d_rho(&self, root: usize) -> &SparseMat {
        &self.op_polys[root][0]
    }

    /// Evaluates `x_r(t)` exactly over the integers.
    pub fn eval_int(&self, root: usize, t: i64) -> IMat {
        let mut m = IMat::identity(self.dim);
        let mut tp = 1i64;
        for c in &self.op_polys[root] {
            tp *= t;
            for (i, j, v) in c.entries() {
                m.set(i, j, m.at(i, j) + tp * v);
            }
        }
        m
    }
}

fn adjoint_weights(abs: &RootSystem) -> Vec<Vec<i64>> {
    let r = abs.rank();
    let mut w = vec![vec![0i64; r]; r];
    for root in 0..abs.num_roots() {
        w.push(
            (0..r)
                .map(|j| abs.pairing_with_simple_coroot(abs.root(root), j))
                .collect(),
        );
    }
    w
}

/// Adjoint module of a plain subsystem: bracket action on the saturated
/// sublattice spanned by the embedded coroots and root vectors.
fn plain_adjoint(emb: &Embedding) -> ModuleOps {
    let lat = lattice::e8();
    let rs8 = &lat.rs;
    let abs = &emb.abs;
    let r = abs.rank();
    let nroots = abs.num_roots();
    let dim = r + nroots;
    let ambient = lattice::DIM;

    let mut cols: Cols = Vec::with_capacity(dim);
    for i in 0..r {
        let coords = rs8.root(emb.simples_e8[i]);
        cols.push(
            coords
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(j, &c)| (j, c))
                .collect(),
        );
    }
    for rr in 0..nroots {
        cols.push(vec![(E8RANK + emb.to_e8[rr], 1)]);
    }
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> =
        vec![((0..E8RANK).collect(), (0..r).collect())];
    for rr in 0..nroots {
        blocks.push((vec![E8RANK + emb.to_e8[rr]], vec![r + rr]));
    }
    let basis = EmbeddedBasis::new(ambient, cols, blocks);

    let mut op_polys = Vec::with_capacity(nroots);
    for rr in 0..nroots {
        let dp = lat.divided_power_cols(emb.to_e8[rr], 2);
        let mut poly: Vec<SparseMat> = dp.iter().map(|c| basis.restrict(c)).collect();
        while poly.len() > 1 && poly.last().unwrap().is_zero() {
            poly.pop();
        }
        op_polys.push(poly);
    }

    let weights = adjoint_weights(abs);
    let mut cartan_mats = Vec::with_capacity(r);
    for i in 0..r {
        let hcoords = rs8.root(emb.simples_e8[i]);
        let mut op: Cols = vec![Vec::new(); ambient];
        for b in 0..rs8.num_roots() {
            let pair: i64 = (0..E8RANK).map(|j| hcoords[j] * lat.pairing(b, j)).sum();
            if pair != 0 {
                op[E8RANK + b].push((E8RANK + b, pair));
            }
        }
        let m = basis.restrict(&op);
        let diag: Vec<i64> = (0..dim).map(|b| weights[b][i]).collect();
        assert!(m.is_diag(&diag), "cartan action is not the expected diagonal");
        cartan_mats.push(m);
    }

    ModuleOps { family: emb.family, kind: ModuleKind::Adjoint, dim, op_polys, cartan_mats, weights }
}

/// Minimal module of a plain subsystem: the structure-constant action on a
/// root coset (a single column of the branching of the E8 adjoint).
fn coset_minimal(emb: &Embedding, expected_dim: usize) -> ModuleOps {
    let lat = lattice::e8();
    let rs8 = &lat.rs;
    let abs = &emb.abs;
    let span = SpanTest::new(&emb.simples_e8);
    let nroots8 = rs8.num_roots();
    let mut column: Vec<usize> = Vec::new();
    for b0 in 0..nroots8 {
        if span.contains(rs8.root(b0)) {
            continue;
        }
        let col: Vec<usize> = (0..nroots8)
            .filter(|&b| {
                let diff: Vec<i64> = rs8
                    .root(b)
                    .iter()
                    .zip(rs8.root(b0))
                    .map(|(&x, &y)| x - y)
                    .collect();
                span.contains(&diff)
            })
            .collect();
        if col.len() == expected_dim {
            column = col;
            break;
        }
    }
    assert_eq!(column.len(), expected_dim, "no coset of the right size for {:?}", emb.family);
    let mut pos_of = vec![usize::MAX; nroots8];
    for (p, &b) in column.iter().enumerate() {
        pos_of[b] = p;
    }

    let dim = expected_dim;
    let nroots = abs.num_roots();
    let mut op_polys = Vec::with_capacity(nroots);
    for rr in 0..nroots {
        let a = emb.to_e8[rr];
        let mut cols: Cols = vec![Vec::new(); dim];
        for (p, &beta) in column.iter().enumerate() {
            if let Some(s) = lat.sum_index(a, beta) {
                let q = pos_of[s];
                assert!(q != usize::MAX, "coset not closed under the subsystem");
                cols[p].push((q, lat.n(a, beta)));
            }
        }
        // Minuscule: the operators square to zero, so x(t) = 1 + t·dρ.
        assert!(
            sp_mul(&cols, &cols, dim).iter().all(|c| c.is_empty()),
            "coset operator does not square to zero"
        );
        op_polys.push(vec![SparseMat::from_cols(dim, cols)]);
    }

    let r = abs.rank();
    let weights: Vec<Vec<i64>> = column
        .iter()
        .map(|&beta| {
            (0..r)
                .map(|i| rs8.root_coroot_pairing(beta, emb.simples_e8[i]))
                .collect()
        })
        .collect();
    let cartan_mats: Vec<SparseMat> = (0..r)
        .map(|i| {
            let cols: Cols = (0..dim)
                .map(|b| {
                    let w = weights[b][i];
                    if w != 0 {
                        vec![(b, w)]
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            SparseMat::from_cols(dim, cols)
        })
        .collect();

    ModuleOps { family: emb.family, kind: ModuleKind::Minimal, dim, op_polys, cartan_mats, weights }
}

/// Product over a σ-orbit of one-parameter polynomials, coefficient k of
/// each factor scaled by coeff^k.
fn orbit_poly(
    orbit: &[(usize, i64)],
    parent_ops: &ModuleOps,
    n: usize,
) -> MatPoly {
    let mut prod: MatPoly = vec![identity_cols(n)];
    for &(groot, coeff) in orbit {
        let mut factor: MatPoly = vec![identity_cols(n)];
        let mut cs = 1i64;
        for c in parent_ops.op_poly(groot) {
            cs *= coeff;
            factor.push(sp_scale(&c.cols, cs));
        }
        prod = poly_conv(&prod, &factor, n);
    }
    prod
}

/// Adjoint module of a folded family: the fixed sublattice of the parent
/// adjoint under the sign-lifted diagram automorphism, with one-parameter
/// operators given by commuting products over σ-orbits.
fn folded_adjoint(fd: &FoldData) -> ModuleOps {
    let parent_ops = module_ops(fd.parent, ModuleKind::Adjoint);
    let pabs = build_root_system(fd.parent);
    let prank = pabs.rank();
    let ambient = parent_ops.dim;
    let abs = &fd.abs;
    let frank = abs.rank();
    let nroots = abs.num_roots();
    let dim = frank + nroots;

    let mut cols: Cols = Vec::with_capacity(dim);
    for orbit in &fd.cartan_orbits {
        cols.push(orbit.iter().map(|&l| (l, 1)).collect());
    }
    for fr in 0..nroots {
        cols.push(fd.realize[fr].iter().map(|&(g, c)| (prank + g, c)).collect());
    }
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> =
        vec![((0..prank).collect(), (0..frank).collect())];
    for fr in 0..nroots {
        blocks.push((
            fd.realize[fr].iter().map(|&(g, _)| prank + g).collect(),
            vec![frank + fr],
        ));
    }
    let basis = EmbeddedBasis::new(ambient, cols, blocks);

    let mut op_polys = Vec::with_capacity(nroots);
    for fr in 0..nroots {
        let prod = orbit_poly(&fd.realize[fr], &parent_ops, ambient);
        let mut poly: Vec<SparseMat> =
            prod[1..].iter().map(|c| basis.restrict(c)).collect();
        while poly.len() > 1 && poly.last().unwrap().is_zero() {
            poly.pop();
        }
        op_polys.push(poly);
    }

    let weights = adjoint_weights(abs);
    let mut cartan_mats = Vec::with_capacity(frank);
    for (i, orbit) in fd.cartan_orbits.iter().enumerate() {
        let mut op: Cols = vec![Vec::new(); ambient];
        for &l in orbit {
            op = sp_add(&op, &parent_ops.cartan(l).cols, ambient);
        }
        let m = basis.restrict(&op);
        let diag: Vec<i64> = (0..dim).map(|b| weights[b][i]).collect();
        assert!(m.is_diag(&diag), "folded cartan action mismatch");
        cartan_mats.push(m);
    }

    ModuleOps {
        family: abs.family(),
        kind: ModuleKind::Adjoint,
        dim,
        op_polys,
        cartan_mats,
        weights,
    }
}

/// Minimal module of a folded family: fold the parent coset module, then
/// cut down to the kernel of the unique invariant covector.
fn folded_minimal(fd: &FoldData) -> ModuleOps {
    let parent_ops = module_ops(fd.parent, ModuleKind::Minimal);
    let ambient = parent_ops.dim;
    let abs = &fd.abs;
    let frank = abs.rank();
    let nroots = abs.num_roots();

    // Folded operators and Cartan actions on the parent coset module.
    let folded_polys: Vec<MatPoly> = (0..nroots)
        .map(|fr| orbit_poly(&fd.realize[fr], &parent_ops, ambient))
        .collect();
    let folded_cartan: Vec<Cols> = fd
        .cartan_orbits
        .iter()
        .map(|orbit| {
            let mut op: Cols = vec![Vec::new(); ambient];
            for &l in orbit {
                op = sp_add(&op, &parent_ops.cartan(l).cols, ambient);
            }
            op
        })
        .collect();
    // Ambient weights under the folded Cartan.
    let amb_weights: Vec<Vec<i64>> = (0..ambient)
        .map(|b| {
            fd.cartan_orbits
                .iter()
                .map(|orbit| orbit.iter().map(|&l| parent_ops.weights[b][l]).sum())
                .collect()
        })
        .collect();

    // The invariant covector: common left null vector of every operator
    // coefficient and Cartan action.
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut add_constraints = |cols: &Cols| {
        // w·X = 0 ⟺ Xᵀ wᵀ = 0: each column of X gives a row constraint? No:
        // each row of Xᵀ is a column of X evaluated against w, i.e. the
        // constraint Σ_i w_i X[i][j] = 0 for every j. Build rows X[·][j].
        for j in 0..cols.len() {
            if !cols[j].is_empty() {
                let mut row = vec![0i64; cols.len()];
                for &(i, v) in &cols[j] {
                    row[i] = v;
                }
                rows.push(row);
            }
        }
    };
    for poly in &folded_polys {
        for coeff in &poly[1..] {
            add_constraints(coeff);
        }
    }
    for c in &folded_cartan {
        add_constraints(c);
    }
    let mut cmat = IMat::zero(rows.len(), ambient);
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            cmat.set(r, c, v);
        }
    }
    let ker = integer_kernel(&cmat);
    assert_eq!(ker.cols, 1, "invariant covector must be unique");
    let w: Vec<i64> = ker.col(0);
    let support: Vec<usize> = (0..ambient).filter(|&i| w[i] != 0).collect();
    for &i in &support {
        assert!(
            amb_weights[i].iter().all(|&x| x == 0),
            "invariant covector touching a nonzero weight"
        );
    }

    // Basis: unit vectors off the support, then the kernel of w restricted
    // to its support (all of folded weight zero).
    let units: Vec<usize> = (0..ambient).filter(|&i| w[i] == 0).collect();
    let dim = units.len() + support.len() - 1;
    let w_support: Vec<i64> = support.iter().map(|&i| w[i]).collect();
    let kb = primitive_kernel_basis(&w_support);
    let mut cols: Cols = Vec::with_capacity(dim);
    let mut weights: Vec<Vec<i64>> = Vec::with_capacity(dim);
    for &u in &units {
        cols.push(vec![(u, 1)]);
        weights.push(amb_weights[u].clone());
    }
    for c in 0..kb.cols {
        cols.push(
            support
                .iter()
                .enumerate()
                .filter(|&(r, _)| kb.at(r, c) != 0)
                .map(|(r, &coord)| (coord, kb.at(r, c)))
                .collect(),
        );
        weights.push(vec![0i64; frank]);
    }
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = units
        .iter()
        .enumerate()
        .map(|(j, &u)| (vec![u], vec![j]))
        .collect();
    blocks.push((support.clone(), (units.len()..dim).collect()));
    let basis = EmbeddedBasis::new(ambient, cols, blocks);

    let mut op_polys = Vec::with_capacity(nroots);
    for poly in &folded_polys {
        let mut p: Vec<SparseMat> = poly[1..].iter().map(|c| basis.restrict(c)).collect();
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
        op_polys.push(p);
    }
    let mut cartan_mats = Vec::with_capacity(frank);
    for (i, c) in folded_cartan.iter().enumerate() {
        let m = basis.restrict(c);
        let diag: Vec<i64> = (0..dim).map(|b| weights[b][i]).collect();
        assert!(m.is_diag(&diag), "folded minimal cartan mismatch");
        cartan_mats.push(m);
    }

    ModuleOps {
        family: abs.family(),
        kind: ModuleKind::Minimal,
        dim,
        op_polys,
        cartan_mats,
        weights,
    }
}

/// Integral module operators for a (family, kind) pair, built once per
/// process. Panics for combinations the toolkit does not construct
/// (minimal modules of A2 and E8).
pub fn module_ops(family: Family, kind: ModuleKind) -> Arc<ModuleOps> {
    static CACHE: OnceLock<
        Mutex<HashMap<(Family, ModuleKind), Arc<OnceLock<Arc<ModuleOps>>>>>,
    > = OnceLock::new();
    let cell = {
        let map = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut g = map.lock().unwrap();
        g.entry((family, kind)).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(build_module_ops(family, kind))).clone()
}

fn build_module_ops(family: Family, kind: ModuleKind) -> ModuleOps {
    match (family, kind) {
        (Family::F4 | Family::G2, ModuleKind::Adjoint) => folded_adjoint(&fold_data(family)),
        (Family::F4 | Family::G2, ModuleKind::Minimal) => folded_minimal(&fold_data(family)),
        (_, ModuleKind::Adjoint) => plain_adjoint(&embedding(family)),
        (Family::A1, ModuleKind::Minimal) => coset_minimal(&embedding(family), 2),
        (Family::D4, ModuleKind::Minimal) => coset_minimal(&embedding(family), 8),
        (Family::E6, ModuleKind::Minimal) => coset_minimal(&embedding(family), 27),
        (Family::E7, ModuleKind::Minimal) => coset_minimal(&embedding(family), 56),
        (Family::A2 | Family::E8, ModuleKind::Minimal) => {
            panic!("no minimal module constructed for {:?}", family)
        }
    }
}

/// Chevalley structure constants of a family, read off the adjoint module
/// and fully validated: every `N(a,b)` has |N| = (string length) and the
/// opposite-root brackets give exactly the abstract coroots.
pub struct StructureConstants {
    pub family: Family,
    n: HashMap<(usize, usize), i64>,
}

impl StructureConstants {
    /// `N(α_a, α_b)`; zero when `α_a + α_b` is not a root.
    pub fn n(&self, a: usize, b: usize) -> i64 {
        self.n.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn pairs(&self) -> usize {
        self.n.len()
    }
}

pub fn structure_constants(family: Family) -> Arc<StructureConstants> {
    static CACHE: OnceLock<Mutex<HashMap<Family, Arc<OnceLock<Arc<StructureConstants>>>>>> =
        OnceLock::new();
    let cell = {
        let map = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut g = map.lock().unwrap();
        g.entry(family).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(build_structure_constants(family))).clone()
}

fn build_structure_constants(family: Family) -> StructureConstants {
    let abs = build_root_system(family);
    let ops = module_ops(family, ModuleKind::Adjoint);
    let r = abs.rank();
    let nroots = abs.num_roots();
    let mut n = HashMap::new();
    for a in 0..nroots {
        let d1 = ops.d_rho(a);
        for b in 0..nroots {
            let col = d1.col(r + b);
            if b == abs.neg_index(a) {
                // [e_a, e_{−a}] must be the coroot of a.
                let mut h = vec![0i64; r];
                for &(i, v) in col {
                    assert!(i < r, "opposite bracket outside the Cartan");
                    h[i] = v;
                }
                assert_eq!(h, abs.coroot_coords(a), "coroot mismatch at root {}", a);
            } else if let Some(k) = abs.sum_index(a, b) {
                assert_eq!(col.len(), 1, "root bracket not a single term");
                let (row, v) = col[0];
                assert_eq!(row, r + k);
                let p = abs.root_string_down(a, b);
                assert_eq!(v.abs(), p + 1, "|N| must equal string length");
                n.insert((a, b), v);
            } else {
                assert!(col.is_empty(), "unexpected bracket term");
            }
        }
        // Cartan columns: [e_a, h_i] = −⟨a, α_i∨⟩ e_a.
        for i in 0..r {
            let col = d1.col(i);
            let pair = abs.pairing_with_simple_coroot(abs.root(a), i);
            if pair == 0 {
                assert!(col.is_empty());
            } else {
                assert_eq!(col, &[(r + a, -pair)]);
            }
        }
    }
    StructureConstants { family, n }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_dimensions() {
        let cases = [
            (Family::A1, ModuleKind::Minimal, 2),
            (Family::A1, ModuleKind::Adjoint, 3),
            (Family::A2, ModuleKind::Adjoint, 8),
            (Family::D4, ModuleKind::Minimal, 8),
            (Family::D4, ModuleKind::Adjoint, 28),
            (Family::G2, ModuleKind::Minimal, 7),
            (Family::G2, ModuleKind::Adjoint, 14),
            (Family::F4, ModuleKind::Minimal, 26),
            (Family::F4, ModuleKind::Adjoint, 52),
            (Family::E6, ModuleKind::Minimal, 27),
            (Family::E6, ModuleKind::Adjoint, 78),
            (Family::E7, ModuleKind::Minimal, 56),
            (Family::E7, ModuleKind::Adjoint, 133),
            (Family::E8, ModuleKind::Adjoint, 248),
        ];
        for (family, kind, dim) in cases {
            assert_eq!(module_ops(family, kind).dim, dim, "{:?} {:?}", family, kind);
        }
    }

    #[test]
    fn structure_constants_antisymmetric_and_bounded() {
        for (family, max_n) in [
            (Family::A2, 1),
            (Family::D4, 1),
            (Family::E6, 1),
            (Family::E7, 1),
            (Family::E8, 1),
            (Family::F4, 2),
            (Family::G2, 3),
        ] {
            let abs = build_root_system(family);
            let c = structure_constants(family);
            let mut seen_max = 0i64;
            for a in 0..abs.num_roots() {
                for b in 0..abs.num_roots() {
                    if abs.sum_index(a, b).is_some() {
                        let n = c.n(a, b);
                        assert_eq!(c.n(b, a), -n, "antisymmetry");
                        let (na, nb) = (abs.neg_index(a), abs.neg_index(b));
                        assert_eq!(c.n(na, nb), -n, "chevalley negation");
                        seen_max = seen_max.max(n.abs());
                    }
                }
            }
            assert_eq!(seen_max, max_n, "{:?} max |N|", family);
        }
    }

    #[test]
    fn one_parameter_additivity_over_the_integers() {
        // x(t)·x(u) = x(t+u) exactly: the defining property of a divided-
        // power exponential, checked at integer points on every root of
        // every constructed module.
        let all = [
            (Family::A1, ModuleKind::Minimal),
            (Family::A1, ModuleKind::Adjoint),
            (Family::G2, ModuleKind::Minimal),
            (Family::G2, ModuleKind::Adjoint),
            (Family::F4, ModuleKind::Minimal),
            (Family::F4, ModuleKind::Adjoint),
            (Family::E6, ModuleKind::Minimal),
            (Family::E6, ModuleKind::Adjoint),
            (Family::E7, ModuleKind::Minimal),
            (Family::E7, ModuleKind::Adjoint),
            (Family::E8, ModuleKind::Adjoint),
        ];
        for (family, kind) in all {
            let ops = module_ops(family, kind);
            for root in 0..ops.num_roots() {
                let a = ops.eval_int(root, 3);
                let b = ops.eval_int(root, 5);
                let c = ops.eval_int(root, 8);
                assert_eq!(a.mul(&b), c, "{:?} {:?} root {}", family, kind, root);
            }
        }
    }

    #[test]
    fn minimal_module_weight_structure() {
        // E6: 27 distinct nonzero weights. E7: 56 distinct. F4: the 24
        // short roots plus a two-dimensional zero weight space. G2: the 6
        // short roots plus one zero.
        for (family, dim, zero_mult) in [
            (Family::E6, 27, 0usize),
            (Family::E7, 56, 0),
            (Family::F4, 26, 2),
            (Family::G2, 7, 1),
        ] {
            let ops = module_ops(family, ModuleKind::Minimal);
            assert_eq!(ops.dim, dim);
            let zeros = ops.weights().iter().filter(|w| w.iter().all(|&x| x == 0)).count();
            assert_eq!(zeros, zero_mult, "{:?} zero-weight multiplicity", family);
            let mut nonzero: Vec<&Vec<i64>> =
                ops.weights().iter().filter(|w| w.iter().any(|&x| x != 0)).collect();
            let total = nonzero.len();
            nonzero.sort();
            nonzero.dedup();
            assert_eq!(nonzero.len(), total, "{:?} nonzero weights distinct", family);
            if matches!(family, Family::F4 | Family::G2) {
                // Nonzero weights are exactly the short roots.
                let abs = build_root_system(family);
                let short: Vec<Vec<i64>> = (0..abs.num_roots())
                    .filter(|&i| abs.norm(i) == 2)
                    .map(|i| {
                        (0..abs.rank())
                            .map(|j| abs.pairing_with_simple_coroot(abs.root(i), j))
                            .collect()
                    })
                    .collect();
                for w in &nonzero {
                    assert!(short.contains(w), "{:?} weight not a short root", family);
                }
                assert_eq!(nonzero.len(), short.len());
            }
        }
    }

    #[test]
    fn folded_operator_degrees() {
        // Long-root operators of F4 come from a single fixed root (degree
        // ≤ 2); short-root operators are two-factor products (degree ≤ 4).
        // On the 26-dimensional module degrees stay ≤ 2.
        let f4 = build_root_system(Family::F4);
        let adj = module_ops(Family::F4, ModuleKind::Adjoint);
        let min = module_ops(Family::F4, ModuleKind::Minimal);
        for root in 0..f4.num_roots() {
            let deg_adj = adj.op_poly(root).len();
            let deg_min = min.op_poly(root).len();
            if f4.norm(root) == 4 {
                assert!(deg_adj <= 2, "long adjoint degree");
                assert!(deg_min <= 1, "long minimal degree");
            } else {
                assert!(deg_adj <= 4, "short adjoint degree");
                assert!(deg_min <= 2, "short minimal degree");
            }
        }
        // G2: short-root operators on the 7-dim module reach degree ≤ 3.
        let g2 = build_root_system(Family::G2);
        let min7 = module_ops(Family::G2, ModuleKind::Minimal);
        for root in 0..g2.num_roots() {
            assert!(min7.op_poly(root).len() <= 3);
            if g2.norm(root) == 6 {
                assert!(min7.op_poly(root).len() <= 1);
            }
        }
    }

    #[test]
    fn a1_minimal_is_the_natural_representation() {
        let ops = module_ops(Family::A1, ModuleKind::Minimal);
        assert_eq!(ops.dim, 2);
        // x(t) unipotent with a single off-diagonal ±t.
        let m = ops.eval_int(0, 1);
        let offdiag = (m.at(0, 1), m.at(1, 0));
        assert_eq!(m.at(0, 0), 1);
        assert_eq!(m.at(1, 1), 1);
        assert!(offdiag == (1, 0) || offdiag == (-1, 0) || offdiag == (0, 1) || offdiag == (0, -1));
        // Positive and negative root act on opposite sides.
        let n = ops.eval_int(1, 1);
        assert_eq!(n.at(0, 1) * m.at(0, 1) + n.at(1, 0) * m.at(1, 0), 0);
        // Weights ±1.
        let mut w: Vec<i64> = ops.weights().iter().map(|v| v[0]).collect();
        w.sort_unstable();
        assert_eq!(w, vec![-1, 1]);
    }

    #[test]
    fn cartan_operators_are_weight_diagonals() {
        for (family, kind) in [
            (Family::F4, ModuleKind::Minimal),
            (Family::F4, ModuleKind::Adjoint),
            (Family::G2, ModuleKind::Minimal),
            (Family::E6, ModuleKind::Minimal),
            (Family::E7, ModuleKind::Adjoint),
        ] {
            let ops = module_ops(family, kind);
            for i in 0..ops.rank() {
                let diag: Vec<i64> = (0..ops.dim).map(|b| ops.weights()[b][i]).collect();
                assert!(ops.cartan(i).is_diag(&diag));
            }
        }
    }
}
