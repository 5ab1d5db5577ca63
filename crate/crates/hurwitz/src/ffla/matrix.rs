//! Dense matrices over GF(q).
//!
//! Entries are stored row-major as `u16` field codes (see
//! [`FieldCtx`](super::FieldCtx) for the encoding). Matrices are immutable
//! in the public API: operations return new matrices. Prime fields get a
//! delayed-reduction multiply; extension fields go through the Zech tables.

use super::field::FieldCtx;
use super::FflaError;
use num_bigint::BigUint;
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixGF {
    field: FieldCtx,
    rows: usize,
    cols: usize,
    d: Vec<u16>,
}

impl std::fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MatrixGF {}x{} over GF({})", self.rows, self.cols, self.field.q())?;
        for r in 0..self.rows.min(12) {
            let row: Vec<String> = (0..self.cols.min(20))
                .map(|c| self.field.poly_code(self.at(r, c)).to_string())
                .collect();
            writeln!(f, "  [{}{}]", row.join(" "), if self.cols > 20 { " …" } else { "" })?;
        }
        if self.rows > 12 {
            writeln!(f, "  …")?;
        }
        Ok(())
    }
}

impl MatrixGF {
    pub fn zero(field: FieldCtx, rows: usize, cols: usize) -> Self {
        MatrixGF { field, rows, cols, d: vec![0; rows * cols] }
    }

    pub fn identity(field: FieldCtx, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        let one = m.field.one();
        for i in 0..n {
            m.d[i * n + i] = one;
        }
        m
    }

    /// Scalar matrix `c·I`.
    pub fn scalar(field: FieldCtx, n: usize, c: u16) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.d[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(field: FieldCtx, rows: &[Vec<u16>]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].len();
        let mut d = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            d.extend_from_slice(r);
        }
        MatrixGF { field, rows: rows.len(), cols, d }
    }

    pub fn from_fn(field: FieldCtx, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u16) -> Self {
        let mut m = Self::zero(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.d[r * cols + c] = f(r, c);
            }
        }
        m
    }

    /// Reduction of an integer matrix into GF(q) via the prime subfield.
    pub fn from_int_entries(field: FieldCtx, rows: usize, cols: usize, a: &[i64]) -> Self {
        assert_eq!(a.len(), rows * cols);
        let mut m = Self::zero(field.clone(), rows, cols);
        for (dst, &v) in m.d.iter_mut().zip(a.iter()) {
            *dst = field.from_int(v);
        }
        m
    }

    #[inline]
    pub fn field(&self) -> &FieldCtx {
        &self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u16 {
        self.d[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.d[r * self.cols + c] = v;
    }
    #[inline]
    pub fn data(&self) -> &[u16] {
        &self.d
    }

    /// Column `c` as a vector.
    pub fn col(&self, c: usize) -> Vec<u16> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let one = self.field.one();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let want = if r == c { one } else { 0 };
                if self.at(r, c) != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &MatrixGF) -> MatrixGF {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        assert_eq!(self.field, o.field);
        let mut out = self.clone();
        for (x, &y) in out.d.iter_mut().zip(o.d.iter()) {
            *x = self.field.add(*x, y);
        }
        out
    }

    pub fn sub(&self, o: &MatrixGF) -> MatrixGF {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        assert_eq!(self.field, o.field);
        let mut out = self.clone();
        for (x, &y) in out.d.iter_mut().zip(o.d.iter()) {
            *x = self.field.sub(*x, y);
        }
        out
    }

    pub fn neg(&self) -> MatrixGF {
        let mut out = self.clone();
        for x in out.d.iter_mut() {
            *x = self.field.neg(*x);
        }
        out
    }

    pub fn scale(&self, c: u16) -> MatrixGF {
        let mut out = self.clone();
        for x in out.d.iter_mut() {
            *x = self.field.mul(*x, c);
        }
        out
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> MatrixGF {
        assert!(self.is_square());
        let mut out = self.clone();
        let f = &self.field;
        for i in 0..self.rows {
            let v = out.d[i * self.cols + i];
            out.d[i * self.cols + i] = f.sub(v, f.one());
        }
        out
    }

    pub fn mul(&self, o: &MatrixGF) -> MatrixGF {
        assert_eq!(self.cols, o.rows, "dimension mismatch in mul");
        assert_eq!(self.field, o.field);
        let f = self.field.clone();
        let (n, k, m) = (self.rows, self.cols, o.cols);
        let mut out = MatrixGF::zero(f.clone(), n, m);
        if f.n() == 1 {
            // Prime field: values are literal; accumulate row sums in u64
            // with one reduction per output entry (products are < 2^32 and
            // there are ≤ 2^16 of them, so u64 cannot overflow).
            let p = f.p() as u64;
            let mut scratch = vec![0u64; m];
            for i in 0..n {
                scratch.iter_mut().for_each(|s| *s = 0);
                for kk in 0..k {
                    let a = self.d[i * k + kk] as u64;
                    if a == 0 {
                        continue;
                    }
                    let brow = &o.d[kk * m..kk * m + m];
                    for (s, &b) in scratch.iter_mut().zip(brow.iter()) {
                        *s += a * b as u64;
                    }
                }
                for (dst, &s) in out.d[i * m..i * m + m].iter_mut().zip(scratch.iter()) {
                    *dst = (s % p) as u16;
                }
            }
        } else {
            for i in 0..n {
                for kk in 0..k {
                    let a = self.d[i * k + kk];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..m {
                        let b = o.d[kk * m + j];
                        if b == 0 {
                            continue;
                        }
                        let idx = i * m + j;
                        out.d[idx] = f.add(out.d[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Matrix–vector product `self · v`.
    pub fn matvec(&self, v: &[u16]) -> Vec<u16> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        let mut out = vec![0u16; self.rows];
        if f.n() == 1 {
            let p = f.p() as u64;
            for r in 0..self.rows {
                let mut acc = 0u64;
                let row = &self.d[r * self.cols..(r + 1) * self.cols];
                for (&a, &x) in row.iter().zip(v.iter()) {
                    acc += a as u64 * x as u64;
                }
                out[r] = (acc % p) as u16;
            }
        } else {
            for r in 0..self.rows {
                let mut acc = 0u16;
                for c in 0..self.cols {
                    let a = self.at(r, c);
                    if a != 0 && v[c] != 0 {
                        acc = f.add(acc, f.mul(a, v[c]));
                    }
                }
                out[r] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> MatrixGF {
        let mut out = MatrixGF::zero(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.d[c * self.rows + r] = self.at(r, c);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u128) -> MatrixGF {
        assert!(self.is_square());
        let mut acc = MatrixGF::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn pow_big(&self, e: &BigUint) -> MatrixGF {
        assert!(self.is_square());
        let mut acc = MatrixGF::identity(self.field.clone(), self.rows);
        if e.is_zero() {
            return acc;
        }
        let bits = e.bits();
        let mut base = self.clone();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base);
            }
            if i + 1 < bits {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// In-place reduction to reduced row-echelon form; returns pivot column
    /// indices in order.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (nr, nc) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..nc {
            if row == nr {
                break;
            }
            let Some(pr) = (row..nr).find(|&r| self.at(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..nc {
                    self.d.swap(pr * nc + c, row * nc + c);
                }
            }
            let inv = f.inv(self.at(row, col));
            if inv != f.one() {
                for c in col..nc {
                    let v = self.at(row, c);
                    self.set(row, c, f.mul(v, inv));
                }
            }
            for r in 0..nr {
                if r == row {
                    continue;
                }
                let factor = self.at(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..nc {
                    let sub = f.mul(factor, self.at(row, c));
                    let v = self.at(r, c);
                    self.set(r, c, f.sub(v, sub));
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Dimension of the right kernel.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right kernel, returned as the columns of a matrix
    /// (`cols × nullity`).
    pub fn kernel_basis(&self) -> MatrixGF {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = MatrixGF::zero(f.clone(), self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                // Row i of the RREF reads: x_pc + Σ m[i][free] x_free = 0.
                let v = m.at(i, fc);
                if v != 0 {
                    out.set(pc, j, f.neg(v));
                }
            }
        }
        out
    }

    /// `dim { v : g·v = v }` for square `g`.
    pub fn fixed_space_dim(&self) -> usize {
        assert!(self.is_square());
        self.minus_identity().kernel_dim()
    }

    pub fn inverse(&self) -> Option<MatrixGF> {
        assert!(self.is_square());
        let n = self.rows;
        let f = self.field.clone();
        let mut aug = MatrixGF::zero(f.clone(), n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c));
            }
            aug.set(r, n + r, f.one());
        }
        let pivots = aug.row_reduce();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut out = MatrixGF::zero(f, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.at(r, n + c));
            }
        }
        Some(out)
    }

    pub fn det(&self) -> u16 {
        assert!(self.is_square());
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        let mut row = 0usize;
        for col in 0..n {
            let Some(pr) = (row..n).find(|&r| m.at(r, col) != 0) else {
                return f.zero();
            };
            if pr != row {
                for c in 0..n {
                    m.d.swap(pr * n + c, row * n + c);
                }
                det = f.neg(det);
            }
            let piv = m.at(row, col);
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for r in row + 1..n {
                let factor = f.mul(m.at(r, col), inv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let sub = f.mul(factor, m.at(row, c));
                    let v = m.at(r, c);
                    m.set(r, c, f.sub(v, sub));
                }
            }
            row += 1;
        }
        det
    }

    pub fn trace(&self) -> u16 {
        assert!(self.is_square());
        let f = &self.field;
        let mut t = 0u16;
        for i in 0..self.rows {
            t = f.add(t, self.at(i, i));
        }
        t
    }

    /// Canonical single-line text form: `rows cols e…` with entries as
    /// base-p polynomial codes in row-major order, each written in
    /// lowercase hex. Stable across runs and platforms; used by the
    /// witness format.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = format!("{} {}", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let _ = write!(s, " {:x}", self.field.poly_code(self.at(r, c)));
            }
        }
        s
    }

    pub fn from_text(field: FieldCtx, s: &str) -> Result<MatrixGF, String> {
        let mut it = s.split_ascii_whitespace();
        let rows: usize =
            it.next().ok_or("missing rows")?.parse().map_err(|e| format!("rows: {e}"))?;
        let cols: usize =
            it.next().ok_or("missing cols")?.parse().map_err(|e| format!("cols: {e}"))?;
        let mut m = MatrixGF::zero(field.clone(), rows, cols);
        for i in 0..rows * cols {
            let tok = it.next().ok_or_else(|| format!("missing entry {i}"))?;
            let code = u32::from_str_radix(tok, 16).map_err(|e| format!("entry {i}: {e}"))?;
            if code >= field.q() {
                return Err(format!("entry {i} out of range for GF({})", field.q()));
            }
            m.d[i] = field.from_poly_code(code);
        }
        if it.next().is_some() {
            return Err("trailing data after matrix entries".into());
        }
        Ok(m)
    }

    /// Uniformly random matrix (test helper).
    pub fn random<R: rand::Rng>(field: FieldCtx, rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zero(field.clone(), rows, cols);
        for x in m.d.iter_mut() {
            *x = field.sample(rng);
        }
        m
    }

    /// Uniformly random invertible matrix (test helper; rejection-sampled).
    pub fn random_invertible<R: rand::Rng>(field: FieldCtx, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field.clone(), n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }
}

/// Jordan block sizes of a unipotent matrix, descending.
///
/// Computed from the rank sequence `r_k = rank((g−I)^k)`: the number of
/// blocks of size ≥ k is `r_{k-1} − r_k`, so size-k blocks number
/// `(r_{k-1} − r_k) − (r_k − r_{k+1})`.
pub fn jordan_partition(g: &MatrixGF) -> Result<Vec<u32>, FflaError> {
    assert!(g.is_square());
    let n = g.rows();
    let nil = g.minus_identity();
    let mut ranks = vec![n];
    let mut pw = nil.clone();
    loop {
        let r = pw.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
        if ranks.len() > n + 1 {
            return Err(FflaError::NotUnipotent);
        }
        let last = ranks[ranks.len() - 2];
        if r == last {
            // Rank stabilized above zero: (g−I) is not nilpotent.
            return Err(FflaError::NotUnipotent);
        }
        pw = pw.mul(&nil);
    }
    let k_max = ranks.len() - 1;
    let rk = |k: usize| -> usize {
        if k < ranks.len() {
            ranks[k]
        } else {
            0
        }
    };
    let mut parts = Vec::new();
    for k in 1..=k_max {
        let count = (rk(k - 1) - rk(k)) - (rk(k) - rk(k + 1));
        for _ in 0..count {
            parts.push(k as u32);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(parts.iter().sum::<u32>() as usize, n);
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> FieldCtx {
        FieldCtx::new(q).unwrap()
    }

    /// Companion matrix of x^3 + x + 1 over GF(2) has multiplicative
    /// order 7 (the polynomial is primitive), giving a frozen end-to-end
    /// check of mul/pow.
    #[test]
    fn companion_of_primitive_cubic_has_order_seven() {
        let f = gf(2);
        let c = MatrixGF::from_rows(
            f.clone(),
            &[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]],
        );
        let mut acc = MatrixGF::identity(f, 3);
        for step in 1..=7u32 {
            acc = acc.mul(&c);
            if step < 7 {
                assert!(!acc.is_identity(), "order divides {} unexpectedly", step);
            }
        }
        assert!(acc.is_identity());
    }

    /// Kernel of a hand-reduced matrix over GF(5):
    /// rows (1 2 0 4; 2 4 0 3; 0 0 1 1) → rank 3 would be wrong; the second
    /// row is 2×first plus (0 0 0 0)? 2*(1 2 0 4) = (2 4 0 8=3): yes equal,
    /// so rank 2 and nullity 2.
    #[test]
    fn kernel_dim_matches_hand_reduction() {
        let f = gf(5);
        let m = MatrixGF::from_rows(
            f,
            &[vec![1, 2, 0, 4], vec![2, 4, 0, 3], vec![0, 0, 1, 1]],
        );
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel_dim(), 2);
        let k = m.kernel_basis();
        assert_eq!((k.rows(), k.cols()), (4, 2));
        // Every basis column really lies in the kernel.
        for j in 0..2 {
            let v: Vec<u16> = (0..4).map(|r| k.at(r, j)).collect();
            assert!(m.matvec(&v).iter().all(|&x| x == 0));
        }
    }

    /// fixed_space_dim against exhaustive enumeration of GF(2)^3.
    #[test]
    fn fixed_space_dim_exhaustive_gf2() {
        let f = gf(2);
        let g = MatrixGF::from_rows(
            f,
            &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]],
        );
        let mut fixed = 0;
        for bits in 0..8u32 {
            let v = vec![(bits & 1) as u16, ((bits >> 1) & 1) as u16, ((bits >> 2) & 1) as u16];
            if g.matvec(&v) == v {
                fixed += 1;
            }
        }
        // 2^fixed_space_dim vectors are fixed.
        assert_eq!(1usize << g.fixed_space_dim(), fixed);
    }

    /// A block-diagonal unipotent with Jordan blocks J2 ⊕ J2 ⊕ J1 over
    /// GF(3) yields partition [2,2,1]; rank sequence checked by hand:
    /// rank(N) = 2, rank(N²) = 0.
    #[test]
    fn jordan_partition_2_2_1() {
        let f = gf(3);
        let g = MatrixGF::from_rows(
            f,
            &[
                vec![1, 1, 0, 0, 0],
                vec![0, 1, 0, 0, 0],
                vec![0, 0, 1, 1, 0],
                vec![0, 0, 0, 1, 0],
                vec![0, 0, 0, 0, 1],
            ],
        );
        assert_eq!(jordan_partition(&g).unwrap(), vec![2, 2, 1]);
    }

    #[test]
    fn jordan_partition_rejects_semisimple() {
        let f = gf(3);
        let g = MatrixGF::from_rows(f, &[vec![2, 0], vec![0, 1]]);
        assert!(matches!(jordan_partition(&g), Err(FflaError::NotUnipotent)));
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2u64, 3, 4, 5, 9, 25] {
            let f = gf(q);
            for n in [1usize, 2, 5, 8] {
                let m = MatrixGF::random_invertible(f.clone(), n, &mut rng);
                let inv = m.inverse().expect("invertible by construction");
                assert!(m.mul(&inv).is_identity());
                assert!(inv.mul(&m).is_identity());
            }
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse_and_det_zero() {
        let f = gf(7);
        let m = MatrixGF::from_rows(f, &[vec![1, 2], vec![2, 4]]);
        assert!(m.inverse().is_none());
        assert_eq!(m.det(), 0);
    }

    #[test]
    fn det_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = gf(9);
        for _ in 0..20 {
            let a = MatrixGF::random(f.clone(), 4, 4, &mut rng);
            let b = MatrixGF::random(f.clone(), 4, 4, &mut rng);
            assert_eq!(a.mul(&b).det(), f.mul(a.det(), b.det()));
        }
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let f = gf(4);
        let m = MatrixGF::random(f.clone(), 5, 5, &mut rng);
        let mut acc = MatrixGF::identity(f, 5);
        for e in 0..16u32 {
            assert_eq!(m.pow(e as u128), acc);
            assert_eq!(m.pow_big(&BigUint::from(e)), acc);
            acc = acc.mul(&m);
        }
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for q in [3u64, 8, 49] {
            let f = gf(q);
            let m = MatrixGF::random(f.clone(), 3, 7, &mut rng);
            let s = m.to_text();
            let back = MatrixGF::from_text(f, &s).unwrap();
            assert_eq!(m, back);
        }
    }

    #[test]
    fn rank_nullity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for q in [2u64, 3, 5, 8] {
            let f = gf(q);
            for _ in 0..25 {
                let r = 1 + (rng.gen_range(0..6) as usize);
                let c = 1 + (rng.gen_range(0..6) as usize);
                let m = MatrixGF::random(f.clone(), r, c, &mut rng);
                assert_eq!(m.rank() + m.kernel_dim(), c);
                assert_eq!(m.rank(), m.transpose().rank());
            }
        }
    }
}
