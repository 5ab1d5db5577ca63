//! Small exact-arithmetic helpers shared by the lattice-construction and
//! representation code: dense integer matrices, exact rational elimination,
//! and primitive-vector completions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with `i64` entries, row-major.
///
/// Used for structure-constant data and divided-power matrices, where all
/// entries stay tiny; arithmetic that can grow (solving, determinants) is
/// delegated to [`BigInt`]-based routines below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<i64>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> i64 {
        self.a[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.a[r * self.cols + c] = v;
    }

    /// Matrix product, checking for `i64` overflow (entries in this crate
    /// are structure constants and stay far below the limit).
    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in IMat::mul");
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = aik
                        .checked_mul(other.at(k, j))
                        .expect("IMat::mul overflow");
                    let cell = &mut out.a[i * other.cols + j];
                    *cell = cell.checked_add(prod).expect("IMat::mul overflow");
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(other.a.iter()) {
            *x = x.checked_add(*y).expect("IMat::add overflow");
        }
        out
    }

    pub fn scale(&self, s: i64) -> IMat {
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            *x = x.checked_mul(s).expect("IMat::scale overflow");
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    /// Divide every entry exactly by `d`, panicking if any entry is not
    /// divisible. Used for divided powers (ad e)^k / k!.
    pub fn exact_div(&self, d: i64) -> IMat {
        assert!(d != 0);
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            assert!(*x % d == 0, "exact_div: {} not divisible by {}", *x, d);
            *x /= d;
        }
        out
    }

    pub fn col(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }
}

/// Exact rational number over [`BigInt`], kept normalized with positive
/// denominator. Only the handful of operations elimination needs.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: BigInt,
    pub den: BigInt,
}

impl Frac {
    pub fn from_i64(v: i64) -> Self {
        Frac { num: BigInt::from(v), den: BigInt::one() }
    }

    pub fn zero() -> Self {
        Frac { num: BigInt::zero(), den: BigInt::one() }
    }

    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.den = BigInt::one();
            return self;
        }
        if self.den.is_negative() {
            self.num = -self.num;
            self.den = -self.den;
        }
        let g = num_integer::Integer::gcd(&self.num, &self.den);
        if !g.is_one() {
            self.num /= &g;
            self.den /= &g;
        }
        self
    }

    pub fn add(&self, o: &Frac) -> Frac {
        Frac { num: &self.num * &o.den + &o.num * &self.den, den: &self.den * &o.den }
            .normalize()
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        Frac { num: &self.num * &o.den - &o.num * &self.den, den: &self.den * &o.den }
            .normalize()
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        Frac { num: &self.num * &o.num, den: &self.den * &o.den }.normalize()
    }

    pub fn div(&self, o: &Frac) -> Frac {
        assert!(!o.num.is_zero(), "Frac division by zero");
        Frac { num: &self.num * &o.den, den: &self.den * &o.num }.normalize()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Returns the value as an `i64` if it is an integer in range.
    pub fn to_integer(&self) -> Option<i64> {
        if self.den.is_one() {
            i64::try_from(&self.num).ok()
        } else {
            None
        }
    }
}

/// Solves `B * X = C` for `X` exactly over the rationals, where `B` is
/// `n×k` with full column rank and `C` is `n×m`. Returns the `k×m` solution
/// or `None` if the system is inconsistent.
///
/// The main use is restricting an integral operator to a saturated
/// sublattice: there the solution is guaranteed integral and the caller
/// asserts it with [`rational_solve_integral`].
pub fn rational_solve(b: &IMat, c: &IMat) -> Option<Vec<Vec<Frac>>> {
    assert_eq!(b.rows, c.rows);
    let n = b.rows;
    let k = b.cols;
    let m = c.cols;
    // Augmented matrix [B | C] over Frac, reduced by Gaussian elimination.
    let mut aug: Vec<Vec<Frac>> = (0..n)
        .map(|r| {
            (0..k + m)
                .map(|col| {
                    if col < k {
                        Frac::from_i64(b.at(r, col))
                    } else {
                        Frac::from_i64(c.at(r, col - k))
                    }
                })
                .collect()
        })
        .collect();

    let mut pivot_row_of_col = vec![usize::MAX; k];
    let mut row = 0usize;
    for col in 0..k {
        let Some(p) = (row..n).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let inv = aug[row][col].clone();
        for j in col..k + m {
            aug[row][j] = aug[row][j].div(&inv);
        }
        for r in 0..n {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for j in col..k + m {
                    let sub = aug[row][j].mul(&f);
                    aug[r][j] = aug[r][j].sub(&sub);
                }
            }
        }
        pivot_row_of_col[col] = row;
        row += 1;
        if row == n {
            break;
        }
    }
    // Full column rank required.
    if pivot_row_of_col.iter().any(|&r| r == usize::MAX) {
        return None;
    }
    // Consistency: all rows beyond the pivot rows must be zero on the C side.
    for r in row..n {
        if (k..k + m).any(|j| !aug[r][j].is_zero()) {
            return None;
        }
    }
    let mut x = vec![vec![Frac::zero(); m]; k];
    for col in 0..k {
        let pr = pivot_row_of_col[col];
        for j in 0..m {
            x[col][j] = aug[pr][k + j].clone();
        }
    }
    Some(x)
}

/// Like [`rational_solve`] but asserts the solution is integral and fits in
/// `i64`, returning it as an [`IMat`]. Panics if the system is inconsistent
/// or the solution non-integral: both indicate a broken saturation argument
/// upstream, which must fail loudly.
pub fn rational_solve_integral(b: &IMat, c: &IMat) -> IMat {
    let x = rational_solve(b, c).expect("inconsistent system in lattice restriction");
    let mut out = IMat::zero(b.cols, c.cols);
    for (r, xr) in x.iter().enumerate() {
        for (cidx, v) in xr.iter().enumerate() {
            let Some(i) = v.to_integer() else {
                panic!("non-integral entry in lattice restriction: {:?}", v);
            };
            out.set(r, cidx, i);
        }
    }
    out
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`,
/// `g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        let q = a.div_euclid(b);
        (g, y, x - q * y)
    }
}

/// Given a primitive integer covector `w` (gcd of entries 1) of length `n`,
/// returns an `n×(n-1)` integer matrix whose columns form a basis of the
/// kernel lattice `{ v : w·v = 0 }`.
///
/// Built from a chain of extended gcds: a unimodular column operation
/// matrix `U` with `w·U = (1, 0, …, 0)`; columns 1.. of `U` then span the
/// kernel saturatedly.
pub fn primitive_kernel_basis(w: &[i64]) -> IMat {
    let n = w.len();
    assert!(n >= 1);
    // U starts as identity; we perform column operations mirrored on the
    // running image vector `img = w · U`.
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();
    let mut img: Vec<i128> = w.iter().map(|&x| x as i128).collect();
    // Fold column j into column 0 via the extended gcd, for j = 1..n.
    for j in 1..n {
        let a = img[0];
        let b = img[j];
        if b == 0 {
            continue;
        }
        let (g, x, y) = ext_gcd(a, b);
        // New col0 = x*col0 + y*colj; new colj = -(b/g)*col0 + (a/g)*colj.
        // The 2x2 block [[x, -b/g], [y, a/g]] has determinant 1.
        let (bg, ag) = (b / g, a / g);
        for row in u.iter_mut() {
            let c0 = row[0];
            let cj = row[j];
            row[0] = x * c0 + y * cj;
            row[j] = -bg * c0 + ag * cj;
        }
        let (i0, ij) = (img[0], img[j]);
        img[0] = x * i0 + y * ij;
        img[j] = -bg * i0 + ag * ij;
        debug_assert_eq!(img[0], g);
        debug_assert_eq!(img[j], 0);
    }
    assert_eq!(img[0].abs(), 1, "covector not primitive");
    for &v in &img[1..] {
        assert_eq!(v, 0);
    }
    let mut out = IMat::zero(n, n - 1);
    for r in 0..n {
        for c in 1..n {
            out.set(r, c - 1, i64::try_from(u[r][c]).expect("kernel basis overflow"));
        }
    }
    out
}

/// Assembles the matrix whose columns are the given vectors.
pub fn cols_to_imat(cols: &[Vec<i64>]) -> IMat {
    assert!(!cols.is_empty());
    let n = cols[0].len();
    let mut m = IMat::zero(n, cols.len());
    for (c, v) in cols.iter().enumerate() {
        assert_eq!(v.len(), n);
        for (r, &x) in v.iter().enumerate() {
            m.set(r, c, x);
        }
    }
    m
}

/// Integer left inverse of a saturated full-column-rank integer matrix:
/// returns `L` (`m×k`) with `L·B = I_m` for `B` of shape `k×m`.
///
/// Row-reduces `[B | I_k]` with extended-gcd row operations; saturation of
/// the column lattice is exactly the condition that every pivot can be
/// driven to ±1, and the routine panics otherwise.
pub fn integer_left_inverse(b: &IMat) -> IMat {
    let (k, m) = (b.rows, b.cols);
    assert!(k >= m && m > 0);
    let w = m + k;
    let mut a: Vec<Vec<i128>> = (0..k)
        .map(|r| {
            (0..w)
                .map(|c| {
                    if c < m {
                        b.at(r, c) as i128
                    } else if c - m == r {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..m {
        // Euclidean elimination below the diagonal until one entry remains.
        loop {
            let Some(p) = (col..k)
                .filter(|&r| a[r][col] != 0)
                .min_by_key(|&r| (a[r][col].unsigned_abs(), r))
            else {
                panic!("integer_left_inverse: rank-deficient basis");
            };
            a.swap(col, p);
            let mut others = false;
            for r in col + 1..k {
                if a[r][col] != 0 {
                    others = true;
                    let q = a[r][col].div_euclid(a[col][col]);
                    for c in 0..w {
                        a[r][c] -= q * a[col][c];
                    }
                }
            }
            if !others {
                break;
            }
        }
        let piv = a[col][col];
        assert!(
            piv == 1 || piv == -1,
            "integer_left_inverse: basis not saturated (pivot {})",
            piv
        );
        if piv == -1 {
            for c in 0..w {
                a[col][c] = -a[col][c];
            }
        }
        for r in 0..col {
            let q = a[r][col];
            if q != 0 {
                for c in 0..w {
                    a[r][c] -= q * a[col][c];
                }
            }
        }
    }
    let mut l = IMat::zero(m, k);
    for r in 0..m {
        for c in 0..k {
            l.set(r, c, i64::try_from(a[r][m + c]).expect("left inverse overflow"));
        }
    }
    debug_assert_eq!(l.mul(b), IMat::identity(m));
    l
}

/// Basis of the rational kernel of an integer matrix, returned as integer
/// columns each scaled primitive (entries coprime, first nonzero positive).
/// The columns are independent and span the kernel over ℚ; callers that
/// need lattice saturation handle it separately.
pub fn integer_kernel(a: &IMat) -> IMat {
    let (n, m) = (a.rows, a.cols);
    let mut aug: Vec<Vec<Frac>> =
        (0..n).map(|r| (0..m).map(|c| Frac::from_i64(a.at(r, c))).collect()).collect();
    let mut pivot_of_col = vec![usize::MAX; m];
    let mut row = 0usize;
    for col in 0..m {
        let Some(p) = (row..n).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let inv = aug[row][col].clone();
        for j in col..m {
            aug[row][j] = aug[row][j].div(&inv);
        }
        for r in 0..n {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for j in col..m {
                    let s = aug[row][j].mul(&f);
                    aug[r][j] = aug[r][j].sub(&s);
                }
            }
        }
        pivot_of_col[col] = row;
        row += 1;
        if row == n {
            break;
        }
    }
    let free: Vec<usize> =
        (0..m).filter(|&c| pivot_of_col[c] == usize::MAX).collect();
    let mut out = IMat::zero(m, free.len());
    for (j, &fc) in free.iter().enumerate() {
        // x_fc = 1, pivot variables read off the reduced rows.
        let mut x = vec![Frac::zero(); m];
        x[fc] = Frac::from_i64(1);
        for c in 0..m {
            let pr = pivot_of_col[c];
            if pr != usize::MAX {
                x[c] = Frac::zero().sub(&aug[pr][fc]);
            }
        }
        // Clear denominators, then divide by the gcd and fix the sign.
        let mut lcm = BigInt::one();
        for v in &x {
            lcm = num_integer::Integer::lcm(&lcm, &v.den);
        }
        let mut ints: Vec<BigInt> =
            x.iter().map(|v| &v.num * (&lcm / &v.den)).collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = num_integer::Integer::gcd(&g, v);
        }
        if !g.is_zero() && !g.is_one() {
            for v in ints.iter_mut() {
                *v /= &g;
            }
        }
        if let Some(first) = ints.iter().find(|v| !v.is_zero()) {
            if first.is_negative() {
                for v in ints.iter_mut() {
                    *v = -v.clone();
                }
            }
        }
        for (r, v) in ints.iter().enumerate() {
            out.set(r, j, i64::try_from(v).expect("kernel overflow"));
        }
    }
    out
}

/// SHA-256 of a byte slice as a lowercase hex string.
pub fn sha256_hex(data: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(data);
    let out = h.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        s.push_str(&format!("{:02x}", b));
    }
    s
}

/// SplitMix64 step, used to derive per-worker RNG seeds from a master seed
/// deterministically.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_bezout() {
        for a in -30i128..30 {
            for b in -30i128..30 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert!(g >= 0);
                if a != 0 || b != 0 {
                    assert_eq!(a % g.max(1), 0);
                    assert_eq!(b % g.max(1), 0);
                }
            }
        }
    }

    #[test]
    fn kernel_basis_of_primitive_covector() {
        let w = vec![3i64, 5, -7, 2, 9];
        let k = primitive_kernel_basis(&w);
        assert_eq!((k.rows, k.cols), (5, 4));
        for c in 0..4 {
            let dot: i64 = (0..5).map(|r| w[r] * k.at(r, c)).sum();
            assert_eq!(dot, 0);
        }
        // Saturation: the kernel basis extends to a unimodular matrix, so
        // any integer vector with w·v = 0 is an integer combination of the
        // columns. Spot-check one such vector by solving.
        let v = vec![5i64, -3, 0, 0, 0]; // 3*5 - 5*3 = 0
        let c = cols_to_imat(&[v.clone()]);
        let sol = rational_solve_integral(&k, &c);
        let mut rebuilt = vec![0i64; 5];
        for r in 0..5 {
            for j in 0..4 {
                rebuilt[r] += k.at(r, j) * sol.at(j, 0);
            }
        }
        assert_eq!(rebuilt, v);
    }

    #[test]
    fn rational_solve_rejects_inconsistent() {
        // B = [[1],[0]], C = [[0],[1]] has no solution.
        let b = cols_to_imat(&[vec![1, 0]]);
        let c = cols_to_imat(&[vec![0, 1]]);
        assert!(rational_solve(&b, &c).is_none());
    }

    #[test]
    fn left_inverse_of_saturated_bases() {
        // Saturated: columns extend to a unimodular basis.
        let b = cols_to_imat(&[vec![1, 1, 0], vec![0, 2, 1]]);
        let l = integer_left_inverse(&b);
        assert_eq!(l.mul(&b), IMat::identity(2));
        // (1,1)ᵀ is saturated but its Gram pseudo-inverse is not integral;
        // the HNF route must still find an integer left inverse.
        let b = cols_to_imat(&[vec![1, 1]]);
        let l = integer_left_inverse(&b);
        assert_eq!(l.mul(&b), IMat::identity(1));
    }

    #[test]
    #[should_panic(expected = "not saturated")]
    fn left_inverse_rejects_unsaturated() {
        let b = cols_to_imat(&[vec![2, 0], vec![0, 1]]);
        let _ = integer_left_inverse(&b);
    }

    #[test]
    fn integer_kernel_matches_rank() {
        // Rank-2 matrix on 4 columns: kernel dimension 2.
        let mut a = IMat::zero(3, 4);
        let rows = [[1i64, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]];
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                a.set(r, c, v);
            }
        }
        let k = integer_kernel(&a);
        assert_eq!(k.cols, 2);
        let prod = a.mul(&k);
        assert!(prod.is_zero());
        // Columns primitive.
        for c in 0..k.cols {
            let g = (0..k.rows).map(|r| k.at(r, c)).fold(0i64, |acc, v| {
                num_integer::Integer::gcd(&acc, &v)
            });
            assert_eq!(g, 1);
        }
    }

    #[test]
    fn imat_mul_identity() {
        let m = cols_to_imat(&[vec![1, 2], vec![3, 4]]);
        let id = IMat::identity(2);
        assert_eq!(m.mul(&id), m);
        assert_eq!(id.mul(&m), m);
    }
}
