//! Dense univariate polynomials over GF(q), with full factorization
//! (squarefree decomposition, distinct-degree, Cantor–Zassenhaus) and
//! minimal polynomials of matrices.
//!
//! Factorization is randomized but deterministic given the caller's RNG;
//! everything else is exact and branch-deterministic.

use super::field::FieldCtx;
use super::matrix::MatrixGF;
use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

/// Polynomial with ascending coefficients, normalized so the last
/// coefficient is nonzero (the zero polynomial has an empty vector).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldCtx,
    c: Vec<u16>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &co) in self.c.iter().enumerate().rev() {
            if co == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let code = self.field.poly_code(co);
            match i {
                0 => write!(f, "{}", code)?,
                1 => {
                    if code != 1 {
                        write!(f, "{}·", code)?;
                    }
                    write!(f, "x")?;
                }
                _ => {
                    if code != 1 {
                        write!(f, "{}·", code)?;
                    }
                    write!(f, "x^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero(field: FieldCtx) -> Self {
        Poly { field, c: vec![] }
    }

    pub fn one(field: FieldCtx) -> Self {
        let one = field.one();
        Poly { field, c: vec![one] }
    }

    pub fn x(field: FieldCtx) -> Self {
        let one = field.one();
        Poly { field, c: vec![0, one] }
    }

    pub fn constant(field: FieldCtx, v: u16) -> Self {
        Poly { field, c: if v == 0 { vec![] } else { vec![v] } }
    }

    pub fn from_coeffs(field: FieldCtx, mut c: Vec<u16>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { field, c }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn coeffs(&self) -> &[u16] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == self.field.one()
    }

    /// Degree; panics on the zero polynomial.
    pub fn deg(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.c.len() - 1
    }

    pub fn leading(&self) -> u16 {
        *self.c.last().expect("leading coefficient of zero polynomial")
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let mut c = vec![0u16; n];
        for (i, ci) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = o.c.get(i).copied().unwrap_or(0);
            *ci = f.add(a, b);
        }
        Poly::from_coeffs(f.clone(), c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let mut c = vec![0u16; n];
        for (i, ci) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = o.c.get(i).copied().unwrap_or(0);
            *ci = f.sub(a, b);
        }
        Poly::from_coeffs(f.clone(), c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field.clone());
        }
        let f = &self.field;
        let mut c = vec![0u16; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f.clone(), c)
    }

    pub fn mul_scalar(&self, s: u16) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f.clone(), self.c.iter().map(|&a| f.mul(a, s)).collect())
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = self.field.clone();
        if self.is_zero() || self.c.len() < d.c.len() {
            return (Poly::zero(f), self.clone());
        }
        let lead_inv = f.inv(d.leading());
        let mut rem = self.c.clone();
        let dn = d.c.len();
        let qlen = rem.len() - dn + 1;
        let mut q = vec![0u16; qlen];
        for i in (0..qlen).rev() {
            let coeff = f.mul(rem[i + dn - 1], lead_inv);
            if coeff == 0 {
                continue;
            }
            q[i] = coeff;
            for (j, &dj) in d.c.iter().enumerate() {
                let sub = f.mul(coeff, dj);
                rem[i + j] = f.sub(rem[i + j], sub);
            }
        }
        (Poly::from_coeffs(f.clone(), q), Poly::from_coeffs(f, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Exact division, asserting zero remainder.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        if l == self.field.one() {
            self.clone()
        } else {
            self.mul_scalar(self.field.inv(l))
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic lcm.
    pub fn lcm(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field.clone());
        }
        self.mul(o).div_exact(&self.gcd(o)).monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        if self.c.len() <= 1 {
            return Poly::zero(f.clone());
        }
        let mut c = vec![0u16; self.c.len() - 1];
        for (i, ci) in c.iter_mut().enumerate() {
            let k = f.from_int((i + 1) as i64);
            *ci = f.mul(self.c[i + 1], k);
        }
        Poly::from_coeffs(f.clone(), c)
    }

    pub fn eval(&self, at: u16) -> u16 {
        let f = &self.field;
        let mut acc = 0u16;
        for &co in self.c.iter().rev() {
            acc = f.add(f.mul(acc, at), co);
        }
        acc
    }

    /// `self^e mod m` by square-and-multiply over the exponent's bits.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let f = self.field.clone();
        let mut acc = Poly::one(f);
        let mut base = self.rem(m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// For `f` with zero derivative in characteristic p, every exponent is
    /// a multiple of p; returns `g` with `g(x^p) = f(x)` (taking p-th roots
    /// of coefficients via the Frobenius inverse `a ↦ a^(q/p)`).
    fn pth_root_decompose(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let root_exp = (f.q() / f.p()) as u64; // a^(q/p) is the p-th root in GF(q)
        let mut c = Vec::with_capacity(self.c.len() / p + 1);
        for (i, &co) in self.c.iter().enumerate() {
            if i % p == 0 {
                c.push(f.pow(co, root_exp));
            } else {
                assert_eq!(co, 0, "pth_root on polynomial with f' != 0");
            }
        }
        Poly::from_coeffs(f.clone(), c)
    }
}

/// Squarefree decomposition: returns pairs `(g, m)` with `g` squarefree
/// monic pairwise coprime and `self = lc · Π g^m`.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field().clone();
    let p = field.p();
    let f = f.monic();
    if f.is_one() {
        return vec![];
    }
    let fp = f.derivative();
    if fp.is_zero() {
        // f = h(x^p): recurse with multiplicities scaled by p.
        let h = f.pth_root_decompose();
        return squarefree_decomposition(&h)
            .into_iter()
            .map(|(g, m)| (g, m * p))
            .collect();
    }
    let mut out = Vec::new();
    let mut g = f.gcd(&fp);
    let mut w = f.div_exact(&g);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&g);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        g = g.div_exact(&y);
        w = y;
    }
    if !g.is_one() {
        let h = g.pth_root_decompose();
        for (fac, m) in squarefree_decomposition(&h) {
            out.push((fac, m * p));
        }
    }
    out
}

/// Distinct-degree split of a squarefree monic polynomial: returns pairs
/// `(product-of-irreducibles, degree)`.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field().clone();
    let q = BigUint::from(field.q());
    let x = Poly::x(field.clone());
    let mut rem = f.clone();
    let mut h = x.clone();
    let mut d = 0usize;
    let mut out = Vec::new();
    while !rem.is_one() && rem.deg() > 0 {
        d += 1;
        if 2 * d > rem.deg() {
            let deg = rem.deg();
            out.push((rem.clone(), deg));
            break;
        }
        h = h.pow_mod(&q, &rem);
        let g = h.sub(&x).gcd(&rem);
        if !g.is_one() {
            out.push((g.clone(), d));
            rem = rem.div_exact(&g);
            h = h.rem(&rem);
        }
    }
    out
}

/// Equal-degree (Cantor–Zassenhaus) factorization of a squarefree monic
/// product of degree-`d` irreducibles.
fn equal_degree<R: Rng>(f: &Poly, d: usize, rng: &mut R, out: &mut Vec<Poly>) {
    if f.deg() == d {
        out.push(f.monic());
        return;
    }
    let field = f.field().clone();
    let qe = field.q() as u64;
    loop {
        // Random polynomial of degree < deg f (nonconstant helps).
        let mut coeffs = vec![0u16; f.deg()];
        for cc in coeffs.iter_mut() {
            *cc = field.sample(rng);
        }
        let r = Poly::from_coeffs(field.clone(), coeffs);
        if r.is_zero() {
            continue;
        }
        let g = if field.p() == 2 {
            // Additive trace splitting: T(r) = Σ r^(2^i), i < d·n.
            let steps = d as u32 * field.n();
            let mut t = r.rem(f);
            let mut term = r.rem(f);
            for _ in 1..steps {
                term = term.mul(&term).rem(f);
                t = t.add(&term);
            }
            t.gcd(f)
        } else {
            // r^((q^d-1)/2) − 1 splits the roots by quadratic character.
            let e = (BigUint::from(qe).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let s = r.pow_mod(&e, f);
            s.sub(&Poly::one(field.clone())).gcd(f)
        };
        if !g.is_one() && g.deg() < f.deg() {
            equal_degree(&g, d, rng, out);
            equal_degree(&f.div_exact(&g), d, rng, out);
            return;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficient codes) for determinism.
pub fn factor<R: Rng>(f: &Poly, rng: &mut R) -> Vec<(Poly, u32)> {
    assert!(!f.is_zero(), "factor of zero polynomial");
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (sqfree, mult) in squarefree_decomposition(f) {
        for (prod, d) in distinct_degree(&sqfree) {
            let mut irr = Vec::new();
            equal_degree(&prod, d, rng, &mut irr);
            for g in irr {
                out.push((g, mult));
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.c.len()
            .cmp(&b.c.len())
            .then_with(|| {
                let fa = a.field();
                let ka: Vec<u32> = a.c.iter().rev().map(|&x| fa.poly_code(x)).collect();
                let kb: Vec<u32> = b.c.iter().rev().map(|&x| fa.poly_code(x)).collect();
                ka.cmp(&kb)
            })
    });
    out
}

/// Monic minimal polynomial of a square matrix.
///
/// Builds Krylov spaces seed by seed: for each seed vector the first linear
/// dependence among `v, Mv, M², …` yields that seed's annihilator; the
/// minimal polynomial is the lcm over enough seeds to span the whole space.
pub fn min_poly(m: &MatrixGF) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let field = m.field().clone();
    if n == 0 {
        return Poly::one(field);
    }
    // Global echelon of all processed vectors: rows with recorded pivot.
    let mut global: Vec<(usize, Vec<u16>)> = Vec::new(); // (pivot, normalized row)
    let reduce_global = |v: &mut Vec<u16>, global: &Vec<(usize, Vec<u16>)>, field: &FieldCtx| {
        for (piv, row) in global {
            let c = v[*piv];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row.iter()) {
                    *x = field.sub(*x, field.mul(c, r));
                }
            }
        }
    };
    let mut result = Poly::one(field.clone());
    let mut seed = 0usize;
    while global.len() < n {
        // Next unit seed not in the global span.
        let e = loop {
            assert!(seed < n, "ran out of seeds before spanning");
            let mut v = vec![0u16; n];
            v[seed] = field.one();
            seed += 1;
            let mut red = v.clone();
            reduce_global(&mut red, &global, &field);
            if red.iter().any(|&x| x != 0) {
                break v;
            }
        };
        // Local echelon with expression tracking: row i stores (pivot,
        // reduced vector, coeffs in terms of M^j e for j ≤ current step).
        let mut local: Vec<(usize, Vec<u16>, Vec<u16>)> = Vec::new();
        let mut cur = e.clone();
        let mut step = 0usize;
        let ann = loop {
            // Express cur against local rows.
            let mut red = cur.clone();
            let mut expr = vec![0u16; step + 1];
            expr[step] = field.one();
            for (piv, row, rexpr) in &local {
                let c = red[*piv];
                if c != 0 {
                    for (x, &r) in red.iter_mut().zip(row.iter()) {
                        *x = field.sub(*x, field.mul(c, r));
                    }
                    for (j, &re) in rexpr.iter().enumerate() {
                        expr[j] = field.sub(expr[j], field.mul(c, re));
                    }
                }
            }
            if let Some(piv) = red.iter().position(|&x| x != 0) {
                let inv = field.inv(red[piv]);
                let nrow: Vec<u16> = red.iter().map(|&x| field.mul(x, inv)).collect();
                let nexpr: Vec<u16> = expr.iter().map(|&x| field.mul(x, inv)).collect();
                local.push((piv, nrow, nexpr));
                cur = m.matvec(&cur);
                step += 1;
            } else {
                // Dependence found: expr gives the annihilator coefficients.
                break Poly::from_coeffs(field.clone(), expr).monic();
            }
        };
        result = result.lcm(&ann);
        // Merge local rows into the global echelon.
        for (_, row, _) in local {
            let mut v = row;
            reduce_global(&mut v, &global, &field);
            if let Some(piv) = v.iter().position(|&x| x != 0) {
                let inv = field.inv(v[piv]);
                let nrow: Vec<u16> = v.iter().map(|&x| field.mul(x, inv)).collect();
                global.push((piv, nrow));
            }
        }
    }
    debug_assert!(
        {
            // Horner evaluation of result at m annihilates every unit vector.
            let id = MatrixGF::identity(field.clone(), n);
            let mut acc = MatrixGF::zero(field.clone(), n, n);
            for &co in result.coeffs().iter().rev() {
                acc = acc.mul(m);
                acc = acc.add(&id.scale(co));
            }
            acc.is_zero()
        },
        "minimal polynomial does not annihilate the matrix"
    );
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> FieldCtx {
        FieldCtx::new(q).unwrap()
    }

    fn poly(q: u64, coeffs: &[i64]) -> Poly {
        let f = gf(q);
        Poly::from_coeffs(f.clone(), coeffs.iter().map(|&c| f.from_int(c)).collect())
    }

    #[test]
    fn divrem_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [2u64, 3, 5, 9] {
            let f = gf(q);
            for _ in 0..60 {
                let a = Poly::from_coeffs(
                    f.clone(),
                    (0..rng.gen_range(0..9)).map(|_| f.sample(&mut rng)).collect(),
                );
                let b = Poly::from_coeffs(
                    f.clone(),
                    (0..rng.gen_range(1..6)).map(|_| f.sample(&mut rng)).collect(),
                );
                if b.is_zero() {
                    continue;
                }
                let (qt, r) = a.divrem(&b);
                assert_eq!(qt.mul(&b).add(&r), a);
                assert!(r.is_zero() || r.deg() < b.deg());
            }
        }
    }

    /// x^8 + x over GF(2) is the product of all monic irreducibles of
    /// degree dividing 3: x, x+1, x³+x+1, x³+x²+1.
    #[test]
    fn factor_x8_plus_x_over_gf2() {
        let f = poly(2, &[0, 1, 0, 0, 0, 0, 0, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let factors = factor(&f, &mut rng);
        let expected = [
            poly(2, &[0, 1]),
            poly(2, &[1, 1]),
            poly(2, &[1, 1, 0, 1]),
            poly(2, &[1, 0, 1, 1]),
        ];
        assert_eq!(factors.len(), 4);
        for (g, m) in &factors {
            assert_eq!(*m, 1);
            assert!(expected.contains(g), "unexpected factor {:?}", g);
        }
    }

    /// (x+1)^6 over GF(3) exercises the p-th-root path (the derivative of
    /// (x+1)^6 vanishes mod 3 only after the first gcd peel).
    #[test]
    fn factor_high_multiplicity_char3() {
        let xp1 = poly(3, &[1, 1]);
        let mut f = Poly::one(gf(3));
        for _ in 0..6 {
            f = f.mul(&xp1);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let factors = factor(&f, &mut rng);
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0, xp1);
        assert_eq!(factors[0].1, 6);
    }

    /// Factorization reconstructs the (monic) input and produces genuinely
    /// irreducible pieces, verified by brute force over small fields.
    #[test]
    fn factor_reconstructs_and_is_irreducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3, 4, 5] {
            let field = gf(q);
            for _ in 0..30 {
                let deg = rng.gen_range(1..7);
                let mut coeffs: Vec<u16> =
                    (0..deg).map(|_| field.sample(&mut rng)).collect();
                coeffs.push(field.sample_nonzero(&mut rng));
                let f = Poly::from_coeffs(field.clone(), coeffs);
                let factors = factor(&f, &mut rng);
                let mut prod = Poly::one(field.clone());
                for (g, m) in &factors {
                    assert!(is_irreducible_brute(g), "reducible factor {:?}", g);
                    for _ in 0..*m {
                        prod = prod.mul(g);
                    }
                }
                assert_eq!(prod, f.monic());
            }
        }
    }

    /// Brute-force irreducibility: no monic divisor of degree in
    /// 1..=deg/2. Only for tiny fields/degrees.
    fn is_irreducible_brute(f: &Poly) -> bool {
        let field = f.field().clone();
        let q = field.q() as u64;
        let deg = f.deg();
        if deg == 0 {
            return false;
        }
        for d in 1..=deg / 2 {
            // All monic polynomials of degree d.
            let count = q.pow(d as u32);
            for code in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut t = code;
                for _ in 0..d {
                    c.push(field.from_poly_code((t % q) as u32));
                    t /= q;
                }
                c.push(field.one());
                let g = Poly::from_coeffs(field.clone(), c);
                if f.rem(&g).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn min_poly_of_companion_matrix_is_the_polynomial() {
        // Companion of x^3+x+1 over GF(2).
        let f2 = gf(2);
        let c = MatrixGF::from_rows(
            f2.clone(),
            &[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]],
        );
        assert_eq!(min_poly(&c), poly(2, &[1, 1, 0, 1]));
    }

    #[test]
    fn min_poly_small_oracles() {
        // Identity: x - 1.
        let f3 = gf(3);
        let id = MatrixGF::identity(f3.clone(), 4);
        assert_eq!(min_poly(&id), poly(3, &[-1, 1]));
        // diag(1,1,2) over GF(3): (x-1)(x-2).
        let d = MatrixGF::from_rows(f3.clone(), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]);
        assert_eq!(min_poly(&d), poly(3, &[-1, 1]).mul(&poly(3, &[-2, 1])));
        // Jordan block J2: (x-1)^2.
        let j = MatrixGF::from_rows(f3.clone(), &[vec![1, 1], vec![0, 1]]);
        assert_eq!(min_poly(&j), poly(3, &[-1, 1]).mul(&poly(3, &[-1, 1])));
        // Zero matrix: x.
        let z = MatrixGF::zero(f3, 2, 2);
        assert_eq!(min_poly(&z), poly(3, &[0, 1]));
    }

    #[test]
    fn min_poly_divides_char_poly_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for q in [2u64, 3, 5, 8] {
            let field = gf(q);
            for n in [1usize, 3, 6, 10] {
                let m = MatrixGF::random(field.clone(), n, n, &mut rng);
                let mp = min_poly(&m);
                assert!(mp.deg() <= n);
                assert_eq!(mp.leading(), field.one());
            }
        }
    }
}
