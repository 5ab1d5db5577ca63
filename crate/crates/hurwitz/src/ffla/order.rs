//! Exact multiplicative orders of matrices over GF(q).
//!
//! The order is computed structurally, never by iterated powering:
//!
//! 1. the minimal polynomial is factored into irreducibles `f_i^{e_i}`;
//! 2. each root of `f_i` (degree d_i) lies in GF(q^d_i)*, whose order
//!    q^d_i − 1 factors through cyclotomic values; dividing out primes of
//!    that factorization pins down the exact order of `x mod f_i`;
//! 3. multiplicities contribute the p-part p^⌈log_p(max e_i)⌉;
//! 4. the order is the lcm of the semisimple parts times the p-part.

use super::field::FieldCtx;
use super::intfactor;
use super::matrix::MatrixGF;
use super::poly::{self, Poly};
use super::FflaError;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default rho-iteration allowance; generous for every supported search
/// configuration while still terminating promptly on pathological input.
const DEFAULT_FACTOR_BUDGET: u64 = 50_000_000;

/// Exact multiplicative order of an invertible matrix.
pub fn element_order(g: &MatrixGF) -> Result<BigUint, FflaError> {
    element_order_with_budget(g, DEFAULT_FACTOR_BUDGET)
}

pub fn element_order_with_budget(g: &MatrixGF, budget: u64) -> Result<BigUint, FflaError> {
    assert!(g.is_square());
    let field = g.field().clone();
    let f = poly::min_poly(g);
    if f.coeffs().first().copied().unwrap_or(0) == 0 {
        // x divides the minimal polynomial ⟺ 0 is an eigenvalue.
        return Err(FflaError::NotInvertible);
    }
    // Factorization randomness is internal and fixed: same input, same run.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0e1e_0de5);
    let factors = poly::factor(&f, &mut rng);
    let mut budget = budget;
    let mut order = BigUint::one();
    let mut max_mult = 1u32;
    for (irr, mult) in &factors {
        max_mult = max_mult.max(*mult);
        let d = irr.deg() as u32;
        order = order.lcm(&root_order(&field, irr, d, &mut budget)?);
    }
    if max_mult > 1 {
        let p = field.p();
        let mut ppow = 1u64;
        while ppow < max_mult as u64 {
            ppow *= p as u64;
        }
        order *= BigUint::from(ppow);
    }
    Ok(order)
}

/// Order of `x` in GF(q)[x]/(irr), a cyclic group of size q^d − 1.
fn root_order(
    field: &FieldCtx,
    irr: &Poly,
    d: u32,
    budget: &mut u64,
) -> Result<BigUint, FflaError> {
    let q = field.q() as u64;
    let group = BigUint::from(q).pow(d) - BigUint::one();
    let primes = intfactor::factors_of_q_pow_d_minus_1(q, d, budget)?;
    let x = Poly::x(field.clone());
    let mut ord = group;
    for (p, e) in &primes {
        for _ in 0..*e {
            let cand = &ord / p;
            if (&ord % p).is_zero() && x.pow_mod(&cand, irr).is_one() {
                ord = cand;
            } else {
                break;
            }
        }
    }
    Ok(ord)
}

/// Convenience wrapper returning a machine word; errors if the order does
/// not fit (it always does for the groups this crate searches).
pub fn element_order_u128(g: &MatrixGF) -> Result<u128, FflaError> {
    use num_traits::ToPrimitive;
    let o = element_order(g)?;
    o.to_u128().ok_or(FflaError::FactorBudget { n: o.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> FieldCtx {
        FieldCtx::new(q).unwrap()
    }

    #[test]
    fn order_of_companion_of_primitive_cubic() {
        let f = gf(2);
        let c = MatrixGF::from_rows(
            f,
            &[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]],
        );
        assert_eq!(element_order(&c).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn order_identity_and_minus_identity() {
        let f7 = gf(7);
        let id = MatrixGF::identity(f7.clone(), 5);
        assert_eq!(element_order(&id).unwrap(), BigUint::one());
        let neg = id.neg();
        assert_eq!(element_order(&neg).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn order_of_unipotent_blocks() {
        let f3 = gf(3);
        // J2: order 3. J4: minimal polynomial (x−1)^4, order 3^⌈log3 4⌉ = 9.
        let j2 = MatrixGF::from_rows(f3.clone(), &[vec![1, 1], vec![0, 1]]);
        assert_eq!(element_order(&j2).unwrap(), BigUint::from(3u32));
        let j4 = MatrixGF::from_fn(f3, 4, 4, |r, c| {
            if r == c || c == r + 1 {
                1
            } else {
                0
            }
        });
        assert_eq!(element_order(&j4).unwrap(), BigUint::from(9u32));
    }

    #[test]
    fn order_of_primitive_quadratic_companion_gf3() {
        // Companion of x² + 2x + 2 (the GF(9) modulus) over GF(3) has
        // order 9 − 1 = 8.
        let f3 = gf(3);
        let c = MatrixGF::from_rows(f3, &[vec![0, 1], vec![1, 1]]);
        assert_eq!(element_order(&c).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn rejects_singular() {
        let f5 = gf(5);
        let z = MatrixGF::zero(f5, 3, 3);
        assert!(matches!(element_order(&z), Err(FflaError::NotInvertible)));
    }

    /// Cross-check against brute-force powering for random invertible
    /// matrices over small fields.
    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for q in [2u64, 3, 4, 5, 7] {
            let field = gf(q);
            for n in [2usize, 3, 4] {
                for _ in 0..12 {
                    let m = MatrixGF::random_invertible(field.clone(), n, &mut rng);
                    let fast = element_order(&m).unwrap();
                    let mut acc = m.clone();
                    let mut brute = 1u64;
                    while !acc.is_identity() {
                        acc = acc.mul(&m);
                        brute += 1;
                        assert!(brute < 100_000, "runaway order");
                    }
                    assert_eq!(fast, BigUint::from(brute), "q={} n={}", q, n);
                }
            }
        }
    }

    /// Order of a random diagonal matrix is the lcm of the orders of its
    /// eigenvalues, exercised over an extension field.
    #[test]
    fn diagonal_orders_gf9() {
        let f9 = gf(9);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let d: Vec<u16> = (0..4).map(|_| f9.sample_nonzero(&mut rng)).collect();
            let m = MatrixGF::from_fn(f9.clone(), 4, 4, |r, c| if r == c { d[r] } else { 0 });
            let mut want = 1u64;
            for &x in &d {
                let mut o = 1u64;
                let mut acc = x;
                while acc != f9.one() {
                    acc = f9.mul(acc, x);
                    o += 1;
                }
                want = num_integer::lcm(want, o);
            }
            assert_eq!(element_order(&m).unwrap(), BigUint::from(want));
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // Force an absurdly small budget on a matrix whose order requires
        // factoring a large cyclotomic value.
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let m = MatrixGF::random_invertible(f, 24, &mut rng);
        match element_order_with_budget(&m, 0) {
            Ok(_) => {} // small field: factorization may succeed by trial division alone
            Err(FflaError::FactorBudget { n }) => {
                assert!(!n.is_empty());
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
