//! Integer factorization support for exact element orders.
//!
//! Orders live in groups of size up to q^d − 1 for minimal-polynomial factor
//! degrees d; those numbers are never factored whole. They split as products
//! of cyclotomic values Φ_c(q), each at most q^φ(c), and the individual
//! pieces are small enough for trial division plus Brent's variant of the
//! Pollard rho method. Primality testing is Miller–Rabin with a fixed base
//! set (deterministic below 2^64, overwhelming confidence and deterministic
//! behavior above).

use super::FflaError;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// `a·b mod m` without overflow for any u128 inputs below the modulus.
fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    // Shift-and-add; moduli above 2^64 only occur on cold paths.
    let mut result = 0u128;
    let mut a = a % m;
    let mut b = b % m;
    while b > 0 {
        if b & 1 == 1 {
            result = (result + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    result
}

fn powmod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

const MR_BASES: [u128; 20] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// Miller–Rabin with the fixed base set above: deterministic for n < 2^64
/// (the first twelve bases suffice there) and a fixed-behavior strong
/// probable-prime test beyond.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'base: for &a in &MR_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

/// Brent's cycle variant of the rho method. Deterministic parameter
/// schedule; returns a nontrivial factor or `None` if the iteration budget
/// runs out.
fn brent_rho(n: u128, budget: &mut u64) -> Option<u128> {
    if n & 1 == 0 {
        return Some(2);
    }
    for c in 1u128..64 {
        let f = |x: u128| (mulmod(x, x, n) + c) % n;
        let mut y = 2u128;
        let mut r = 1u64;
        let mut q = 1u128;
        let (mut g, mut x, mut ys) = (1u128, 0u128, 0u128);
        'outer: while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let lim = 128.min(r - k);
                for _ in 0..lim {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                if *budget < lim {
                    *budget = 0;
                    return None;
                }
                *budget -= lim;
                g = gcd_u128(q, n);
                k += lim;
            }
            r *= 2;
            if r > 1 << 40 {
                break 'outer;
            }
        }
        if g == n {
            // Backtrack one step at a time.
            g = 1;
            while g == 1 {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
            }
        }
        if g != n && g > 1 {
            return Some(g);
        }
        // Retry with the next additive constant.
    }
    None
}

/// Full factorization of a u128, trial division then recursive rho.
/// `budget` is a shared iteration allowance.
pub fn factor_u128(n: u128, budget: &mut u64) -> Result<Vec<(u128, u32)>, FflaError> {
    let mut out: Vec<(u128, u32)> = Vec::new();
    let push = |p: u128, out: &mut Vec<(u128, u32)>| {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    let mut stack = vec![n];
    while let Some(mut m) = stack.pop() {
        if m == 1 {
            continue;
        }
        // Trial division by small primes.
        let mut d = 2u128;
        while d < 10_000 && d * d <= m {
            while m % d == 0 {
                push(d, &mut out);
                m /= d;
            }
            d += 1;
        }
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            push(m, &mut out);
            continue;
        }
        let Some(f) = brent_rho(m, budget) else {
            return Err(FflaError::FactorBudget { n: m.to_string() });
        };
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    Ok(out)
}

/// BigUint factorization: u128 fast path, with an honest budget error for
/// anything larger (orders beyond 2^128 never occur in the supported
/// searches; the message tells the caller what was left unfactored).
pub fn factor_big(n: &BigUint, budget: &mut u64) -> Result<Vec<(BigUint, u32)>, FflaError> {
    if let Some(small) = n.to_u128() {
        return Ok(factor_u128(small, budget)?
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect());
    }
    // Peel small primes, hoping the cofactor drops into u128 range.
    let mut m = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for d in 2u32..100_000 {
        let db = BigUint::from(d);
        while (&m % &db).is_zero() {
            m /= &db;
            if let Some(e) = out.iter_mut().find(|(q, _)| *q == db) {
                e.1 += 1;
            } else {
                out.push((db.clone(), 1));
            }
        }
        if m.to_u128().is_some() {
            break;
        }
    }
    if let Some(small) = m.to_u128() {
        for (p, e) in factor_u128(small, budget)? {
            out.push((BigUint::from(p), e));
        }
        out.sort();
        return Ok(out);
    }
    Err(FflaError::FactorBudget { n: m.to_string() })
}

/// Möbius function of a small integer.
pub fn moebius(n: u32) -> i32 {
    let mut m = n;
    let mut mu = 1i32;
    let mut d = 2u32;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if m > 1 {
        mu = -mu;
    }
    mu
}

pub fn divisors(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for d in 1..=n {
        if n % d == 0 {
            out.push(d);
        }
    }
    out
}

/// The cyclotomic value Φ_c(q) = Π_{d | c} (q^d − 1)^{μ(c/d)}, computed
/// exactly as a quotient of BigUint products.
pub fn cyclotomic_value(c: u32, q: u64) -> BigUint {
    assert!(c >= 1 && q >= 2);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for d in divisors(c) {
        let term = BigUint::from(q).pow(d) - BigUint::one();
        match moebius(c / d) {
            1 => num *= &term,
            -1 => den *= &term,
            _ => {}
        }
    }
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "cyclotomic quotient not exact");
    quot
}

/// Prime factorization of q^d − 1 assembled from its cyclotomic pieces.
pub fn factors_of_q_pow_d_minus_1(
    q: u64,
    d: u32,
    budget: &mut u64,
) -> Result<Vec<(BigUint, u32)>, FflaError> {
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    for c in divisors(d) {
        let phi = cyclotomic_value(c, q);
        for (p, e) in factor_big(&phi, budget)? {
            if let Some(entry) = merged.iter_mut().find(|(pp, _)| *pp == p) {
                entry.1 += e;
            } else {
                merged.push((p, e));
            }
        }
    }
    merged.sort();
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_oracle() {
        let primes: Vec<u128> = (2..200).filter(|&n| (2..n).all(|d| n % d != 0)).collect();
        for n in 2u128..200 {
            assert_eq!(is_prime_u128(n), primes.contains(&n), "n = {}", n);
        }
        // Mersenne examples.
        assert!(is_prime_u128((1 << 61) - 1));
        assert!(!is_prime_u128((1 << 67) - 1)); // 193707721 × 761838257287
    }

    #[test]
    fn factor_known_values() {
        let mut budget = 1_000_000u64;
        assert_eq!(
            factor_u128(2u128.pow(53) - 1, &mut budget).unwrap(),
            vec![(6361, 1), (69431, 1), (20394401, 1)]
        );
        assert_eq!(factor_u128(720, &mut budget).unwrap(), vec![(2, 4), (3, 2), (5, 1)]);
        assert_eq!(factor_u128(1, &mut budget).unwrap(), vec![]);
    }

    #[test]
    fn factorization_reconstructs() {
        let mut budget = 10_000_000u64;
        for n in [
            3u128.pow(24) - 1,
            7u128.pow(16) - 1,
            2u128.pow(89) - 1, // Mersenne prime
            987654321987654321,
        ] {
            let fs = factor_u128(n, &mut budget).unwrap();
            let mut prod = 1u128;
            for (p, e) in &fs {
                assert!(is_prime_u128(*p));
                for _ in 0..*e {
                    prod *= p;
                }
            }
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn moebius_oracle() {
        let expected = [
            (1, 1),
            (2, -1),
            (3, -1),
            (4, 0),
            (5, -1),
            (6, 1),
            (12, 0),
            (30, -1),
            (105, -1),
            (210, 1),
        ];
        for (n, mu) in expected {
            assert_eq!(moebius(n), mu);
        }
    }

    #[test]
    fn cyclotomic_values_oracle() {
        assert_eq!(cyclotomic_value(1, 2), BigUint::from(1u32));
        assert_eq!(cyclotomic_value(2, 2), BigUint::from(3u32));
        assert_eq!(cyclotomic_value(6, 2), BigUint::from(3u32));
        assert_eq!(cyclotomic_value(12, 3), BigUint::from(73u32)); // 3^4 − 3^2 + 1
        assert_eq!(cyclotomic_value(4, 7), BigUint::from(50u32)); // 7^2 + 1
        // Product over divisors reconstructs q^d − 1.
        for (q, d) in [(2u64, 12u32), (3, 10), (5, 8), (49, 4)] {
            let mut prod = BigUint::one();
            for c in divisors(d) {
                prod *= cyclotomic_value(c, q);
            }
            assert_eq!(prod, BigUint::from(q).pow(d) - BigUint::one());
        }
    }

    #[test]
    fn q_pow_d_factors_reconstruct() {
        let mut budget = 10_000_000u64;
        for (q, d) in [(2u64, 56u32), (3, 52), (7, 12), (8, 24)] {
            let fs = factors_of_q_pow_d_minus_1(q, d, &mut budget).unwrap();
            let mut prod = BigUint::one();
            for (p, e) in &fs {
                prod *= p.pow(*e);
            }
            assert_eq!(prod, BigUint::from(q).pow(d) - BigUint::one(), "q={} d={}", q, d);
        }
    }
}
