//! Exact computation of the integer and rational sequences the checks are
//! built from: binomial coefficients, Apéry numbers, Bernoulli numbers,
//! generalized harmonic numbers and rising factorials.

mod bernoulli;

pub use bernoulli::{bernoulli, BernoulliCache, CacheError};

use crate::arith::Rational;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Binomial coefficient C(n, k), with C(n, k) = 0 for k < 0 or k > n.
///
/// Multiplicative formula; the integer division at each step is exact.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    acc
}

/// n! as an exact integer.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// The nth Apéry number, sum over k of C(n,k)^2 C(n+k,k)^2.
///
/// The two binomials are carried incrementally from term to term, so no
/// factorial is recomputed per term.
pub fn apery_a(n: u64) -> BigUint {
    apery_sum(n, true)
}

/// The primed Apéry number, sum over k of C(n,k)^2 C(n+k,k).
pub fn apery_a_prime(n: u64) -> BigUint {
    apery_sum(n, false)
}

fn apery_sum(n: u64, square_second: bool) -> BigUint {
    let mut c1 = BigUint::one(); // C(n, k)
    let mut c2 = BigUint::one(); // C(n+k, k)
    let mut sum = BigUint::one(); // k = 0 term
    for k in 0..n {
        // C(n, k+1) = C(n, k) * (n-k) / (k+1); C(n+k+1, k+1) = C(n+k, k) * (n+k+1) / (k+1).
        c1 = c1 * BigUint::from(n - k) / BigUint::from(k + 1);
        c2 = c2 * BigUint::from(n + k + 1) / BigUint::from(k + 1);
        let sq = &c1 * &c1;
        sum += if square_second { &sq * &c2 * &c2 } else { sq * &c2 };
    }
    sum
}

/// Sum over 0 <= k <= p-1 of (2k+1) A_k, streaming one Apéry value at a
/// time.
pub fn weighted_apery_sum(p: u64) -> BigUint {
    (0..p).map(|k| apery_a(k) * BigUint::from(2 * k + 1)).sum()
}

/// Upper index and order of a generalized harmonic number H_n^(r).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicSpec {
    pub n: u64,
    pub r: u32,
}

impl HarmonicSpec {
    /// Requires r >= 1.
    pub fn new(n: u64, r: u32) -> Self {
        assert!(r >= 1, "harmonic order must be >= 1");
        HarmonicSpec { n, r }
    }
}

/// Exact H_n^(r) = sum over 1 <= k <= n of 1/k^r, with H_0^(r) = 0.
pub fn harmonic(spec: HarmonicSpec) -> Rational {
    let mut sum = Rational::zero();
    for k in 1..=spec.n {
        sum += Rational::new(BigInt::one(), num_traits::pow(BigInt::from(k), spec.r as usize));
    }
    sum
}

/// Convenience form of [`harmonic`].
pub fn harmonic_nr(n: u64, r: u32) -> Rational {
    harmonic(HarmonicSpec::new(n, r))
}

/// Rising factorial (x)_m = x (x+1) ... (x+m-1); the empty product is 1.
pub fn rising_factorial(x: &Rational, m: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..m {
        acc *= x + Rational::from_integer(BigInt::from(i));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{congruent, rat, rat_int, ModulusPE};

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(17, 0), BigUint::one());
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(9, 4), BigUint::from(126u32));
        assert_eq!(binomial(5, -1), BigUint::zero());
        assert_eq!(binomial(5, 6), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn apery_examples() {
        let a: Vec<u64> = (0..7).map(|n| apery_a(n).try_into().unwrap()).collect();
        assert_eq!(a, vec![1, 5, 73, 1445, 33001, 819005, 21460825]);
        let ap: Vec<u64> = (0..7).map(|n| apery_a_prime(n).try_into().unwrap()).collect();
        assert_eq!(ap, vec![1, 3, 19, 147, 1251, 11253, 104959]);
    }

    #[test]
    fn apery_values_strictly_increase() {
        let mut prev = BigUint::zero();
        for n in 0..80 {
            let a = apery_a(n);
            let ap = apery_a_prime(n);
            assert!(a > prev, "A({n}) not increasing");
            assert!(ap <= a && !ap.is_zero());
            prev = a;
        }
    }

    #[test]
    fn weighted_apery_examples() {
        assert_eq!(weighted_apery_sum(2), BigUint::from(16u32));
        assert_eq!(weighted_apery_sum(3), BigUint::from(381u32));
        assert_eq!(weighted_apery_sum(5), BigUint::from(307505u32));
    }

    #[test]
    fn weighted_apery_sum_congruence_at_5() {
        // sum (2k+1) A_k = p + (7/6) p^4 B_{p-3} (mod p^5) at p = 5.
        let lhs = rat_int(BigInt::from(weighted_apery_sum(5)));
        let rhs = rat_int(5) + rat(7, 6) * rat_int(625) * rat(1, 6);
        assert!(congruent(&lhs, &rhs, &ModulusPE::new(5, 5).unwrap()));
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic_nr(0, 3), Rational::zero());
        assert_eq!(harmonic_nr(2, 2), rat(5, 4));
        assert_eq!(harmonic_nr(4, 2), rat(205, 144));
        assert_eq!(harmonic_nr(4, 1), rat(25, 12));
        assert_eq!(harmonic_nr(6, 1), rat(49, 20));
    }

    #[test]
    #[should_panic(expected = "order")]
    fn harmonic_rejects_order_zero() {
        HarmonicSpec::new(3, 0);
    }

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial(&rat(9, 2), 0), Rational::one());
        assert_eq!(rising_factorial(&rat_int(5), 5), rat_int(15120));
        assert_eq!(rising_factorial(&rat_int(1), 2), rat_int(2));
        assert_eq!(rising_factorial(&rat(1, 2), 2), rat(3, 4));
    }

    #[test]
    fn harmonic_weighted_sum_identity() {
        // sum_{k<=n} H_k / k = (H_n^2 + H_n^(2)) / 2, exactly, for n <= 500.
        let mut h1 = Rational::zero();
        let mut h2 = Rational::zero();
        let mut weighted = Rational::zero();
        for n in 1..=500u64 {
            let inv = rat(1, n as i64);
            h1 += &inv;
            h2 += &inv * &inv;
            weighted += &h1 * &inv;
            assert_eq!(weighted, (&h1 * &h1 + &h2) * rat(1, 2), "n={n}");
        }
    }

    #[test]
    fn alternating_square_sum_identity() {
        // sum_{k<=2m} (-1)^k / k^2 = H_m^(2)/2 - H_{2m}^(2), exactly, for m <= 250.
        let mut alternating = Rational::zero();
        let mut h2_full = Rational::zero(); // H_{2m}^(2) as the loop advances
        for m in 1..=250u64 {
            for k in [2 * m - 1, 2 * m] {
                let term = rat(1, (k * k) as i64);
                h2_full += &term;
                if k % 2 == 0 {
                    alternating += term;
                } else {
                    alternating -= term;
                }
            }
            let expected = harmonic_nr(m, 2) * rat(1, 2) - &h2_full;
            assert_eq!(alternating, expected, "m={m}");
        }
    }
}
