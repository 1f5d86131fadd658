//! Exact rational arithmetic, p-adic valuation and reduction modulo prime
//! powers.
//!
//! All values are immutable and all operations are pure; everything here is
//! safe to share across threads. Congruence of two rationals modulo p^e is
//! defined through the valuation of their difference, so quantities whose
//! individual sides are not p-integral (such as H(p-1)/p^2) still compare
//! cleanly.

mod primality;

pub use num_bigint::{BigInt, BigUint};
pub use primality::is_prime;


use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// The universal value type: an exact arbitrary-precision fraction, kept in
/// canonical form (denominator > 0, gcd(|num|, den) = 1) after every
/// operation.
pub type Rational = num_rational::BigRational;

/// Shorthand for a small fraction. Panics if `denom` is zero.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer-valued rational.
pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} exceeds the sanity limit {max}")]
    PrimeTooLarge { p: u64, max: u64 },
    #[error("exponent {e} outside 1..={max}")]
    ExponentOutOfRange { e: u32, max: u32 },
    #[error("not p-integral: {p}-adic valuation is {v} < 0")]
    NegativeValuation { p: u64, v: i64 },
    #[error("not invertible: {p} divides the argument")]
    NotInvertible { p: u64 },
}

/// Sanity limits on modulus construction, overridable where defaults do not
/// fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModulusLimits {
    pub max_p: u64,
    pub max_e: u32,
}

impl Default for ModulusLimits {
    fn default() -> Self {
        ModulusLimits { max_p: 1_000_000, max_e: 12 }
    }
}

/// A prime p together with an exponent e >= 1, defining the ring of residues
/// mod p^e. Construction runs a deterministic primality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusPE {
    p: u64,
    e: u32,
    modulus: BigUint,
}

impl ModulusPE {
    pub fn new(p: u64, e: u32) -> Result<Self, ArithError> {
        Self::with_limits(p, e, &ModulusLimits::default())
    }

    pub fn with_limits(p: u64, e: u32, limits: &ModulusLimits) -> Result<Self, ArithError> {
        if p > limits.max_p {
            return Err(ArithError::PrimeTooLarge { p, max: limits.max_p });
        }
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if e < 1 || e > limits.max_e {
            return Err(ArithError::ExponentOutOfRange { e, max: limits.max_e });
        }
        let modulus = num_traits::pow(BigUint::from(p), e as usize);
        Ok(ModulusPE { p, e, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// The value p^e.
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }
}

impl fmt::Display for ModulusPE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.e)
    }
}

/// A canonical representative in [0, p^e).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    modulus: ModulusPE,
    value: BigUint,
}

impl Residue {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &ModulusPE {
        &self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// The p-adic valuation of a rational, with v(0) = +infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, e: u32) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= e as i64,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Largest v with p^v dividing n. Requires n != 0.
fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut rest = n.abs();
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        rest = q;
    }
}

/// The exponent v such that q = p^v * (a/b) with p dividing neither a nor b;
/// `Infinite` for q = 0.
pub fn valuation(q: &Rational, p: u64) -> Valuation {
    debug_assert!(is_prime(p), "{p} is not prime");
    if q.is_zero() {
        return Valuation::Infinite;
    }
    // Canonical form: p divides at most one of numerator and denominator.
    let vn = int_valuation(q.numer(), p);
    if vn > 0 {
        return Valuation::Finite(vn);
    }
    Valuation::Finite(-int_valuation(q.denom(), p))
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0.
fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut x0, mut x1) = (BigInt::one(), BigInt::zero());
    let (mut y0, mut y1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let x = &x0 - &q * &x1;
        x0 = std::mem::replace(&mut x1, x);
        let y = &y0 - &q * &y1;
        y0 = std::mem::replace(&mut y1, y);
    }
    if r0.is_negative() {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// The x in [0, p^e) with a*x = 1 (mod p^e), via extended Euclid.
pub fn mod_inverse(a: &BigInt, m: &ModulusPE) -> Result<BigUint, ArithError> {
    let modulus = BigInt::from(m.modulus().clone());
    let a = a.mod_floor(&modulus);
    let (g, x, _) = extended_gcd(&a, &modulus);
    if !g.is_one() {
        return Err(ArithError::NotInvertible { p: m.p() });
    }
    let x = x.mod_floor(&modulus);
    Ok(x.to_biguint().expect("mod_floor of positive modulus"))
}

/// The unique r in [0, p^e) with q = r (mod p^e), computed as
/// numerator * inverse(denominator). Fails with `NegativeValuation` when q is
/// not p-integral.
pub fn reduce_mod(q: &Rational, m: &ModulusPE) -> Result<Residue, ArithError> {
    match valuation(q, m.p()) {
        Valuation::Finite(v) if v < 0 => {
            return Err(ArithError::NegativeValuation { p: m.p(), v });
        }
        _ => {}
    }
    // q is p-integral, so the canonical denominator is coprime to p.
    let modulus = BigInt::from(m.modulus().clone());
    let den_inv = BigInt::from(mod_inverse(q.denom(), m)?);
    let value = (q.numer() * den_inv).mod_floor(&modulus);
    Ok(Residue {
        modulus: m.clone(),
        value: value.to_biguint().expect("mod_floor of positive modulus"),
    })
}

/// Whether lhs = rhs (mod p^e), i.e. the valuation of lhs - rhs is at least
/// e. Total even when one side alone is not p-integral.
pub fn congruent(lhs: &Rational, rhs: &Rational, m: &ModulusPE) -> bool {
    valuation(&(lhs - rhs), m.p()).at_least(m.e())
}
