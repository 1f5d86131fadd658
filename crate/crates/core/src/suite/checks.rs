//! Evaluators for every registered congruence. Each one computes exact
//! rational values; reduction and comparison happen in the runner.
//!
//! Notation used in statements and comments: H(k) is the harmonic number
//! H_k, Hr(k) is the generalized harmonic number of order r, B(n) is the nth
//! Bernoulli number, A(n) and A'(n) are the Apéry numbers, C(n,k) the
//! binomial coefficient. Sums run over k = 1..p-1 unless written otherwise.

use super::{EvalCtx, Leg};
use crate::arith::{rat, rat_int, Rational};
use crate::sequences::{apery_a, apery_a_prime, binomial, harmonic_nr, weighted_apery_sum};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn p_pow(p: u64, e: u32) -> Rational {
    rat_int(num_traits::pow(BigInt::from(p), e as usize))
}

fn one() -> Rational {
    Rational::one()
}

// Shared prefix-sum loops. Each evaluator carries its own running tables so
// concurrent check runs stay independent.

/// sum of H2(k)/k^2.
fn sum_h2_over_k2(p: u64) -> Rational {
    let mut h2 = Rational::zero();
    let mut acc = Rational::zero();
    for k in 1..p {
        let k2 = (k * k) as i64;
        h2 += rat(1, k2);
        acc += &h2 * rat(1, k2);
    }
    acc
}

/// sum of H2(k)/k.
fn sum_h2_over_k(p: u64) -> Rational {
    let mut h2 = Rational::zero();
    let mut acc = Rational::zero();
    for k in 1..p {
        h2 += rat(1, (k * k) as i64);
        acc += &h2 * rat(1, k as i64);
    }
    acc
}

/// sum of H2(k)/(p+k).
fn sum_h2_over_p_plus_k(p: u64) -> Rational {
    let mut h2 = Rational::zero();
    let mut acc = Rational::zero();
    for k in 1..p {
        h2 += rat(1, (k * k) as i64);
        acc += &h2 * rat(1, (p + k) as i64);
    }
    acc
}

/// sum of H(k) H2(k)/k and of H(k) H2(k)/(p+k), in one pass.
fn sums_h_h2(p: u64) -> (Rational, Rational) {
    let mut h = Rational::zero();
    let mut h2 = Rational::zero();
    let mut over_k = Rational::zero();
    let mut over_pk = Rational::zero();
    for k in 1..p {
        h += rat(1, k as i64);
        h2 += rat(1, (k * k) as i64);
        let prod = &h * &h2;
        over_k += &prod * rat(1, k as i64);
        over_pk += prod * rat(1, (p + k) as i64);
    }
    (over_k, over_pk)
}

/// sum of (-1)^k C(p-1,k)/(p+k).
fn alt_binom_over_p_plus_k(p: u64) -> Rational {
    let mut c = BigInt::one(); // C(p-1, k)
    let mut acc = Rational::zero();
    for k in 1..p {
        c = c * BigInt::from(p - k) / BigInt::from(k);
        let mut term = Rational::new(c.clone(), BigInt::from(p + k));
        if k % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    acc
}

/// sum of (-1)^k C(p-1,k) H2(k)/(p+k).
fn alt_binom_h2_over_p_plus_k(p: u64) -> Rational {
    let mut c = BigInt::one();
    let mut h2 = Rational::zero();
    let mut acc = Rational::zero();
    for k in 1..p {
        c = c * BigInt::from(p - k) / BigInt::from(k);
        h2 += rat(1, (k * k) as i64);
        let mut term = Rational::new(c.clone(), BigInt::from(p + k)) * &h2;
        if k % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    acc
}

fn single(lhs: Rational, rhs: Rational) -> Vec<Leg> {
    vec![Leg { label: None, lhs, rhs }]
}

// Headline supercongruences for the (p-1)th Apéry numbers.

/// A(p-1) = 1 + (2/3) p^3 B(p-3) (mod p^4).
pub(super) fn a1(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        rat_int(BigInt::from(apery_a(p - 1))),
        one() + rat(2, 3) * p_pow(p, 3) * cx.bernoulli(p - 3),
    )
}

/// A'(p-1) = 1 + (5/3) p^3 B(p-3) (mod p^4).
pub(super) fn a2(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        rat_int(BigInt::from(apery_a_prime(p - 1))),
        one() + rat(5, 3) * p_pow(p, 3) * cx.bernoulli(p - 3),
    )
}

/// A(p-1) = 1 + p^3 ((4/3) B(p-3) - (1/2) B(2p-4)) + (1/9) p^4 B(p-3) (mod p^5).
pub(super) fn a3(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    let b_p3 = cx.bernoulli(p - 3);
    let b_2p4 = cx.bernoulli(2 * p - 4);
    single(
        rat_int(BigInt::from(apery_a(p - 1))),
        one() + p_pow(p, 3) * (rat(4, 3) * &b_p3 - rat(1, 2) * b_2p4) + rat(1, 9) * p_pow(p, 4) * b_p3,
    )
}

/// A'(p-1) = 1 + p^3 ((10/3) B(p-3) - (5/4) B(2p-4)) + (5/18) p^4 B(p-3) (mod p^5).
pub(super) fn a5(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    let b_p3 = cx.bernoulli(p - 3);
    let b_2p4 = cx.bernoulli(2 * p - 4);
    single(
        rat_int(BigInt::from(apery_a_prime(p - 1))),
        one() + p_pow(p, 3) * (rat(10, 3) * &b_p3 - rat(5, 4) * b_2p4)
            + rat(5, 18) * p_pow(p, 4) * b_p3,
    )
}

/// B(k(p-1)+b)/(k(p-1)+b) = B(b)/b (mod p), for even b with (p-1) not
/// dividing b (Kummer).
pub(super) fn kummer(cx: &EvalCtx) -> Vec<Leg> {
    let k = cx.params.k.expect("resolved");
    let b = cx.params.b.expect("resolved");
    let idx = k * (cx.p - 1) + b;
    single(
        cx.bernoulli(idx) / rat_int(idx as i64),
        cx.bernoulli(b) / rat_int(b as i64),
    )
}

/// B(2p-4) = (4/3) B(p-3) (mod p), Kummer at k = 1, b = p-3.
pub(super) fn a4(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(cx.bernoulli(2 * p - 4), rat(4, 3) * cx.bernoulli(p - 3))
}

fn beukers(cx: &EvalCtx, apery: fn(u64) -> num_bigint::BigUint) -> Vec<Leg> {
    let m = cx.params.m.expect("resolved");
    let r = cx.params.r.expect("resolved");
    let hi = m * cx.p.pow(r) - 1;
    let lo = m * cx.p.pow(r - 1) - 1;
    single(rat_int(BigInt::from(apery(hi))), rat_int(BigInt::from(apery(lo))))
}

/// A(m p^r - 1) = A(m p^(r-1) - 1) (mod p^(3r)) (Beukers).
pub(super) fn beukers_a(cx: &EvalCtx) -> Vec<Leg> {
    beukers(cx, apery_a)
}

/// A'(m p^r - 1) = A'(m p^(r-1) - 1) (mod p^(3r)) (Beukers).
pub(super) fn beukers_a_prime(cx: &EvalCtx) -> Vec<Leg> {
    beukers(cx, apery_a_prime)
}

/// sum_{k=0}^{p-1} (2k+1) A(k) = p + (7/6) p^4 B(p-3) (mod p^5) (Z.-W. Sun).
pub(super) fn sunzw_sum(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        rat_int(BigInt::from(weighted_apery_sum(p))),
        rat_int(p as i64) + rat(7, 6) * p_pow(p, 4) * cx.bernoulli(p - 3),
    )
}

/// C(p-1,k) C(p+k,k) = (-1)^k (1 - p^2 H2(k)) (mod p^4), one leg per k.
pub(super) fn b2(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    let p2 = p_pow(p, 2);
    let mut c1 = BigInt::one(); // C(p-1, k)
    let mut c2 = BigInt::one(); // C(p+k, k)
    let mut h2 = Rational::zero();
    let mut legs = Vec::new();
    for k in 1..p {
        c1 = c1 * BigInt::from(p - k) / BigInt::from(k);
        c2 = c2 * BigInt::from(p + k) / BigInt::from(k);
        h2 += rat(1, (k * k) as i64);
        if cx.params.k.is_some_and(|want| want != k) {
            continue;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        legs.push(Leg {
            label: Some(format!("k={k}")),
            lhs: rat_int(&c1 * &c2),
            rhs: rat(sign, 1) * (one() - &p2 * &h2),
        });
    }
    legs
}

/// C(p-1,k) = (-1)^k (1 - p H(k)) (mod p^2), one leg per k.
pub(super) fn binom_pm(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    let pr = rat_int(p as i64);
    let mut c = BigInt::one();
    let mut h = Rational::zero();
    let mut legs = Vec::new();
    for k in 1..p {
        c = c * BigInt::from(p - k) / BigInt::from(k);
        h += rat(1, k as i64);
        if cx.params.k.is_some_and(|want| want != k) {
            continue;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        legs.push(Leg {
            label: Some(format!("k={k}")),
            lhs: rat_int(c.clone()),
            rhs: rat(sign, 1) * (one() - &pr * &h),
        });
    }
    legs
}

/// A(p-1) = 1 + p^2 H2(p-1) - 2 p^3 H3(p-1) + 3 p^4 H4(p-1)
///          - 2 p^4 sum H2(k)/k^2 (mod p^5).
pub(super) fn b5(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    let rhs = one() + p_pow(p, 2) * harmonic_nr(p - 1, 2) - rat(2, 1) * p_pow(p, 3) * harmonic_nr(p - 1, 3)
        + rat(3, 1) * p_pow(p, 4) * harmonic_nr(p - 1, 4)
        - rat(2, 1) * p_pow(p, 4) * sum_h2_over_k2(p);
    single(rat_int(BigInt::from(apery_a(p - 1))), rhs)
}

/// sum H2(k)/k^2 = 0 (mod p).
pub(super) fn b6(cx: &EvalCtx) -> Vec<Leg> {
    single(sum_h2_over_k2(cx.p), Rational::zero())
}

/// H3(p-1) = 0 (mod p^2) (Lehmer).
pub(super) fn b7(cx: &EvalCtx) -> Vec<Leg> {
    single(harmonic_nr(cx.p - 1, 3), Rational::zero())
}

/// H4(p-1) = 0 (mod p) (Lehmer).
pub(super) fn b8(cx: &EvalCtx) -> Vec<Leg> {
    single(harmonic_nr(cx.p - 1, 4), Rational::zero())
}

/// sum H2(k)/k^2 = H4((p-1)/2) (mod p).
pub(super) fn new1(cx: &EvalCtx) -> Vec<Leg> {
    single(sum_h2_over_k2(cx.p), harmonic_nr((cx.p - 1) / 2, 4))
}

/// H4((p-1)/2) = 0 (mod p).
pub(super) fn new2(cx: &EvalCtx) -> Vec<Leg> {
    single(harmonic_nr((cx.p - 1) / 2, 4), Rational::zero())
}

/// A(p-1) = 1 + p^2 H2(p-1) (mod p^5).
pub(super) fn b9(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        rat_int(BigInt::from(apery_a(p - 1))),
        one() + p_pow(p, 2) * harmonic_nr(p - 1, 2),
    )
}

/// H2(p-1) = ((4/3) B(p-3) - (1/2) B(2p-4)) p
///           + ((4/9) B(p-3) - (1/4) B(2p-4)) p^2 (mod p^3).
pub(super) fn b10(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    let b_p3 = cx.bernoulli(p - 3);
    let b_2p4 = cx.bernoulli(2 * p - 4);
    let rhs = (rat(4, 3) * &b_p3 - rat(1, 2) * &b_2p4) * p_pow(p, 1)
        + (rat(4, 9) * &b_p3 - rat(1, 4) * &b_2p4) * p_pow(p, 2);
    single(harmonic_nr(p - 1, 2), rhs)
}

/// H2(p-1) = ((4/3) B(p-3) - (1/2) B(2p-4)) p + (1/9) p^2 B(p-3) (mod p^3).
pub(super) fn b11(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    let b_p3 = cx.bernoulli(p - 3);
    let b_2p4 = cx.bernoulli(2 * p - 4);
    let rhs = (rat(4, 3) * &b_p3 - rat(1, 2) * b_2p4) * p_pow(p, 1) + rat(1, 9) * p_pow(p, 2) * b_p3;
    single(harmonic_nr(p - 1, 2), rhs)
}

/// C(2p-1, p-1) = 1 - p^2 H2(p-1) (mod p^5) (McIntosh).
pub(super) fn c4c5_mcintosh(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        rat_int(BigInt::from(binomial(2 * p - 1, (p - 1) as i64))),
        one() - p_pow(p, 2) * harmonic_nr(p - 1, 2),
    )
}

/// p sum (-1)^k C(p-1,k)/(p+k) = p^2 H2(p-1) (mod p^5).
pub(super) fn c6(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        rat_int(p as i64) * alt_binom_over_p_plus_k(p),
        p_pow(p, 2) * harmonic_nr(p - 1, 2),
    )
}

/// sum H(k) H2(k)/(p+k) = 0 and sum H(k) H2(k)/k = 0 (mod p), both legs.
pub(super) fn new5(cx: &EvalCtx) -> Vec<Leg> {
    let (over_k, over_pk) = sums_h_h2(cx.p);
    vec![
        Leg { label: Some("over p+k".into()), lhs: over_pk, rhs: Rational::zero() },
        Leg { label: Some("over k".into()), lhs: over_k, rhs: Rational::zero() },
    ]
}

/// p^2 sum H(k) H2(k)/k = (7/2) H2(p-1) - H2((p-1)/2) (mod p^3).
pub(super) fn wz2(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    let (over_k, _) = sums_h_h2(p);
    single(
        p_pow(p, 2) * over_k,
        rat(7, 2) * harmonic_nr(p - 1, 2) - harmonic_nr((p - 1) / 2, 2),
    )
}

/// H2((p-1)/2) = ((14/3) B(p-3) - (7/4) B(2p-4)) p
///               + ((14/9) B(p-3) - (7/8) B(2p-4)) p^2 (mod p^3).
pub(super) fn wz3(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    let b_p3 = cx.bernoulli(p - 3);
    let b_2p4 = cx.bernoulli(2 * p - 4);
    let rhs = (rat(14, 3) * &b_p3 - rat(7, 4) * &b_2p4) * p_pow(p, 1)
        + (rat(14, 9) * &b_p3 - rat(7, 8) * &b_2p4) * p_pow(p, 2);
    single(harmonic_nr((p - 1) / 2, 2), rhs)
}

/// sum H2(k)/(p+k) = sum H2(k)/k (mod p^2).
pub(super) fn new6(cx: &EvalCtx) -> Vec<Leg> {
    single(sum_h2_over_p_plus_k(cx.p), sum_h2_over_k(cx.p))
}

/// p^3 sum (-1)^k C(p-1,k) H2(k)/(p+k) = p^3 sum H2(k)/k (mod p^5).
pub(super) fn new7(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        p_pow(p, 3) * alt_binom_h2_over_p_plus_k(p),
        p_pow(p, 3) * sum_h2_over_k(p),
    )
}

/// sum H2(k)/k = (3/p^2) H(p-1) (mod p^2), compared through the valuation of
/// the difference.
pub(super) fn lw2(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(sum_h2_over_k(p), rat(3, 1) * harmonic_nr(p - 1, 1) / p_pow(p, 2))
}

/// p^3 sum (-1)^k C(p-1,k) H2(k)/(p+k) = 3 p H(p-1) (mod p^5).
pub(super) fn new9(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        p_pow(p, 3) * alt_binom_h2_over_p_plus_k(p),
        rat(3, 1) * p_pow(p, 1) * harmonic_nr(p - 1, 1),
    )
}

/// p H(p-1) = -(p^2/2) H2(p-1) (mod p^5) (Meštrović).
pub(super) fn lw3(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        p_pow(p, 1) * harmonic_nr(p - 1, 1),
        rat(-1, 2) * p_pow(p, 2) * harmonic_nr(p - 1, 2),
    )
}

/// A'(p-1) = 1 + (5/2) p^2 H2(p-1) (mod p^5).
pub(super) fn new10(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        rat_int(BigInt::from(apery_a_prime(p - 1))),
        one() + rat(5, 2) * p_pow(p, 2) * harmonic_nr(p - 1, 2),
    )
}

/// H(p-1) = 0 (mod p^2) (Wolstenholme).
pub(super) fn wolstenholme(cx: &EvalCtx) -> Vec<Leg> {
    single(harmonic_nr(cx.p - 1, 1), Rational::zero())
}

/// H2(p-1) = 0 (mod p).
pub(super) fn hp2(cx: &EvalCtx) -> Vec<Leg> {
    single(harmonic_nr(cx.p - 1, 2), Rational::zero())
}

/// H(p-1)/p = -(1/2) H2(p-1) (mod p^3) (Meštrović), compared through the
/// valuation of the difference.
pub(super) fn mestrovic67(cx: &EvalCtx) -> Vec<Leg> {
    let p = cx.p;
    single(
        harmonic_nr(p - 1, 1) / rat_int(p as i64),
        rat(-1, 2) * harmonic_nr(p - 1, 2),
    )
}
