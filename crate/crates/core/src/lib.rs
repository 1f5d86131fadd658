//! Exact-arithmetic verification lab for Apéry-number supercongruences.
//!
//! Everything is computed over arbitrary-precision rationals; reduction to
//! residues modulo a prime power happens only at comparison time, so every
//! check is an exact equality rather than a tolerance test. The crate is
//! organized as:
//!
//! - [`arith`]: rationals, p-adic valuation, prime-power moduli and the
//!   valuation-aware congruence comparator
//! - [`sequences`]: Apéry numbers, Bernoulli numbers, generalized harmonic
//!   numbers, binomials and rising factorials
//! - [`identities`]: exact combinatorial identity checks over windows of n
//! - [`suite`]: the registry of named congruence checks and the batch runner
//! - [`report`]: machine-readable report assembly (JSON/CSV/Markdown)

pub mod arith;
pub mod identities;
pub mod report;
pub mod sequences;
pub mod suite;

pub use arith::{congruent, mod_inverse, reduce_mod, valuation};
pub use arith::{ArithError, ModulusPE, Rational, Residue, Valuation};
pub use sequences::{apery_a, apery_a_prime, bernoulli, binomial, harmonic, BernoulliCache};
pub use suite::{registry, run_check, run_suite, CheckParams, CheckResult, SuiteOptions};
