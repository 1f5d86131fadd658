//! Registry of named congruence checks and the batch runner that evaluates
//! them over prime ranges.
//!
//! Each check evaluates exact rational left/right sides ("legs") for a given
//! prime; the runner reduces and compares them with the valuation-aware
//! comparator, so a check holds iff v_p(lhs - rhs) >= e for every leg.

mod checks;

use crate::arith::{congruent, is_prime, reduce_mod, ModulusPE, Rational, Residue};
use crate::sequences::BernoulliCache;
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("precondition violated for `{check}`: {reason}")]
    PreconditionViolated { check: String, reason: String },
    #[error("invalid prime range {lo}..{hi}")]
    InvalidRange { lo: u64, hi: u64 },
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
    #[error("worker pool: {0}")]
    Parallelism(String),
}

/// Optional parameters for parameterized checks; the schema of each check
/// decides which fields apply and fills defaults for absent ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckParams {
    /// Kummer multiplier, or a single family index for per-k checks.
    pub k: Option<u64>,
    /// Kummer lower Bernoulli index (even, not divisible by p-1).
    pub b: Option<u64>,
    /// Beukers multiplier m >= 1.
    pub m: Option<u64>,
    /// Beukers power r >= 1 (modulus exponent is 3r).
    pub r: Option<u32>,
}

/// Which of the `CheckParams` fields a check accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamSchema {
    /// No parameters accepted.
    NoParams,
    /// (k, b) with defaults k = 1, b = p - 3.
    Kummer,
    /// (m, r) with defaults m = 1, r = 1.
    Beukers,
    /// Optional k restricting a per-k family to a single index.
    FamilyK,
}

/// Modulus exponent rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Fixed(u32),
    /// e = 3r, for the Beukers checks.
    TripleR,
}

/// Cost class consulted by the suite runner's expense gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cost {
    Cheap,
    /// Streams all Apéry numbers below p; quadratic in p.
    QuadraticApery,
    /// Computes an Apéry number of index m p^r - 1.
    AperyPower,
}

/// How far the Bernoulli cache must be warmed before evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demand {
    None,
    PMinus3,
    TwoPMinus4,
    /// k (p-1) + b for the Kummer check.
    KummerIndex,
}

impl Demand {
    fn index(self, p: u64, params: &CheckParams) -> Option<u64> {
        match self {
            Demand::None => None,
            Demand::PMinus3 => Some(p.saturating_sub(3)),
            Demand::TwoPMinus4 => Some((2 * p).saturating_sub(4)),
            Demand::KummerIndex => {
                Some(params.k.unwrap_or(1) * (p - 1) + params.b.unwrap_or_else(|| p.saturating_sub(3)))
            }
        }
    }
}

/// One exact comparison produced by an evaluator.
#[derive(Debug, Clone)]
pub struct Leg {
    /// Distinguishes legs of family or multi-part checks, e.g. "k=3".
    pub label: Option<String>,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Evaluation context handed to check evaluators. The Bernoulli cache is
/// read-only here; the runner warms it before any parallel phase.
pub struct EvalCtx<'a> {
    pub p: u64,
    pub params: CheckParams,
    bernoulli: &'a BernoulliCache,
}

impl EvalCtx<'_> {
    /// B_n from the pre-warmed cache.
    pub fn bernoulli(&self, n: u64) -> Rational {
        self.bernoulli
            .get(n as usize)
            .unwrap_or_else(|| panic!("Bernoulli cache not warmed through index {n}"))
            .clone()
    }
}

type EvalFn = Arc<dyn Fn(&EvalCtx) -> Vec<Leg> + Send + Sync>;

/// A registry entry naming one congruence check.
#[derive(Clone)]
pub struct CheckDescriptor {
    id: String,
    statement: String,
    min_p: u64,
    exponent: Exponent,
    schema: ParamSchema,
    cost: Cost,
    demand: Demand,
    eval: EvalFn,
}

impl CheckDescriptor {
    /// A check with a fixed modulus exponent and no parameters. Builder
    /// methods below adjust schema, cost class and Bernoulli demand.
    pub fn new(
        id: &str,
        statement: &str,
        min_p: u64,
        e: u32,
        eval: impl Fn(&EvalCtx) -> Vec<Leg> + Send + Sync + 'static,
    ) -> Self {
        CheckDescriptor {
            id: id.to_string(),
            statement: statement.to_string(),
            min_p,
            exponent: Exponent::Fixed(e),
            schema: ParamSchema::NoParams,
            cost: Cost::Cheap,
            demand: Demand::None,
            eval: Arc::new(eval),
        }
    }

    pub fn with_schema(mut self, schema: ParamSchema) -> Self {
        self.schema = schema;
        self
    }

    pub fn with_exponent(mut self, exponent: Exponent) -> Self {
        self.exponent = exponent;
        self
    }

    pub fn with_cost(mut self, cost: Cost) -> Self {
        self.cost = cost;
        self
    }

    pub fn with_demand(mut self, demand: Demand) -> Self {
        self.demand = demand;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// The congruence this check verifies, in plain notation.
    pub fn statement(&self) -> &str {
        &self.statement
    }

    pub fn min_p(&self) -> u64 {
        self.min_p
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    /// Modulus exponent for a given parameter set.
    pub fn exponent_for(&self, params: &CheckParams) -> u32 {
        match self.exponent {
            Exponent::Fixed(e) => e,
            Exponent::TripleR => 3 * params.r.unwrap_or(1),
        }
    }

    pub fn schema(&self) -> ParamSchema {
        self.schema
    }
}

impl fmt::Debug for CheckDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CheckDescriptor")
            .field("id", &self.id)
            .field("min_p", &self.min_p)
            .field("exponent", &self.exponent)
            .field("schema", &self.schema)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// p is below the smallest admissible prime for the check.
    BelowMinP,
    /// Refused by the expense gate; rerun with force_expensive to include it.
    CostGated,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::BelowMinP => write!(f, "below min_p"),
            SkipReason::CostGated => write!(f, "cost-gated"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped(SkipReason),
}

/// Outcome of one check at one prime.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: String,
    pub p: u64,
    pub e: u32,
    pub status: CheckStatus,
    /// Residues of the compared leg, present when both sides are p-integral.
    /// Multi-leg checks report the first failing leg, or nothing when all
    /// legs pass.
    pub lhs_residue: Option<Residue>,
    pub rhs_residue: Option<Residue>,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn holds(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// A broken implication between checks that mirror one derivation chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainViolation {
    pub p: u64,
    pub premises: [&'static str; 2],
    pub conclusion: &'static str,
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={}: {} and {} hold but {} fails",
            self.p, self.premises[0], self.premises[1], self.conclusion
        )
    }
}

/// Everything a suite run produced, sorted by (p, id).
#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub results: Vec<CheckResult>,
    pub chain_violations: Vec<ChainViolation>,
}

impl SuiteRun {
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut skip = 0;
        for r in &self.results {
            match r.status {
                CheckStatus::Pass => pass += 1,
                CheckStatus::Fail => fail += 1,
                CheckStatus::Skipped(_) => skip += 1,
            }
        }
        (pass, fail, skip)
    }
}

/// Which checks a suite run covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckSelection {
    All,
    Ids(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub parallelism: usize,
    /// Run cost-gated pairs instead of skipping them.
    pub force_expensive: bool,
    /// Largest p the quadratic Apéry sum runs at without forcing.
    pub sunzw_cap: u64,
    /// Largest m p^r the Beukers checks run at without forcing.
    pub beukers_cap: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { parallelism: 1, force_expensive: false, sunzw_cap: 47, beukers_cap: 2000 }
    }
}

/// The full, fixed registry of congruence checks.
///
/// Statement notation: H(k), H2(k), H3(k), H4(k) are generalized harmonic
/// numbers of orders 1..4, B(n) Bernoulli numbers, A(n) and A'(n) the Apéry
/// numbers, C(n,k) binomials; sums run over k = 1..p-1 unless written
/// otherwise.
pub fn registry() -> Vec<CheckDescriptor> {
    use checks::*;
    use ParamSchema::*;
    let v = vec![
        CheckDescriptor::new("a1", "A(p-1) = 1 + (2/3) p^3 B(p-3) (mod p^4)", 5, 4, a1)
            .with_demand(Demand::PMinus3),
        CheckDescriptor::new("a2", "A'(p-1) = 1 + (5/3) p^3 B(p-3) (mod p^4)", 5, 4, a2)
            .with_demand(Demand::PMinus3),
        CheckDescriptor::new(
            "a3",
            "A(p-1) = 1 + p^3 ((4/3) B(p-3) - (1/2) B(2p-4)) + (1/9) p^4 B(p-3) (mod p^5)",
            7,
            5,
            a3,
        )
        .with_demand(Demand::TwoPMinus4),
        CheckDescriptor::new(
            "a5",
            "A'(p-1) = 1 + p^3 ((10/3) B(p-3) - (5/4) B(2p-4)) + (5/18) p^4 B(p-3) (mod p^5)",
            7,
            5,
            a5,
        )
        .with_demand(Demand::TwoPMinus4),
        CheckDescriptor::new(
            "kummer",
            "B(k(p-1)+b)/(k(p-1)+b) = B(b)/b (mod p) for even b, (p-1) not dividing b (Kummer)",
            5,
            1,
            kummer,
        )
        .with_schema(Kummer)
        .with_demand(Demand::KummerIndex),
        CheckDescriptor::new("a4", "B(2p-4) = (4/3) B(p-3) (mod p)", 7, 1, a4)
            .with_demand(Demand::TwoPMinus4),
        CheckDescriptor::new(
            "beukers-a",
            "A(m p^r - 1) = A(m p^(r-1) - 1) (mod p^(3r)) (Beukers)",
            5,
            3,
            beukers_a,
        )
        .with_schema(Beukers)
        .with_exponent(Exponent::TripleR)
        .with_cost(Cost::AperyPower),
        CheckDescriptor::new(
            "beukers-a-prime",
            "A'(m p^r - 1) = A'(m p^(r-1) - 1) (mod p^(3r)) (Beukers)",
            5,
            3,
            beukers_a_prime,
        )
        .with_schema(Beukers)
        .with_exponent(Exponent::TripleR)
        .with_cost(Cost::AperyPower),
        CheckDescriptor::new(
            "sunzw-sum",
            "sum_{k=0}^{p-1} (2k+1) A(k) = p + (7/6) p^4 B(p-3) (mod p^5) (Z.-W. Sun)",
            5,
            5,
            sunzw_sum,
        )
        .with_demand(Demand::PMinus3)
        .with_cost(Cost::QuadraticApery),
        CheckDescriptor::new(
            "b2",
            "C(p-1,k) C(p+k,k) = (-1)^k (1 - p^2 H2(k)) (mod p^4) for all k in 1..p-1",
            5,
            4,
            b2,
        )
        .with_schema(FamilyK),
        CheckDescriptor::new(
            "binom-pm",
            "C(p-1,k) = (-1)^k (1 - p H(k)) (mod p^2) for all k in 1..p-1",
            5,
            2,
            binom_pm,
        )
        .with_schema(FamilyK),
        CheckDescriptor::new(
            "b5",
            "A(p-1) = 1 + p^2 H2(p-1) - 2p^3 H3(p-1) + 3p^4 H4(p-1) - 2p^4 sum H2(k)/k^2 (mod p^5)",
            7,
            5,
            b5,
        ),
        CheckDescriptor::new("b6", "sum H2(k)/k^2 = 0 (mod p)", 7, 1, b6),
        CheckDescriptor::new("b7", "H3(p-1) = 0 (mod p^2) (Lehmer)", 7, 2, b7),
        CheckDescriptor::new("b8", "H4(p-1) = 0 (mod p) (Lehmer)", 7, 1, b8),
        CheckDescriptor::new("new1", "sum H2(k)/k^2 = H4((p-1)/2) (mod p)", 7, 1, new1),
        CheckDescriptor::new("new2", "H4((p-1)/2) = 0 (mod p)", 7, 1, new2),
        CheckDescriptor::new("b9", "A(p-1) = 1 + p^2 H2(p-1) (mod p^5)", 7, 5, b9),
        CheckDescriptor::new(
            "b10",
            "H2(p-1) = ((4/3) B(p-3) - (1/2) B(2p-4)) p + ((4/9) B(p-3) - (1/4) B(2p-4)) p^2 (mod p^3)",
            7,
            3,
            b10,
        )
        .with_demand(Demand::TwoPMinus4),
        CheckDescriptor::new(
            "b11",
            "H2(p-1) = ((4/3) B(p-3) - (1/2) B(2p-4)) p + (1/9) p^2 B(p-3) (mod p^3)",
            7,
            3,
            b11,
        )
        .with_demand(Demand::TwoPMinus4),
        CheckDescriptor::new(
            "c4c5-mcintosh",
            "C(2p-1, p-1) = 1 - p^2 H2(p-1) (mod p^5) (McIntosh)",
            7,
            5,
            c4c5_mcintosh,
        ),
        CheckDescriptor::new(
            "c6",
            "p sum (-1)^k C(p-1,k)/(p+k) = p^2 H2(p-1) (mod p^5)",
            7,
            5,
            c6,
        ),
        CheckDescriptor::new(
            "new5",
            "sum H(k) H2(k)/(p+k) = 0 and sum H(k) H2(k)/k = 0 (mod p)",
            7,
            1,
            new5,
        ),
        CheckDescriptor::new(
            "wz2",
            "p^2 sum H(k) H2(k)/k = (7/2) H2(p-1) - H2((p-1)/2) (mod p^3)",
            7,
            3,
            wz2,
        ),
        CheckDescriptor::new(
            "wz3",
            "H2((p-1)/2) = ((14/3) B(p-3) - (7/4) B(2p-4)) p + ((14/9) B(p-3) - (7/8) B(2p-4)) p^2 (mod p^3)",
            7,
            3,
            wz3,
        )
        .with_demand(Demand::TwoPMinus4),
        CheckDescriptor::new("new6", "sum H2(k)/(p+k) = sum H2(k)/k (mod p^2)", 7, 2, new6),
        CheckDescriptor::new(
            "new7",
            "p^3 sum (-1)^k C(p-1,k) H2(k)/(p+k) = p^3 sum H2(k)/k (mod p^5)",
            7,
            5,
            new7,
        ),
        CheckDescriptor::new(
            "lw2",
            "sum H2(k)/k = (3/p^2) H(p-1) (mod p^2), on the difference",
            7,
            2,
            lw2,
        ),
        CheckDescriptor::new(
            "new9",
            "p^3 sum (-1)^k C(p-1,k) H2(k)/(p+k) = 3p H(p-1) (mod p^5)",
            7,
            5,
            new9,
        ),
        CheckDescriptor::new("lw3", "p H(p-1) = -(p^2/2) H2(p-1) (mod p^5) (Meštrović)", 7, 5, lw3),
        CheckDescriptor::new("new10", "A'(p-1) = 1 + (5/2) p^2 H2(p-1) (mod p^5)", 7, 5, new10),
        CheckDescriptor::new("wolstenholme", "H(p-1) = 0 (mod p^2) (Wolstenholme)", 5, 2, wolstenholme),
        CheckDescriptor::new("hp2", "H2(p-1) = 0 (mod p)", 5, 1, hp2),
        CheckDescriptor::new(
            "mestrovic67",
            "H(p-1)/p = -(1/2) H2(p-1) (mod p^3) (Meštrović), on the difference",
            7,
            3,
            mestrovic67,
        ),
    ];
    debug_assert!({
        let mut ids: Vec<_> = v.iter().map(|d| d.id()).collect();
        ids.sort_unstable();
        ids.windows(2).all(|w| w[0] != w[1])
    });
    v
}

/// Validate `extra` against the descriptor schema and fill defaults.
fn resolve_params(desc: &CheckDescriptor, p: u64, extra: &CheckParams) -> Result<CheckParams, SuiteError> {
    let violated = |reason: String| SuiteError::PreconditionViolated { check: desc.id.clone(), reason };
    let reject_fields = |fields: &[(&str, bool)]| -> Result<(), SuiteError> {
        for (name, present) in fields {
            if *present {
                return Err(violated(format!("parameter `{name}` does not apply")));
            }
        }
        Ok(())
    };
    match desc.schema {
        ParamSchema::NoParams => {
            reject_fields(&[
                ("k", extra.k.is_some()),
                ("b", extra.b.is_some()),
                ("m", extra.m.is_some()),
                ("r", extra.r.is_some()),
            ])?;
            Ok(CheckParams::default())
        }
        ParamSchema::Kummer => {
            reject_fields(&[("m", extra.m.is_some()), ("r", extra.r.is_some())])?;
            let k = extra.k.unwrap_or(1);
            let b = extra.b.unwrap_or_else(|| p.saturating_sub(3));
            if k < 1 {
                return Err(violated("k must be >= 1".into()));
            }
            if b < 2 || b % 2 != 0 {
                return Err(violated(format!("b = {b} must be even and >= 2")));
            }
            if b % (p - 1) == 0 {
                return Err(violated(format!("(p-1) = {} divides b = {b}", p - 1)));
            }
            Ok(CheckParams { k: Some(k), b: Some(b), m: None, r: None })
        }
        ParamSchema::Beukers => {
            reject_fields(&[("k", extra.k.is_some()), ("b", extra.b.is_some())])?;
            let m = extra.m.unwrap_or(1);
            let r = extra.r.unwrap_or(1);
            if m < 1 || r < 1 {
                return Err(violated("m and r must be >= 1".into()));
            }
            let within_cap = p
                .checked_pow(r)
                .and_then(|pr| pr.checked_mul(m))
                .is_some_and(|n| n <= 1_000_000);
            if !within_cap {
                return Err(violated("m p^r exceeds the sanity cap of 10^6".into()));
            }
            Ok(CheckParams { k: None, b: None, m: Some(m), r: Some(r) })
        }
        ParamSchema::FamilyK => {
            reject_fields(&[("b", extra.b.is_some()), ("m", extra.m.is_some()), ("r", extra.r.is_some())])?;
            if let Some(k) = extra.k {
                if k < 1 || k > p - 1 {
                    return Err(violated(format!("k = {k} outside 1..={}", p - 1)));
                }
            }
            Ok(CheckParams { k: extra.k, b: None, m: None, r: None })
        }
    }
}

/// The expense-gate reason for a (check, prime, params) task, if any.
fn gate_reason(desc: &CheckDescriptor, p: u64, params: &CheckParams, opts: &SuiteOptions) -> Option<SkipReason> {
    if opts.force_expensive {
        return None;
    }
    match desc.cost {
        Cost::Cheap => None,
        Cost::QuadraticApery => (p > opts.sunzw_cap).then_some(SkipReason::CostGated),
        Cost::AperyPower => {
            let m = params.m.unwrap_or(1);
            let r = params.r.unwrap_or(1);
            let size = p.checked_pow(r).and_then(|pr| pr.checked_mul(m));
            match size {
                Some(s) if s <= opts.beukers_cap => None,
                _ => Some(SkipReason::CostGated),
            }
        }
    }
}

/// Evaluate one check at one prime against a pre-warmed cache.
fn execute(
    desc: &CheckDescriptor,
    p: u64,
    params: CheckParams,
    modulus: &ModulusPE,
    bernoulli: &BernoulliCache,
) -> CheckResult {
    let start = Instant::now();
    let cx = EvalCtx { p, params, bernoulli };
    let legs = (desc.eval)(&cx);
    let failing = legs.iter().find(|leg| !congruent(&leg.lhs, &leg.rhs, modulus));
    let holds = failing.is_none();
    let report_leg = match failing {
        Some(leg) => Some(leg),
        None if legs.len() == 1 => legs.first(),
        None => None,
    };
    let (lhs_residue, rhs_residue) = match report_leg {
        Some(leg) => (
            reduce_mod(&leg.lhs, modulus).ok(),
            reduce_mod(&leg.rhs, modulus).ok(),
        ),
        None => (None, None),
    };
    CheckResult {
        id: desc.id.clone(),
        p,
        e: modulus.e(),
        status: if holds { CheckStatus::Pass } else { CheckStatus::Fail },
        lhs_residue,
        rhs_residue,
        elapsed: start.elapsed(),
    }
}

/// Run one named check at one prime. `extra` supplies parameters for the
/// parameterized checks; pass `CheckParams::default()` otherwise.
pub fn run_check(id: &str, p: u64, extra: &CheckParams) -> Result<CheckResult, SuiteError> {
    run_check_cached(id, p, extra, &mut BernoulliCache::new())
}

/// [`run_check`] reusing a caller-owned Bernoulli cache across calls.
pub fn run_check_cached(
    id: &str,
    p: u64,
    extra: &CheckParams,
    cache: &mut BernoulliCache,
) -> Result<CheckResult, SuiteError> {
    let registry = registry();
    let desc = registry
        .iter()
        .find(|d| d.id() == id)
        .ok_or_else(|| SuiteError::UnknownCheck(id.to_string()))?;
    if !is_prime(p) {
        return Err(SuiteError::PreconditionViolated {
            check: id.to_string(),
            reason: format!("{p} is not prime"),
        });
    }
    if p < desc.min_p {
        return Err(SuiteError::PreconditionViolated {
            check: id.to_string(),
            reason: format!("p = {p} is below min_p = {}", desc.min_p),
        });
    }
    let params = resolve_params(desc, p, extra)?;
    let modulus = ModulusPE::new(p, desc.exponent_for(&params))?;
    if let Some(n) = desc.demand.index(p, &params) {
        cache.ensure_through(n as usize);
    }
    Ok(execute(desc, p, params, &modulus, cache))
}

/// Run every admissible (check, prime) pair for the selected registry checks
/// over the inclusive prime range.
pub fn run_suite(
    lo: u64,
    hi: u64,
    selection: &CheckSelection,
    opts: &SuiteOptions,
) -> Result<SuiteRun, SuiteError> {
    let descriptors = select(registry(), selection)?;
    run_suite_with(&descriptors, lo, hi, opts, &mut BernoulliCache::new())
}

/// Restrict the registry to a selection, preserving registry order.
pub fn select(
    registry: Vec<CheckDescriptor>,
    selection: &CheckSelection,
) -> Result<Vec<CheckDescriptor>, SuiteError> {
    match selection {
        CheckSelection::All => Ok(registry),
        CheckSelection::Ids(ids) => {
            for id in ids {
                if !registry.iter().any(|d| d.id() == id) {
                    return Err(SuiteError::UnknownCheck(id.clone()));
                }
            }
            Ok(registry.into_iter().filter(|d| ids.iter().any(|id| id == d.id())).collect())
        }
    }
}

enum Planned<'a> {
    Run { desc: &'a CheckDescriptor, p: u64, params: CheckParams, modulus: ModulusPE },
    Skip { id: String, p: u64, e: u32, reason: SkipReason },
}

/// [`run_suite`] over explicit descriptors and a caller-owned cache. Skipped
/// pairs (p below min_p, or cost-gated) are reported as skip rows, not
/// failures; results come back sorted by (p, id) regardless of execution
/// order.
pub fn run_suite_with(
    descriptors: &[CheckDescriptor],
    lo: u64,
    hi: u64,
    opts: &SuiteOptions,
    cache: &mut BernoulliCache,
) -> Result<SuiteRun, SuiteError> {
    if lo > hi || lo < 2 {
        return Err(SuiteError::InvalidRange { lo, hi });
    }
    let primes: Vec<u64> = (lo..=hi).filter(|&n| is_prime(n)).collect();

    let mut planned = Vec::with_capacity(primes.len() * descriptors.len());
    let mut demand_max: Option<u64> = None;
    for &p in &primes {
        for desc in descriptors {
            if p < desc.min_p {
                planned.push(Planned::Skip {
                    id: desc.id().to_string(),
                    p,
                    e: desc.exponent_for(&CheckParams::default()),
                    reason: SkipReason::BelowMinP,
                });
                continue;
            }
            let params = resolve_params(desc, p, &CheckParams::default())?;
            if let Some(reason) = gate_reason(desc, p, &params, opts) {
                planned.push(Planned::Skip { id: desc.id().to_string(), p, e: desc.exponent_for(&params), reason });
                continue;
            }
            if let Some(n) = desc.demand.index(p, &params) {
                demand_max = Some(demand_max.map_or(n, |m| m.max(n)));
            }
            let modulus = ModulusPE::new(p, desc.exponent_for(&params))?;
            planned.push(Planned::Run { desc, p, params, modulus });
        }
    }

    // Single-writer warm-up; the cache is read-only from here on.
    if let Some(n) = demand_max {
        cache.ensure_through(n as usize);
    }
    let shared: &BernoulliCache = cache;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism.max(1))
        .build()
        .map_err(|e| SuiteError::Parallelism(e.to_string()))?;
    let mut results: Vec<CheckResult> = pool.install(|| {
        planned
            .par_iter()
            .map(|task| match task {
                Planned::Run { desc, p, params, modulus } => execute(desc, *p, *params, modulus, shared),
                Planned::Skip { id, p, e, reason } => CheckResult {
                    id: id.clone(),
                    p: *p,
                    e: *e,
                    status: CheckStatus::Skipped(*reason),
                    lhs_residue: None,
                    rhs_residue: None,
                    elapsed: Duration::ZERO,
                },
            })
            .collect()
    });
    results.sort_by(|a, b| (a.p, &a.id).cmp(&(b.p, &b.id)));
    let chain_violations = check_chain(&results);
    Ok(SuiteRun { results, chain_violations })
}

/// Assert the derivation-chain implications on a result set:
/// b9 and b11 passing forces a3 to pass, and new10 and b11 passing forces a5
/// to pass, at every prime where all three ran.
pub fn check_chain(results: &[CheckResult]) -> Vec<ChainViolation> {
    let holds_at = |p: u64, id: &str| -> Option<bool> {
        results.iter().find(|r| r.p == p && r.id == id).and_then(|r| match r.status {
            CheckStatus::Pass => Some(true),
            CheckStatus::Fail => Some(false),
            CheckStatus::Skipped(_) => None,
        })
    };
    let mut primes: Vec<u64> = results.iter().map(|r| r.p).collect();
    primes.sort_unstable();
    primes.dedup();
    let mut violations = Vec::new();
    for p in primes {
        for (premises, conclusion) in [(["b9", "b11"], "a3"), (["new10", "b11"], "a5")] {
            let all_premises = premises.iter().all(|id| holds_at(p, id) == Some(true));
            if all_premises && holds_at(p, conclusion) == Some(false) {
                violations.push(ChainViolation { p, premises, conclusion });
            }
        }
    }
    violations
}
