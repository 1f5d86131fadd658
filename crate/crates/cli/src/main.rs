//! apery-lab: verify Apéry-number supercongruences, Bernoulli/harmonic
//! congruences and exact combinatorial identities over ranges of primes.
//!
//! Exit codes: 0 when everything passes (skips don't fail), 1 on any
//! failure, 2 on usage or configuration errors.

use apery_core::identities;
use apery_core::report::{self, ReportFormat, RunConfig};
use apery_core::sequences::{self, BernoulliCache};
use apery_core::suite::{self, CheckSelection, SuiteOptions};
use apery_core::arith::BigInt;
use apery_core::{ModulusPE, Rational};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "apery-lab", version, about = "Exact verification of Apéry-number supercongruences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
            Format::Md => ReportFormat::Md,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Sequence {
    Apery,
    AperyPrime,
    Bernoulli,
    Harmonic,
}

#[derive(Subcommand)]
enum Command {
    /// Run congruence checks over a prime range and emit a report
    Verify {
        /// Inclusive prime range, written LO..HI
        #[arg(long, default_value = "5..97")]
        primes: String,
        /// Comma-separated check ids, or "all"
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: available cores; APERY_LAB_THREADS overrides)
        #[arg(long)]
        threads: Option<usize>,
        /// Run cost-gated checks instead of skipping them
        #[arg(long)]
        force_expensive: bool,
        /// Bernoulli cache file to load from and save back to
        #[arg(long)]
        bernoulli_cache: Option<PathBuf>,
    },
    /// Check exact identities over windows of n
    Identities {
        /// Window spec id:lo..hi, repeatable; default covers every identity
        /// over 0..60
        #[arg(long = "window")]
        windows: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print one exact sequence value
    Compute {
        what: Sequence,
        n: u64,
        /// Harmonic order r >= 1 (harmonic only)
        #[arg(long)]
        order: Option<u32>,
        /// Reduce modulo a prime power, written p^e
        #[arg(long = "mod")]
        modulus: Option<String>,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("bad range `{s}`, expected LO..HI"))?;
    let lo = lo.trim().parse::<u64>().map_err(|e| format!("bad range `{s}`: {e}"))?;
    let hi = hi.trim().parse::<u64>().map_err(|e| format!("bad range `{s}`: {e}"))?;
    Ok((lo, hi))
}

fn parse_window(s: &str) -> Result<(String, u64, u64), String> {
    let (id, range) = s.split_once(':').ok_or_else(|| format!("bad window `{s}`, expected id:lo..hi"))?;
    let (lo, hi) = parse_range(range)?;
    Ok((id.to_string(), lo, hi))
}

fn parse_modulus(s: &str) -> Result<(u64, u32), String> {
    let (p, e) = match s.split_once('^') {
        Some((p, e)) => (
            p.trim().parse::<u64>().map_err(|e| format!("bad modulus `{s}`: {e}"))?,
            e.trim().parse::<u32>().map_err(|e| format!("bad modulus `{s}`: {e}"))?,
        ),
        None => (s.trim().parse::<u64>().map_err(|e| format!("bad modulus `{s}`: {e}"))?, 1),
    };
    Ok((p, e))
}

fn resolve_threads(flag: Option<usize>) -> usize {
    if let Ok(raw) = std::env::var("APERY_LAB_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => return n,
            _ => eprintln!("warning: ignoring invalid APERY_LAB_THREADS=`{raw}`"),
        }
    }
    flag.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    primes: String,
    checks: String,
    format: Format,
    out: Option<PathBuf>,
    threads: Option<usize>,
    force_expensive: bool,
    bernoulli_cache: Option<PathBuf>,
) -> ExitCode {
    let (prime_lo, prime_hi) = match parse_range(&primes) {
        Ok(r) => r,
        Err(e) => return usage_error(&e),
    };
    let selection = if checks.trim() == "all" {
        CheckSelection::All
    } else {
        CheckSelection::Ids(checks.split(',').map(|s| s.trim().to_string()).collect())
    };
    let config = RunConfig {
        prime_lo,
        prime_hi,
        checks: selection.clone(),
        identity_windows: Vec::new(),
        parallelism: resolve_threads(threads),
        format: format.into(),
        output_path: out.clone(),
        force_expensive,
        bernoulli_cache_path: bernoulli_cache.clone(),
    };
    if let Err(e) = config.validate() {
        return usage_error(&e);
    }
    let descriptors = match suite::select(suite::registry(), &selection) {
        Ok(d) => d,
        Err(e) => return usage_error(&e.to_string()),
    };

    let mut cache = match &bernoulli_cache {
        Some(path) if path.exists() => match BernoulliCache::load(path) {
            Ok(c) => c,
            Err(e) => return usage_error(&format!("bernoulli cache {}: {e}", path.display())),
        },
        _ => BernoulliCache::new(),
    };
    let loaded_len = cache.len();

    let opts = SuiteOptions {
        parallelism: config.parallelism,
        force_expensive,
        ..Default::default()
    };
    let start = Instant::now();
    let run = match suite::run_suite_with(&descriptors, prime_lo, prime_hi, &opts, &mut cache) {
        Ok(run) => run,
        Err(e) => return usage_error(&e.to_string()),
    };
    let wall = start.elapsed();

    if let Some(path) = &bernoulli_cache {
        if cache.len() > loaded_len {
            if let Err(e) = cache.save(path) {
                eprintln!("warning: could not save bernoulli cache {}: {e}", path.display());
            }
        }
    }

    let report = report::build_report(&config, &run.results, &[], wall);
    let rendered = report::render(&report, config.format);
    if let Err(e) = emit(&rendered, out.as_ref()) {
        return usage_error(&e);
    }
    eprintln!(
        "verify {prime_lo}..{prime_hi}: {} pass, {} fail, {} skip in {} ms",
        report.summary.pass,
        report.summary.fail,
        report.summary.skip,
        wall.as_millis()
    );
    for v in &run.chain_violations {
        eprintln!("chain violation: {v}");
    }
    if !run.chain_violations.is_empty() {
        return ExitCode::from(1);
    }
    ExitCode::from(report::exit_code(&report) as u8)
}

fn cmd_identities(windows: Vec<String>, format: Format, out: Option<PathBuf>) -> ExitCode {
    let parsed: Result<Vec<_>, String> = if windows.is_empty() {
        Ok(identities::IDENTITY_IDS.iter().map(|id| (id.to_string(), 0, 60)).collect())
    } else {
        windows.iter().map(|w| parse_window(w)).collect()
    };
    let parsed = match parsed {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    let config = RunConfig {
        identity_windows: parsed.clone(),
        format: format.into(),
        output_path: out.clone(),
        ..Default::default()
    };
    if let Err(e) = config.validate() {
        return usage_error(&e);
    }

    let start = Instant::now();
    let mut reports = Vec::with_capacity(parsed.len());
    for (id, lo, hi) in &parsed {
        match identities::run_identity_window(id, *lo, *hi) {
            Ok(r) => reports.push(r),
            Err(e) => return usage_error(&e.to_string()),
        }
    }
    let wall = start.elapsed();

    for flag in identities::erratum_flags(&reports) {
        eprintln!("diagnostic: {flag}");
    }
    let report = report::build_report(&config, &[], &reports, wall);
    let rendered = report::render(&report, config.format);
    if let Err(e) = emit(&rendered, out.as_ref()) {
        return usage_error(&e);
    }
    eprintln!(
        "identities: {} pass, {} fail in {} ms",
        report.summary.pass,
        report.summary.fail,
        wall.as_millis()
    );
    ExitCode::from(report::exit_code(&report) as u8)
}

fn cmd_compute(what: Sequence, n: u64, order: Option<u32>, modulus: Option<String>) -> ExitCode {
    if order.is_some() && !matches!(what, Sequence::Harmonic) {
        return usage_error("--order only applies to harmonic");
    }
    let value: Rational = match what {
        Sequence::Apery => Rational::from_integer(BigInt::from(sequences::apery_a(n))),
        Sequence::AperyPrime => Rational::from_integer(BigInt::from(sequences::apery_a_prime(n))),
        Sequence::Bernoulli => {
            sequences::bernoulli(n as usize, &mut BernoulliCache::new())
        }
        Sequence::Harmonic => {
            let r = order.unwrap_or(1);
            if r < 1 {
                return usage_error("--order must be >= 1");
            }
            sequences::harmonic_nr(n, r)
        }
    };
    match modulus {
        None => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Some(spec) => {
            let (p, e) = match parse_modulus(&spec) {
                Ok(pe) => pe,
                Err(e) => return usage_error(&e),
            };
            let m = match ModulusPE::new(p, e) {
                Ok(m) => m,
                Err(e) => return usage_error(&e.to_string()),
            };
            match apery_core::reduce_mod(&value, &m) {
                Ok(residue) => {
                    println!("{}", residue.value());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify { primes, checks, format, out, threads, force_expensive, bernoulli_cache } => {
            cmd_verify(primes, checks, format, out, threads, force_expensive, bernoulli_cache)
        }
        Command::Identities { windows, format, out } => cmd_identities(windows, format, out),
        Command::Compute { what, n, order, modulus } => cmd_compute(what, n, order, modulus),
    }
}
