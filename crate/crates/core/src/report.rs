//! Report assembly and rendering. Every numeric field is a decimal string,
//! never a native number: residues and exact rationals exceed any fixed-width
//! type, and the emitted JSON must round-trip byte-identically.

use crate::identities::IdentityReport;
use crate::suite::{CheckResult, CheckSelection, CheckStatus};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Md,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "md" => Ok(ReportFormat::Md),
            other => Err(format!("unknown format `{other}` (expected json|csv|md)")),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Md => "md",
        })
    }
}

/// A fully resolved run request, echoed verbatim into the report.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub prime_lo: u64,
    pub prime_hi: u64,
    pub checks: CheckSelection,
    /// (identity id, n_lo, n_hi) windows for the identities command.
    pub identity_windows: Vec<(String, u64, u64)>,
    pub parallelism: usize,
    pub format: ReportFormat,
    pub output_path: Option<PathBuf>,
    pub force_expensive: bool,
    pub bernoulli_cache_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prime_lo: 5,
            prime_hi: 97,
            checks: CheckSelection::All,
            identity_windows: Vec::new(),
            parallelism: 1,
            format: ReportFormat::Json,
            output_path: None,
            force_expensive: false,
            bernoulli_cache_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.prime_lo > self.prime_hi {
            return Err(format!("empty prime range {}..{}", self.prime_lo, self.prime_hi));
        }
        if self.prime_lo < 2 {
            return Err("prime range must start at 2 or above".into());
        }
        if self.parallelism < 1 {
            return Err("parallelism must be >= 1".into());
        }
        for (_, lo, hi) in &self.identity_windows {
            if lo > hi {
                return Err(format!("empty identity window {lo}..{hi}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum SelectionEcho {
    All(String),
    Ids(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConfigEcho {
    pub prime_lo: String,
    pub prime_hi: String,
    pub checks: SelectionEcho,
    pub identity_windows: Vec<String>,
    pub parallelism: String,
    pub format: String,
    pub output_path: Option<String>,
    pub force_expensive: bool,
    pub bernoulli_cache_path: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResultRow {
    pub id: String,
    pub p: String,
    pub e: String,
    pub status: String,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub elapsed_ms: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdentityFailureRow {
    pub n: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdentityRow {
    pub id: String,
    pub n_lo: String,
    pub n_hi: String,
    pub status: String,
    pub failures: Vec<IdentityFailureRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: String,
    pub fail: String,
    pub skip: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub version: String,
    pub config: ConfigEcho,
    pub results: Vec<ResultRow>,
    pub identities: Vec<IdentityRow>,
    pub summary: Summary,
    pub wall_time_ms: String,
}

fn status_str(status: CheckStatus) -> &'static str {
    match status {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Skipped(_) => "skip",
    }
}

fn echo_config(config: &RunConfig) -> ConfigEcho {
    ConfigEcho {
        prime_lo: config.prime_lo.to_string(),
        prime_hi: config.prime_hi.to_string(),
        checks: match &config.checks {
            CheckSelection::All => SelectionEcho::All("all".into()),
            CheckSelection::Ids(ids) => SelectionEcho::Ids(ids.clone()),
        },
        identity_windows: config
            .identity_windows
            .iter()
            .map(|(id, lo, hi)| format!("{id}:{lo}..{hi}"))
            .collect(),
        parallelism: config.parallelism.to_string(),
        format: config.format.to_string(),
        output_path: config.output_path.as_ref().map(|p| p.display().to_string()),
        force_expensive: config.force_expensive,
        bernoulli_cache_path: config.bernoulli_cache_path.as_ref().map(|p| p.display().to_string()),
    }
}

/// Assemble the machine-readable report for a run.
pub fn build_report(
    config: &RunConfig,
    results: &[CheckResult],
    identities: &[IdentityReport],
    wall_time: Duration,
) -> Report {
    let rows: Vec<ResultRow> = results
        .iter()
        .map(|r| ResultRow {
            id: r.id.clone(),
            p: r.p.to_string(),
            e: r.e.to_string(),
            status: status_str(r.status).to_string(),
            lhs: r.lhs_residue.as_ref().map(|x| x.value().to_string()),
            rhs: r.rhs_residue.as_ref().map(|x| x.value().to_string()),
            elapsed_ms: r.elapsed.as_millis().to_string(),
        })
        .collect();
    let identity_rows: Vec<IdentityRow> = identities
        .iter()
        .map(|r| IdentityRow {
            id: r.identity_id.clone(),
            n_lo: r.window.0.to_string(),
            n_hi: r.window.1.to_string(),
            status: if r.holds() { "pass".into() } else { "fail".into() },
            failures: r
                .failures
                .iter()
                .map(|f| IdentityFailureRow {
                    n: f.n.to_string(),
                    lhs: f.lhs.to_string(),
                    rhs: f.rhs.to_string(),
                })
                .collect(),
        })
        .collect();
    let pass = rows.iter().filter(|r| r.status == "pass").count()
        + identity_rows.iter().filter(|r| r.status == "pass").count();
    let fail = rows.iter().filter(|r| r.status == "fail").count()
        + identity_rows.iter().filter(|r| r.status == "fail").count();
    let skip = rows.iter().filter(|r| r.status == "skip").count();
    Report {
        version: TOOL_VERSION.to_string(),
        config: echo_config(config),
        results: rows,
        identities: identity_rows,
        summary: Summary {
            pass: pass.to_string(),
            fail: fail.to_string(),
            skip: skip.to_string(),
        },
        wall_time_ms: wall_time.as_millis().to_string(),
    }
}

/// Process exit code implied by a report: 0 when nothing failed, 1 otherwise.
/// Usage errors exit 2 before a report exists.
pub fn exit_code(report: &Report) -> i32 {
    let failed = report.results.iter().any(|r| r.status == "fail")
        || report.identities.iter().any(|r| r.status == "fail");
    if failed {
        1
    } else {
        0
    }
}

pub fn render(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => render_json(report),
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Md => render_md(report),
    }
}

fn render_json(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

fn render_csv(report: &Report) -> String {
    let mut out = String::from("id,p,e,status,lhs,rhs,elapsed_ms\n");
    for r in &report.results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.id,
            r.p,
            r.e,
            r.status,
            r.lhs.as_deref().unwrap_or(""),
            r.rhs.as_deref().unwrap_or(""),
            r.elapsed_ms
        ));
    }
    if !report.identities.is_empty() {
        out.push_str("\nidentity,n_lo,n_hi,status,failures\n");
        for r in &report.identities {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.id,
                r.n_lo,
                r.n_hi,
                r.status,
                r.failures.len()
            ));
        }
    }
    out
}

fn render_md(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("# apery-lab report (v{})\n\n", report.version));
    out.push_str(&format!(
        "Primes {}..{}, parallelism {}, wall time {} ms.\n\n",
        report.config.prime_lo, report.config.prime_hi, report.config.parallelism, report.wall_time_ms
    ));
    if !report.results.is_empty() {
        out.push_str("| id | p | e | status | lhs | rhs | elapsed_ms |\n");
        out.push_str("|---|---|---|---|---|---|---|\n");
        for r in &report.results {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} |\n",
                r.id,
                r.p,
                r.e,
                r.status,
                r.lhs.as_deref().unwrap_or("-"),
                r.rhs.as_deref().unwrap_or("-"),
                r.elapsed_ms
            ));
        }
        out.push('\n');
    }
    if !report.identities.is_empty() {
        out.push_str("| identity | window | status | failures |\n");
        out.push_str("|---|---|---|---|\n");
        for r in &report.identities {
            out.push_str(&format!(
                "| {} | {}..{} | {} | {} |\n",
                r.id,
                r.n_lo,
                r.n_hi,
                r.status,
                r.failures.len()
            ));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "Summary: {} pass, {} fail, {} skip.\n",
        report.summary.pass, report.summary.fail, report.summary.skip
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite::{run_suite, CheckSelection, SuiteOptions};

    fn sample_report() -> Report {
        let sel = CheckSelection::Ids(vec!["a1".into(), "a2".into(), "a3".into()]);
        let run = run_suite(5, 13, &sel, &SuiteOptions::default()).unwrap();
        let config = RunConfig {
            prime_lo: 5,
            prime_hi: 13,
            checks: sel,
            ..Default::default()
        };
        let identities =
            vec![crate::identities::run_identity_window("lw1", 0, 6).unwrap()];
        build_report(&config, &run.results, &identities, Duration::from_millis(12))
    }

    #[test]
    fn json_round_trips_byte_identically() {
        let report = sample_report();
        let emitted = render(&report, ReportFormat::Json);
        let parsed: Report = serde_json::from_str(&emitted).unwrap();
        assert_eq!(parsed, report);
        assert_eq!(render(&parsed, ReportFormat::Json), emitted);
    }

    #[test]
    fn summary_counts_match_row_cardinalities() {
        let report = sample_report();
        let pass = report.results.iter().filter(|r| r.status == "pass").count()
            + report.identities.iter().filter(|r| r.status == "pass").count();
        let fail = report.results.iter().filter(|r| r.status == "fail").count();
        let skip = report.results.iter().filter(|r| r.status == "skip").count();
        assert_eq!(report.summary.pass, pass.to_string());
        assert_eq!(report.summary.fail, fail.to_string());
        assert_eq!(report.summary.skip, skip.to_string());
        // a3 skips at p = 5 but runs at 7, 11, 13.
        assert_eq!(report.summary.skip, "1");
    }

    #[test]
    fn csv_and_json_carry_identical_result_tuples() {
        let report = sample_report();
        let csv = render(&report, ReportFormat::Csv);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("id,p,e,status,lhs,rhs,elapsed_ms"));
        let data: Vec<&str> = lines.take(report.results.len()).collect();
        assert_eq!(data.len(), report.results.len());
        for (line, row) in data.iter().zip(&report.results) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[0], row.id);
            assert_eq!(fields[1], row.p);
            assert_eq!(fields[2], row.e);
            assert_eq!(fields[3], row.status);
            assert_eq!(fields[4], row.lhs.as_deref().unwrap_or(""));
            assert_eq!(fields[5], row.rhs.as_deref().unwrap_or(""));
            assert_eq!(fields[6], row.elapsed_ms);
        }
    }

    #[test]
    fn no_native_numbers_in_json() {
        let emitted = render(&sample_report(), ReportFormat::Json);
        let value: serde_json::Value = serde_json::from_str(&emitted).unwrap();
        fn assert_no_numbers(v: &serde_json::Value) {
            match v {
                serde_json::Value::Number(n) => panic!("native number {n} in report"),
                serde_json::Value::Array(items) => items.iter().for_each(assert_no_numbers),
                serde_json::Value::Object(map) => map.values().for_each(assert_no_numbers),
                _ => {}
            }
        }
        assert_no_numbers(&value);
    }

    #[test]
    fn exit_code_is_a_pure_function_of_failures() {
        let mut report = sample_report();
        assert_eq!(exit_code(&report), 0);
        report.results[0].status = "fail".into();
        assert_eq!(exit_code(&report), 1);
        report.results[0].status = "skip".into();
        assert_eq!(exit_code(&report), 0); // skips never fail a run
        report.identities[0].status = "fail".into();
        assert_eq!(exit_code(&report), 1);
    }

    #[test]
    fn config_validation() {
        let mut config = RunConfig::default();
        assert!(config.validate().is_ok());
        config.prime_lo = 98;
        assert!(config.validate().is_err());
        config.prime_lo = 1;
        assert!(config.validate().is_err());
        config.prime_lo = 5;
        config.parallelism = 0;
        assert!(config.validate().is_err());
        config.parallelism = 2;
        config.identity_windows.push(("lw1".into(), 9, 3));
        assert!(config.validate().is_err());
    }

    #[test]
    fn markdown_contains_summary_and_tables() {
        let md = render(&sample_report(), ReportFormat::Md);
        assert!(md.contains("| id | p | e | status |"));
        assert!(md.contains("Summary:"));
        assert!(md.contains("| lw1 | 0..6 | pass | 0 |"));
    }
}
