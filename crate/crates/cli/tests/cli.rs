//! End-to-end tests against the compiled binary: subcommand surface, report
//! formats and the exit-code contract (0 pass, 1 fail, 2 usage).

use std::path::Path;
use std::process::{Command, Output};

fn apery_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apery-lab"))
        .args(args)
        .env_remove("APERY_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn verify_small_range_passes_and_emits_json() {
    let out = apery_lab(&["verify", "--primes", "5..13", "--checks", "a1,a2,wolstenholme"]);
    assert_eq!(code(&out), 0, "{out:?}");
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["summary"]["fail"], "0");
    assert_eq!(report["config"]["prime_lo"], "5");
    let results = report["results"].as_array().unwrap();
    assert_eq!(results.len(), 12); // 3 checks x 4 primes
    assert!(results.iter().all(|r| r["status"] == "pass"));
    let a1_at_5 = results.iter().find(|r| r["id"] == "a1" && r["p"] == "5").unwrap();
    assert_eq!(a1_at_5["lhs"], "501");
    assert_eq!(a1_at_5["rhs"], "501");
}

#[test]
fn verify_below_min_p_reports_skip_not_failure() {
    let out = apery_lab(&["verify", "--primes", "5..5", "--checks", "a3"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["results"][0]["status"], "skip");
    assert_eq!(report["summary"]["skip"], "1");
}

#[test]
fn verify_rejects_invalid_ranges() {
    assert_eq!(code(&apery_lab(&["verify", "--primes", "4..3"])), 2);
    assert_eq!(code(&apery_lab(&["verify", "--primes", "x..y"])), 2);
    assert_eq!(code(&apery_lab(&["verify", "--primes", "1..5"])), 2);
}

#[test]
fn verify_rejects_unknown_checks() {
    assert_eq!(code(&apery_lab(&["verify", "--primes", "5..7", "--checks", "nosuch"])), 2);
}

#[test]
fn verify_csv_matches_json_rows() {
    let json_out = apery_lab(&["verify", "--primes", "5..11", "--checks", "a1,hp2"]);
    let csv_out = apery_lab(&["verify", "--primes", "5..11", "--checks", "a1,hp2", "--format", "csv"]);
    assert_eq!(code(&json_out), 0);
    assert_eq!(code(&csv_out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    let csv = stdout(&csv_out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("id,p,e,status,lhs,rhs,elapsed_ms"));
    let results = report["results"].as_array().unwrap();
    for (line, row) in lines.zip(results) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], row["id"].as_str().unwrap());
        assert_eq!(fields[1], row["p"].as_str().unwrap());
        assert_eq!(fields[2], row["e"].as_str().unwrap());
        assert_eq!(fields[3], row["status"].as_str().unwrap());
        // elapsed_ms may differ between the two runs; the identifying tuple
        // (id, p, e, status, lhs, rhs) must not.
        assert_eq!(fields[4], row["lhs"].as_str().unwrap_or(""));
        assert_eq!(fields[5], row["rhs"].as_str().unwrap_or(""));
    }
}

#[test]
fn verify_writes_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = apery_lab(&[
        "verify",
        "--primes",
        "5..7",
        "--checks",
        "a1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["summary"]["pass"], "2");
}

#[test]
fn verify_threads_env_var_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_apery-lab"))
        .args(["verify", "--primes", "5..7", "--checks", "a1", "--threads", "3"])
        .env("APERY_LAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["parallelism"], "2");
}

#[test]
fn verify_bernoulli_cache_round_trip() {
    // The cache written by one run loads and validates in the next.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bernoulli.tsv");
    let first = apery_lab(&[
        "verify",
        "--primes",
        "5..11",
        "--checks",
        "a1",
        "--bernoulli-cache",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&first), 0);
    assert!(path.exists());
    let second = apery_lab(&[
        "verify",
        "--primes",
        "5..11",
        "--checks",
        "a1",
        "--bernoulli-cache",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&second), 0);

    // A tampered cache is a configuration error.
    std::fs::write(&path, "0\t1\n1\t-1/2\n2\t1/7\n").unwrap();
    let third = apery_lab(&[
        "verify",
        "--primes",
        "5..7",
        "--checks",
        "a1",
        "--bernoulli-cache",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&third), 2);
}

#[test]
fn identities_default_and_explicit_windows() {
    let out = apery_lab(&["identities", "--window", "lw1:0..12", "--window", "wz1:0..12"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = report["identities"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["status"] == "pass"));
    assert_eq!(rows[0]["n_hi"], "12");
}

#[test]
fn identities_rejects_unknown_ids_and_bad_windows() {
    assert_eq!(code(&apery_lab(&["identities", "--window", "nosuch:0..1"])), 2);
    assert_eq!(code(&apery_lab(&["identities", "--window", "lw1:9..3"])), 2);
    assert_eq!(code(&apery_lab(&["identities", "--window", "lw1-0..1"])), 2);
}

#[test]
fn compute_prints_exact_values() {
    let out = apery_lab(&["compute", "apery", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "33001");

    let out = apery_lab(&["compute", "apery-prime", "4"]);
    assert_eq!(stdout(&out).trim(), "1251");

    let out = apery_lab(&["compute", "bernoulli", "10"]);
    assert_eq!(stdout(&out).trim(), "5/66");

    let out = apery_lab(&["compute", "harmonic", "4", "--order", "2"]);
    assert_eq!(stdout(&out).trim(), "205/144");
}

#[test]
fn compute_reduces_modulo_prime_powers() {
    let out = apery_lab(&["compute", "harmonic", "4", "--order", "2", "--mod", "5^4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "570"); // 205/144 = 205 * inv(144) = 570 (mod 625)

    let out = apery_lab(&["compute", "apery", "4", "--mod", "5^4"]);
    assert_eq!(stdout(&out).trim(), "501");
}

#[test]
fn compute_negative_valuation_exits_one() {
    // B_10 = 5/66 has 11 in the denominator.
    let out = apery_lab(&["compute", "bernoulli", "10", "--mod", "11^1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not p-integral"));
}

#[test]
fn compute_usage_errors_exit_two() {
    assert_eq!(code(&apery_lab(&["compute", "apery", "4", "--order", "2"])), 2);
    assert_eq!(code(&apery_lab(&["compute", "harmonic", "4", "--order", "0"])), 2);
    assert_eq!(code(&apery_lab(&["compute", "nosuch", "4"])), 2);
    assert_eq!(code(&apery_lab(&["compute", "apery", "4", "--mod", "6^2"])), 2);
    assert_eq!(code(&apery_lab(&["compute", "apery", "4", "--mod", "5^0"])), 2);
    assert_eq!(code(&apery_lab(&["nosuch-subcommand"])), 2);
}

#[test]
fn markdown_report_renders() {
    let out = apery_lab(&["verify", "--primes", "5..5", "--checks", "a1", "--format", "md"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("| a1 | 5 | 4 | pass |"));
    assert!(text.contains("Summary: 1 pass, 0 fail, 0 skip."));
}

#[test]
fn binary_path_exists() {
    assert!(Path::new(env!("CARGO_BIN_EXE_apery-lab")).exists());
}
