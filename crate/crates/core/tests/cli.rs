use std::process::Command;

use psu_torsion::report::{Envelope, FactorPayload, ReportRecord, Target, VerifyPayload};

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_psu-torsion"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn envelope(args: &[&str]) -> Envelope {
    let (stdout, _, _) = run(args);
    serde_json::from_str(&stdout).expect("valid JSON envelope")
}

#[test]
fn factor_output_and_exit_codes() {
    assert_eq!(run(&["factor", "12"]).0, "12 = 2^2 · 3\n");
    assert_eq!(run(&["factor", "7"]).0, "7 = 7\n");
    let (stdout, stderr, code) = run(&["factor", "1"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("error"));
    assert_eq!(run(&["factor", "abc"]).2, 2);
    assert_eq!(run(&["frobnicate"]).2, 2);
}

#[test]
fn factor_json() {
    let env = envelope(&["factor", "360", "--json"]);
    assert_eq!(env.command, "factor");
    assert_eq!(env.target, Target::N(360));
    let payload: FactorPayload = serde_json::from_value(env.payload).unwrap();
    let pairs: Vec<(u64, u32)> = payload.factors.iter().map(|f| (f.prime, f.exponent)).collect();
    assert_eq!(pairs, [(2, 3), (3, 2), (5, 1)]);
    assert_eq!(payload.rendered, "360 = 2^3 · 3^2 · 5");
}

#[test]
fn tables_rows_and_oracles() {
    let (text, _, code) = run(&["tables", "12"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(2)
        .take(12)
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows[0], ["1", "12", "-", "-"]);
    assert_eq!(rows[1], ["2", "6", "2", "Q2"]);
    assert_eq!(rows[2], ["3", "2", "3", "Q3"]);
    assert_eq!(rows[3], ["4", "1", "2", "Q2"]);
    assert_eq!(rows[11], ["12", "1", "1", "Q0"]);

    let brute = run(&["tables", "8", "--csv"]).0;
    assert_eq!(run(&["tables", "8", "--csv", "--oracle", "schubert"]).0, brute);
    assert_eq!(run(&["tables", "8", "--oracle", "nope"]).2, 2);

    let (text, _, code) = run(&["tables", "2"]);
    assert_eq!(code, 0);
    assert!(text.contains("Q_2 = {2}"));
    assert!(text.contains("Q_0 = {}"));
}

#[test]
fn tables_csv_layout() {
    let (csv, _, code) = run(&["tables", "6", "--csv"]);
    assert_eq!(code, 0);
    assert_eq!(csv, "k,b,a,block\n1,6,,\n2,3,2,Q2\n3,1,3,Q3\n4,1,1,Q0\n5,1,1,Q0\n6,1,1,Q0\n");
}

#[test]
fn chow_output() {
    let (text, _, code) = run(&["chow", "12"]);
    assert_eq!(code, 0);
    assert!(text.contains("p = 2: ⟨4ω, 2ω^2, ω^4⟩"));
    assert!(text.contains("p = 3: ⟨3ω, ω^3⟩"));
    assert!(text.contains("degreewise check: pass"));
    assert!(run(&["chow", "4"]).0.contains("p = 2: ⟨4ω, 2ω^2, ω^4⟩"));
    assert!(run(&["chow", "3"]).0.contains("p = 3: ⟨3ω, ω^3⟩"));
    assert!(run(&["chow", "2"]).0.contains("extension"));

    let env = envelope(&["chow", "12", "--json"]);
    let record: ReportRecord = serde_json::from_value(env.payload).unwrap();
    assert_eq!(record.chow.len(), 2);
    assert!(env.checks.iter().all(|c| c.pass));
}

#[test]
fn cstar_sets() {
    assert!(run(&["cstar", "12", "--set", "2,3"]).0.contains("multiplier: 6\n"));
    assert!(run(&["cstar", "12", "--set", "2..12"]).0.contains("multiplier: 12\n"));
    assert!(run(&["cstar", "12", "--set", ""]).0.contains("multiplier: 1\n"));
    assert!(run(&["cstar", "12"]).0.contains("multiplier: 1\n"));
    assert_eq!(run(&["cstar", "12", "--set", "1,2"]).2, 2);
    assert_eq!(run(&["cstar", "12", "--set", "2..13"]).2, 2);
}

#[test]
fn verify_ranges() {
    let (text, _, code) = run(&["verify", "2", "100"]);
    assert_eq!(code, 0);
    assert!(text.ends_with("99 values verified, 0 failures\n"));
    let (text, _, code) = run(&["verify", "2", "2"]);
    assert_eq!(code, 0);
    assert!(text.ends_with("1 values verified, 0 failures\n"));
    assert_eq!(run(&["verify", "5", "2"]).2, 2);
    assert_eq!(run(&["verify", "1", "5"]).2, 2);
}

#[test]
fn verify_fault_injection_reports_witness() {
    let (text, _, code) = run(&["verify", "2", "40", "--inject-fault", "24", "--workers", "3"]);
    assert_eq!(code, 1);
    assert!(text.contains("first failure: closed_form_matches_bruteforce"));
    assert!(text.contains("n=24"));
    assert!(text.ends_with("39 values verified, 1 failures\n"));

    let env = envelope(&["verify", "2", "40", "--inject-fault", "24", "--json"]);
    assert!(!env.all_passed());
    let failed: Vec<_> = env.checks.iter().filter(|c| !c.pass).collect();
    assert_eq!(failed.len(), 1);
    let w = failed[0].witness.as_ref().expect("failed check carries a witness");
    assert_eq!(w["n"], 24);
    assert_eq!(w["k"], 24);
}

#[test]
fn verify_json_payload() {
    let env = envelope(&["verify", "2", "50", "--json", "--ineq-bound", "20", "--workers", "2"]);
    assert_eq!(env.command, "verify");
    let payload: VerifyPayload = serde_json::from_value(env.payload.clone()).unwrap();
    assert_eq!(payload.verified, 49);
    assert_eq!(payload.failures, 0);
    let ineq = payload.tallies.iter().find(|t| t.name == "strict_valuation_inequality").unwrap();
    assert_eq!(ineq.passed, 19);
    let text = serde_json::to_string(&env).unwrap();
    assert!(text.starts_with(r#"{"command":"verify","range":{"from":2,"to":50}"#));
}

#[test]
fn json_round_trips_for_every_command() {
    for args in [
        &["factor", "97", "--json"][..],
        &["tables", "30", "--json"],
        &["chow", "30", "--json"],
        &["cstar", "30", "--set", "2..5,8", "--json"],
        &["verify", "2", "30", "--json"],
    ] {
        let (stdout, _, code) = run(args);
        assert_eq!(code, 0, "{args:?}");
        let env: Envelope = serde_json::from_str(&stdout).unwrap();
        let emitted = serde_json::to_string(&env).unwrap() + "\n";
        assert_eq!(emitted, stdout, "{args:?}");
        assert_eq!(serde_json::from_str::<Envelope>(&emitted).unwrap(), env);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["tables", "48"][..],
        &["verify", "2", "120", "--workers", "4", "--json"],
        &["chow", "360"],
    ] {
        assert_eq!(run(args), run(args), "{args:?}");
    }
    let (with_meta, _, _) = run(&["factor", "12", "--json", "--meta"]);
    let env: Envelope = serde_json::from_str(&with_meta).unwrap();
    assert!(env.meta.is_some());
    let (without, _, _) = run(&["factor", "12", "--json"]);
    assert!(!without.contains("meta"));
}
