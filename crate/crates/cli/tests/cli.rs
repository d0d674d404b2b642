//! End-to-end tests of the `cayley` binary: output shapes, exit codes,
//! and the frozen reference values.

use std::process::{Command, Output};

fn cayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_cases() {
    let out = cayley(&["classify", "-n", "7", "-S", "r^1,r^6,s,s*r^3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("case: III"));

    let out = cayley(&["classify", "-n", "6", "-S", "r^1,r^5,r^3,s*r^2"]);
    assert!(stdout(&out).contains("case: IV"));

    let out = cayley(&["classify", "-n", "7", "-S", "r^1,r^6,s,s*r^3", "--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(j["derived"]["case"], "III");
    assert_eq!(j["n"], 7);
}

#[test]
fn classify_invalid_set_exits_1() {
    let out = cayley(&["classify", "-n", "6", "-S", "r^1,r^2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inverse"));
}

#[test]
fn usage_error_exits_1() {
    let out = cayley(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analyze_structures() {
    let out = cayley(&["analyze", "-n", "6", "-S", "r^1,r^5,r^2,r^4"]);
    let text = stdout(&out);
    assert!(text.contains("2 components"));
    assert!(text.contains("verified: true"));

    let out = cayley(&["analyze", "-n", "5", "-S", "s,s*r^1,s*r^2,s*r^3"]);
    let text = stdout(&out);
    assert!(text.contains("crown"));
    assert!(text.contains("verified: true"));

    let out = cayley(&["analyze", "-n", "5", "-S", "s,s*r^1,s*r^2,s*r^3", "--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(j["verified"], true);
    assert_eq!(j["special"], "crown");
}

#[test]
fn analyze_exports() {
    let out = cayley(&["analyze", "-n", "3", "-S", "r^1,r^2", "--format", "graph6"]);
    // two disjoint triangles on 6 vertices
    assert_eq!(stdout(&out).trim(), "EwCW");

    let dir = std::env::temp_dir().join(format!("cayley-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.dot");
    let out = cayley(&[
        "analyze", "-n", "3", "-S", "r^1,r^2", "--format", "dot",
        "-o", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("graph"));
    assert!(dot.contains("r^1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn aut_reference_orders() {
    let out = cayley(&["aut", "-n", "7", "-S", "r^1,r^6,r^2,r^5", "--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(j["order"], "392");
    assert_eq!(j["normal"], false);
    assert_eq!(j["normality_consistent"], true);

    let out = cayley(&["aut", "-n", "5", "-S", "s,s*r^1,s*r^2,s*r^3", "--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(j["order"], "240");
}

#[test]
fn aut_cap_exits_2() {
    let out = cayley(&["aut", "-n", "40", "-S", "r^1,r^39,s,s*r^1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    // n = 3 refutes: exit 3 unless expected
    let out = cayley(&["verify", "thm5.2", "--n", "3", "--k", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("refuted"));

    let out = cayley(&[
        "verify", "thm5.2", "--n", "3", "--k", "1",
        "--expect-discrepancies", "n=3,k=1",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = cayley(&["verify", "thm3.7", "--p", "7,11,13", "--t", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("verified").count(), 3);

    let out = cayley(&["verify", "cor3.12", "--p", "7", "--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(j[0]["verdict"], "verified");
    assert_eq!(j[0]["observed"]["aut_order"], "392");

    let out = cayley(&["verify", "nonsense", "--p", "7"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tables_match() {
    let out = cayley(&["tables", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all 4 rows match"));

    let out = cayley(&["tables", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(j["match"], true);
    assert_eq!(j["rows"][3]["aut_order"], "9248");
}

#[test]
fn sweep_dataset() {
    let out = cayley(&["sweep", "--case", "II", "--n", "4..6", "--k", "3"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,case,params,components,component_size,aut_order,normal,consistent,verdict,error"
    );
    assert_eq!(lines.count(), 3);

    // crown rows: k = n-1 gives |Aut| = 2 n!
    let out = cayley(&["sweep", "--case", "II", "--n", "5", "--k", "4", "--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(j[0]["aut_order"], "240");
    assert_eq!(j[0]["consistent"], "true");

    // empty range: header only
    let out = cayley(&["sweep", "--case", "III", "--n", "9..8"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim().lines().count(), 1);
}

#[test]
fn sweep_workers_deterministic() {
    let a = cayley(&["sweep", "--case", "III", "--n", "4..7", "--workers", "1"]);
    let b = cayley(&["sweep", "--case", "III", "--n", "4..7", "--workers", "4"]);
    assert_eq!(stdout(&a), stdout(&b));
}
