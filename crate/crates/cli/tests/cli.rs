use std::process::{Command, Output};

use serde_json::Value;

fn boolprice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boolprice")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.extend(["--json", "-"]);
    let out = boolprice(&full);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (value, out.status.code().unwrap())
}

fn verdicts_pass(report: &Value) -> bool {
    report["verdicts"].as_array().unwrap().iter().all(|v| v["passed"] == true)
}

#[test]
fn analyze_reports_structure() {
    let (r, code) = json(&["analyze", "--f", "fstar:2"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["PROOF"], 4);
    assert_eq!(r["results"]["k"], 2);
    assert_eq!(r["results"]["l"], 4);

    let (r, _) = json(&["analyze", "--f", "parity:5"]);
    assert_eq!(r["results"]["spread"], 1);
    assert_eq!(r["results"]["PROOF"], 5);
}

#[test]
fn malformed_dnf_is_an_input_error() {
    let out = boolprice(&["analyze", "--f", "x1 &"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("token 3"), "{err}");
}

#[test]
fn ratio_examples() {
    let (r, code) = json(&["ratio", "--f", "sym:00111", "--alg", "greedy", "--cost", "unit"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["ratio"]["ratio"], r["results"]["formula"]);
    assert!(verdicts_pass(&r));

    let (r, code) = json(&["ratio", "--f", "fstar:2", "--alg", "bf2", "--cost", "random:7"]);
    assert_eq!(code, 0);
    assert!(verdicts_pass(&r));

    let (r, _) = json(&["ratio", "--f", "parity:4", "--alg", "lpa", "--cost", "unit"]);
    assert_eq!(r["results"]["ratio"]["ratio"], "1");
}

#[test]
fn algorithm_mismatch_is_named() {
    let out = boolprice(&["ratio", "--f", "g", "--alg", "bf2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("f*"));
    assert_eq!(boolprice(&["ratio", "--f", "g", "--alg", "nope"]).status.code(), Some(2));
    assert_eq!(boolprice(&["verify", "nope"]).status.code(), Some(2));
}

#[test]
fn static_order_is_scored_exhaustively() {
    let (r, code) = json(&["ratio", "--f", "majority:3", "--alg", "order:2,1,0", "--table"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["ratio"]["ratio"], "3/2");
    assert_eq!(r["results"]["ratio"]["per_assignment"].as_array().unwrap().len(), 8);
    assert_eq!(boolprice(&["ratio", "--f", "majority:3", "--alg", "order:0,0,1"]).status.code(), Some(2));
}

#[test]
fn adversaries() {
    let (r, code) = json(&["ratio", "--f", "sym:0011", "--adversary", "symmetric", "--cost", "random:5"]);
    assert_eq!(code, 0);
    assert!(verdicts_pass(&r));

    let (r, code) = json(&["ratio", "--f", "family:2,2", "--alg", "lpa", "--adversary", "factored"]);
    assert_eq!(code, 0);
    assert!(verdicts_pass(&r));

    let (r, code) = json(&["ratio", "--f", "fstar:2", "--alg", "bf2", "--adversary", "survival:c2"]);
    assert_eq!(code, 0);
    assert!(verdicts_pass(&r));

    let out = boolprice(&["ratio", "--f", "g", "--adversary", "factored", "--cost", "unit"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lp_commands() {
    let (r, _) = json(&["lp", "solve", "--f", "parity:3"]);
    assert_eq!(r["results"]["solution"]["s"]["x0"], "1/3");
    assert_eq!(r["results"]["solution"]["objective"], "1");

    let (r, _) = json(&["lp", "delta", "--f", "g"]);
    assert_eq!(r["results"]["delta"], "3");
    assert_eq!(r["results"]["PROOF"], 4);

    let (r, code) = json(&["lp", "family", "--k", "1", "--t", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["delta"], "4");
    assert_eq!(r["results"]["PROOF"], 6);

    let (r, code) = json(&["lp", "lemma2", "--f", "g"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["k_plus_gamma"], "3");

    let (r, code) = json(&["lp", "lpa", "--f", "majority:3", "--cost", "random:1"]);
    assert_eq!(code, 0);
    assert!(verdicts_pass(&r));
}

#[test]
fn quadratic_commands() {
    let out = boolprice(&["quad", "fstar", "--s", "1"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "x0 & x1 | !x0 & x2\n");
    let (r, code) = json(&["quad", "analyze", "--f", "fstar:3"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["analysis"]["survivor_bound"], true);
    let out = boolprice(&["quad", "analyze", "--f", "x0 & x1 & x2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sym_reports_spread() {
    let (r, code) = json(&["sym", "00111", "--cost", "random:2"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["spread"], 3);
    assert_eq!(r["results"]["extremal_costs"]["x0"], "0");
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("g.tt");
    let out = boolprice(&["gen", "g", "--format", "table"]);
    std::fs::write(&table, &out.stdout).unwrap();
    let dnf = dir.path().join("g.dnf");
    let out = boolprice(&["gen", "g"]);
    std::fs::write(&dnf, &out.stdout).unwrap();
    let costs = dir.path().join("c.json");
    std::fs::write(&costs, r#"{"x0": "1/2", "x1": 2, "x2": "3", "x3": 0, "x4": "0.25"}"#).unwrap();

    let mut ratios = Vec::new();
    for f in [&table, &dnf] {
        let (r, code) = json(&["ratio", "--f", f.to_str().unwrap(), "--cost", costs.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(r["results"]["costs"]["x4"], "1/4");
        ratios.push(r["results"]["ratio"].clone());
    }
    assert_eq!(ratios[0], ratios[1]);

    // a parity table has no DNF; gen prints the canonical one with a header
    let out = boolprice(&["gen", "parity:2"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "vars 2\nx0 & !x1 | !x0 & x1\n");
}

#[test]
fn verify_is_deterministic() {
    let first = boolprice(&["verify", "lemma2", "--json", "-"]);
    let second = boolprice(&["verify", "lemma2", "--json", "-"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let report: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(report["criteria"][0]["id"], 9);
    assert_eq!(report["passed"], true);
}

#[test]
fn caps_are_enforced() {
    let out = boolprice(&["--cap-n", "4", "lp", "delta", "--f", "g"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}
