use std::process::{Command, Output};

use shallowperm_cli::{OutputDocument, Payload};

fn shallowperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shallowperm")).args(args).output().expect("binary runs")
}

fn document(args: &[&str]) -> (OutputDocument, i32) {
    let out = shallowperm(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: OutputDocument = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    let again: OutputDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, again);
    assert_eq!(doc.schema_version, "1");
    (doc, out.status.code().unwrap())
}

fn totals(doc: &OutputDocument) -> Vec<String> {
    match &doc.payload {
        Payload::CountTable(t) => t.totals().iter().map(|(_, c)| c.to_string()).collect(),
        other => panic!("unexpected payload {other:?}"),
    }
}

#[test]
fn count_132_totals_are_odd_fibonacci() {
    let (doc, code) = document(&["count", "--n", "1..8", "--avoid", "132"]);
    assert_eq!(code, 0);
    assert_eq!(doc.command, "count");
    assert_eq!(totals(&doc), ["1", "2", "5", "13", "34", "89", "233", "610"]);
}

#[test]
fn count_examples() {
    assert_eq!(totals(&document(&["count", "--n", "4", "--avoid", "231"]).0), ["14"]);
    assert_eq!(totals(&document(&["count", "--n", "5", "--avoid", "123", "--symmetry", "centro"]).0), ["1"]);
    assert_eq!(totals(&document(&["count", "--n", "4", "--method", "both"]).0), ["23"]);
}

#[test]
fn counts_are_json_strings() {
    let out = shallowperm(&["count", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["payload"]["data"]["rows"][0]["count"], serde_json::json!("6"));
}

#[test]
fn certify_exit_codes() {
    let (doc, code) = document(&["certify", "4,2,1,6,3,5"]);
    assert_eq!(code, 0);
    let Payload::Certificate(c) = &doc.payload else { panic!() };
    assert_eq!(c.steps.len(), 5);

    let (doc, code) = document(&["certify", "3,4,1,2"]);
    assert_eq!(code, 1);
    let Payload::Certificate(c) = &doc.payload else { panic!() };
    assert!(!c.verdict && c.first_violation().is_some());

    let (doc, code) = document(&["certify", "1"]);
    assert_eq!(code, 0);
    let Payload::Certificate(c) = &doc.payload else { panic!() };
    assert!(c.steps.is_empty());

    assert_eq!(shallowperm(&["certify", "3,x"]).status.code(), Some(2));
}

#[test]
fn gf_outputs() {
    let (doc, _) = document(&["gf", "--name", "T231", "--order", "5"]);
    let Payload::Series(s) = &doc.payload else { panic!() };
    let coeffs: Vec<String> = s.rows.iter().map(|r| r.coefficient.to_string()).collect();
    assert_eq!(coeffs, ["1", "1", "2", "5", "14", "41"]);

    let (doc, _) = document(&["gf", "--name", "A321xz", "--order", "6"]);
    let Payload::Series(s) = &doc.payload else { panic!() };
    assert_eq!(s.roles.size_variable, "z");
    let sums: Vec<i64> = (1..=6)
        .map(|n| {
            s.rows.iter().filter(|r| r.n == n).map(|r| r.coefficient.to_integer().try_into().unwrap_or(0i64)).sum()
        })
        .collect();
    assert_eq!(sums, [1, 2, 5, 13, 34, 89]);

    let (doc, _) = document(&["gf", "--name", "Grassmannian", "--order", "6"]);
    let Payload::Series(s) = &doc.payload else { panic!() };
    let coeffs: Vec<String> = s.rows.iter().skip(2).map(|r| r.coefficient.to_string()).collect();
    assert_eq!(coeffs, ["2", "5", "11", "21", "36"]);

    assert_eq!(shallowperm(&["gf", "--name", "Nope"]).status.code(), Some(2));
    assert_eq!(shallowperm(&["gf", "--name", "T231", "--order", "1000"]).status.code(), Some(1));
}

#[test]
fn verify_suites() {
    for (suite, n) in [("table1", "8"), ("mesh", "7"), ("all", "5")] {
        let (doc, code) = document(&["verify", "--suite", suite, "--max-n", n]);
        let Payload::Verification(r) = &doc.payload else { panic!() };
        assert!(r.overall, "{suite}: {:?}", r.checks.iter().find(|c| !c.passed));
        assert_eq!(code, 0);
    }
    assert_eq!(shallowperm(&["verify", "--suite", "bogus", "--max-n", "3"]).status.code(), Some(2));
}

#[test]
fn profile_outputs() {
    let (doc, code) = document(&["profile", "--n", "1"]);
    assert_eq!(code, 0);
    let Payload::Profile(p) = &doc.payload else { panic!() };
    assert!(p.equal);
    let (doc, _) = document(&["profile", "--n", "5"]);
    let Payload::Profile(p) = &doc.payload else { panic!() };
    assert_eq!(p.left.total().to_string(), "34");
    assert_eq!(p.right.total().to_string(), "34");
    assert_eq!(shallowperm(&["profile", "--n", "13"]).status.code(), Some(1));
}

#[test]
fn caps_and_usage_errors() {
    let out = shallowperm(&["count", "--n", "11", "--method", "brute"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    assert_eq!(shallowperm(&["count", "--n", "4", "--by", "height"]).status.code(), Some(2));
    assert_eq!(shallowperm(&["count"]).status.code(), Some(2));
}

#[test]
fn csv_and_markdown_match_json_rows() {
    let args = ["count", "--n", "1..5", "--avoid", "321", "--by", "descents"];
    let (doc, _) = document(&args);
    let Payload::CountTable(t) = &doc.payload else { panic!() };
    let csv = String::from_utf8(shallowperm(&[&args[..], &["--format", "csv"]].concat()).stdout).unwrap();
    let md = String::from_utf8(shallowperm(&[&args[..], &["--format", "md"]].concat()).stdout).unwrap();
    let csv_rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(csv_rows.len(), t.rows.len());
    for (line, row) in csv_rows.iter().zip(&t.rows) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0], row.n.to_string());
        assert_eq!(cells[2], row.count.to_string());
    }
    assert_eq!(
        md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| n ") && !l.starts_with("| ---")).count(),
        t.rows.len()
    );
}
