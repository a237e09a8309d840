use cdc_bounds::cli::{run, EXIT_OK, EXIT_TRUNCATED, EXIT_USAGE};
use cdc_bounds::search::SolveReport;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("cdc-bounds").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn solve_prints_json_and_table() {
    let (code, out, _) = call(&["solve", "6", "4", "3", "--ub", "4"]);
    assert_eq!(code, EXIT_OK);
    let rep = SolveReport::from_json(&out).unwrap();
    assert_eq!(rep.fronts[0].poly, "q^6+q^2+q+1");
    assert_eq!(rep.fronts[0].kind, "U");
    let (code, out, _) = call(&["solve", "4", "4", "2", "--format", "table"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("q^2+1"), "{out}");
    assert!(out.contains("12,3"), "{out}");
}

#[test]
fn solve_defaults_and_overrides() {
    // Tabulated instance: ub comes from the corpus.
    assert_eq!(call(&["solve", "8", "4", "4"]).0, EXIT_OK);
    // Not tabulated: refuse to guess.
    let (code, _, err) = call(&["solve", "21", "4", "3"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--ub"), "{err}");
    let (code, out, _) = call(&["solve", "9", "6", "3", "--ub", "johnson", "--q", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("q=3"));
    let (code, out, _) = call(&["solve", "7", "4", "3", "--ub", "7", "--split", "--format", "table"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("split at 4"), "{out}");
    let (code, out, _) = call(&["solve", "8", "8", "4", "--regime", "spread", "--format", "table"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("q^4+1"));
}

#[test]
fn solve_budget_and_seeding() {
    let (code, out, _) = call(&["solve", "12", "4", "4", "--budget", "0.01"]);
    assert_eq!(code, EXIT_TRUNCATED);
    assert!(SolveReport::from_json(&out).unwrap().incomplete);
    let dir = std::env::temp_dir().join(format!("cdc-bounds-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let seed = dir.join("seed.json");
    let (code, _, _) = call(&["solve", "8", "4", "4", "--out", seed.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = call(&["solve", "8", "4", "4", "--seed-front", seed.to_str().unwrap(), "--stages", "6,10"]);
    assert_eq!(code, EXIT_OK);
    let a = SolveReport::from_json(&std::fs::read_to_string(&seed).unwrap()).unwrap();
    let b = SolveReport::from_json(&out).unwrap();
    assert_eq!(a.fronts[0].poly, b.fronts[0].poly);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_arguments_are_usage_errors() {
    for args in [
        &["solve", "6", "5", "3", "--ub", "4"][..],
        &["solve", "6", "4", "3", "--ub", "x"],
        &["solve", "6", "4", "3", "--q", "1"],
        &["solve", "6", "4", "3", "--ub", "4", "--budget", "-1"],
        &["solve", "6", "4", "3", "--ub", "4", "--max-dive", "9"],
        &["frobnicate"],
        &["diagram", "--pivot", "1256"],
        &["ilp", "6", "4", "3", "--variant", "cover", "--literal"],
        &["ilp", "6", "4", "3", "--variant", "nope"],
        &["verify", "--tier", "7"],
        &["histogram", "6", "4", "3", "--regime", "spread"],
    ] {
        let (code, _, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn diagram_output() {
    let (code, out, _) = call(&["diagram", "--pivot", "00010100011100", "--delta", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("rows: [6,5,2,2,2]"), "{out}");
    assert!(out.contains("nu: [5,3,3,4]"), "{out}");
    assert!(out.contains("upper exponent: 3"), "{out}");
    let (code, out, _) = call(&["diagram", "--pivot", "1256", "--n", "12", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"], serde_json::json!([6, 4, 4, 4, 3]));
}

#[test]
fn ilp_and_spread_and_histogram() {
    let (code, out, _) = call(&["ilp", "6", "4", "3", "--variant", "counting", "--ub", "4", "--fix", "6:1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("\\ "));
    assert!(out.contains("Subject To") && out.contains("Generals") && out.trim_end().ends_with("End"));
    let (code, out, _) = call(&["spread", "9", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("q^5+1\nclique: 480,30"), "{out}");
    let (code, out, _) = call(&["histogram", "14", "8", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("m_18=1\n"), "{out}");
    assert_eq!(out.lines().count(), 19);
}

#[test]
fn verify_audit() {
    let (code, out, _) = call(&["verify", "--tier", "0"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("failed 0"));
    let (code, _, _) = call(&["verify-corpus", "--tier", "1", "--filter", "n=6,d=4,k=3"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn help_and_version() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("solve"));
    assert_eq!(call(&["--version"]).0, EXIT_OK);
}
