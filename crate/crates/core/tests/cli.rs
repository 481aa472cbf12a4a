use homcount::cli::{execute, EXIT_BUDGET, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION_FAILED};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["homcount"];
    argv.extend_from_slice(args);
    execute(argv)
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend_from_slice(&["--format", "json"]);
    let (code, out) = run(&a);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn surface_table_matches_golden_csv() {
    let (code, out) = run(&["surface-table", "--max-genus", "5", "--max-n", "5", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, include_str!("golden/surface_table.csv"));
}

#[test]
fn commuting_pairs_in_s3() {
    let (code, v) = run_json(&["hom", "count", "--group", "S3", "--pres", "gens:x,y; rels:[x,y]"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["count"], "18");
    assert_eq!(v["quotient"], "3");
    assert_eq!(v["divisible"], true);
    assert_eq!(v["abelianization"]["free_rank"], "2");
}

#[test]
fn klein_bottle_torsor_in_c3() {
    let (code, v) = run_json(&["torsor", "verify", "--group", "C3", "--pres", "gens:x; rels:", "--sigma", "x -> x^-1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["pass"], true);
    assert_eq!(v["upstairs_count"], "3");
    assert_eq!(v["orbit_count"], "1");
}

#[test]
fn constrained_counts() {
    // x a transposition commuting with a 3-cycle: none in S3.
    let (code, v) = run_json(&[
        "hom", "constrained", "--group", "S3", "--pres", "gens: x, y; rels: [x,y]",
        "--constrain", "x@(1 2)", "--constrain", "y@(1 2 3)",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["count"], "0");
    let (_, v) = run_json(&[
        "hom", "constrained", "--group", "S3", "--pres", "gens: x, y; rels: [x,y]", "--constrain", "x@#1",
    ]);
    assert_eq!(v["constraints"][0]["class"], "1");
    let (code, v) = run_json(&["hom", "constrained", "--group", "S3", "--pres", "gens: x", "--constrain", "x@(1 2 3 4)"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(v["reason"], "invalid_constraint");
}

#[test]
fn output_is_independent_of_workers() {
    let args = ["hom", "count", "--group", "S4", "--pres", "gens: x, y, z; rels: [x,y] z^2", "--format", "json"];
    let mut first = None;
    for w in ["1", "2", "3", "8"] {
        let mut a = args.to_vec();
        a.extend_from_slice(&["--workers", w]);
        let (code, out) = run(&a);
        assert_eq!(code, EXIT_OK);
        match &first {
            None => first = Some(out),
            Some(f) => assert_eq!(f, &out, "workers = {w}"),
        }
    }
    let torsor = ["torsor", "verify", "--group", "S4", "--pres", "gens: x, y", "--sigma", "x -> y; y -> x"];
    let (_, a) = run(&[&torsor[..], &["--workers", "1"]].concat());
    let (_, b) = run(&[&torsor[..], &["--workers", "4"]].concat());
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    let (code, v) = run_json(&["hom", "count", "--group", "S6", "--pres", "gens: a, b, c", "--budget", "1e4"]);
    assert_eq!(code, EXIT_BUDGET);
    assert_eq!(v["reason"], "budget_exceeded");
    let (code, _) = run(&["hom", "count", "--group", "S6", "--pres", "gens: a", "--budget", "100"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, v) = run_json(&["hom", "count", "--group", "D8", "--pres", "gens: a"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(v["reason"], "invalid_spec");
    let (code, _) = run(&["hom", "count", "--group", "S3"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn inconsistent_sigma_is_a_verification_failure() {
    // y is not a generator of the base.
    let (code, v) = run_json(&["torsor", "verify", "--group", "C3", "--pres", "gens: x; rels: x^3", "--sigma", "x -> x y"]);
    assert_eq!(code, EXIT_USAGE, "{v}");
    // x -> y sends the relator x^2 to y^2, which a 3-cycle does not kill.
    let (code, v) = run_json(&["torsor", "verify", "--group", "S3", "--pres", "gens: x, y; rels: x^2", "--sigma", "x -> y"]);
    assert_eq!(code, EXIT_VERIFICATION_FAILED);
    assert_eq!(v["reason"], "sigma_inconsistent");
}

#[test]
fn json_numbers_are_strings() {
    fn check(v: &Value) {
        match v {
            Value::Number(n) => panic!("bare number {n}"),
            Value::Array(a) => a.iter().for_each(check),
            Value::Object(m) => m.values().for_each(check),
            _ => {}
        }
    }
    for args in [
        &["surface-table", "--max-genus", "2", "--max-n", "4"][..],
        &["group", "info", "--group", "SL2_3"],
        &["char", "table", "--n", "4"],
        &["bs", "check", "--degree", "3", "--m", "2", "--n", "1"],
        &["growth", "--pres", "gens: x, t; rels: [x,t]", "--max-n", "4"],
        &["verify", "paper", "--criterion", "1"],
    ] {
        let (code, v) = run_json(args);
        assert_eq!(code, EXIT_OK, "{args:?}");
        check(&v);
    }
}

#[test]
fn growth_of_z_squared() {
    let (code, v) = run_json(&["growth", "--pres", "gens: x, t; rels: [x,t]", "--max-n", "5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["v"], serde_json::json!(["1", "1", "1", "1", "1"]));
    assert_eq!(v["u"], serde_json::json!(["1", "3", "4", "7", "6"]));
    let (code, v) = run_json(&["growth", "--pres", "gens: x; rels: x^2", "--max-n", "3", "--method", "character"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(v["reason"], "invalid_spec");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let p = path.to_str().unwrap();
    let (code, out) = run(&["surface-table", "--max-genus", "5", "--max-n", "5", "--format", "csv", "--output", p]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), out);
}
