use std::process::Command;

use ffhgf_cli::commands::run_args;
use serde_json::Value;

fn run_json(args: &[&str]) -> Value {
    let out = run_args(std::iter::once("ffhgf").chain(args.iter().copied())).unwrap();
    assert!(out.success, "{args:?}");
    serde_json::from_str(&out.text).unwrap()
}

fn complex(v: &Value) -> (f64, f64) {
    (v["complex"]["re"].as_f64().unwrap(), v["complex"]["im"].as_f64().unwrap())
}

#[test]
fn two_f_one_at_one() {
    let v = run_json(&["--q", "3", "hgf", "--upper", "1,1", "--lower", "0", "--lam", "1"]);
    assert_eq!(v["text"], "-1");
    assert_eq!(v["num"][0], -1);
}

#[test]
fn gauss_sum_has_absolute_value_sqrt_q() {
    for q in ["3", "4", "5", "7"] {
        let v = run_json(&["--q", q, "gauss", "--chi", "1"]);
        let (re, im) = complex(&v);
        let q: f64 = q.parse().unwrap();
        assert!((re * re + im * im - q).abs() < 1e-9, "{v}");
    }
    // over F_3, g(η) = ζ₃² − ζ₃ = −i√3
    let (re, im) = complex(&run_json(&["--q", "3", "gauss", "--chi", "1"]));
    assert!(re.abs() < 1e-9 && (im + 3f64.sqrt()).abs() < 1e-9);
}

#[test]
fn gauss_table_lists_every_character() {
    let v = run_json(&["--q", "5", "gauss"]);
    assert_eq!(v.as_array().unwrap().len(), 4);
    let out = run_args(["ffhgf", "--q", "5", "--table", "gauss"]).unwrap();
    let mut lines = out.text.lines();
    assert_eq!(lines.next(), Some("chi,value,re,im,num,den"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn field_descriptor() {
    let v = run_json(&["--p", "3", "--e", "2", "field"]);
    assert_eq!(v["q"], 9);
    assert_eq!(v["modulus"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["generator"], 4);
}

#[test]
fn jacobi_sum_absolute_value() {
    let v = run_json(&["--q", "5", "jacobi", "--chis", "1,2,3"]);
    let (re, im) = complex(&v);
    assert!((re * re + im * im - 25.0).abs() < 1e-9, "{v}");
}

#[test]
fn phi_reports_reduction_and_table() {
    let v = run_json(&["--q", "3", "phi", "--delta", "1,1,2", "--z", "r1:1,0,1,1;r2:0,1,1,2", "--chi", "1,0,1|a=2"]);
    assert_eq!(v["text"], "-2");
    let rows = run_json(&["--q", "3", "phi", "--delta", "1,1,2", "--z", "1,0,1,1;0,1,1,2"]);
    // |H_Δ| = 2·2·(2·3) over F_3
    assert_eq!(rows.as_array().unwrap().len(), 24);
}

#[test]
fn count_agrees_with_closed_form() {
    let v = run_json(&["--q", "3", "count", "--family", "mxn", "--m", "2", "--n", "2", "--lam", "2", "--chi", "1,1,0,0"]);
    assert_eq!(v["closed_form"]["agrees"], true);
    let summary = run_json(&["--q", "5", "count", "--family", "fermat", "--n", "2"]);
    assert_eq!(summary["points"], summary["naive_count"]);
}

#[test]
fn iso_transports_all_characters() {
    let v = run_json(&["--q", "3", "iso", "--family", "gauss", "--lam", "2", "--sigma", "1 3", "--points"]);
    assert_eq!(v["transport"]["failures"], 0);
    assert_eq!(v["transport"]["characters"], 16);
}

#[test]
fn verify_gauss_sums_passes() {
    let v = run_json(&["--q", "3,5,7", "verify", "--suite", "gauss-sums"]);
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 0);
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let args = ["ffhgf", "--q", "3", "--seed", "42", "verify", "--suite", "symmetry"];
    let a = run_args(args).unwrap();
    let b = run_args(args).unwrap();
    assert!(a.success);
    assert_eq!(a.text, b.text);
}

#[test]
fn unknown_suite_is_an_error() {
    assert!(run_args(["ffhgf", "verify", "--suite", "nosuch"]).is_err());
    assert!(run_args(["ffhgf", "--q", "6", "field"]).is_err());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ffhgf");
    let ok = Command::new(bin).args(["--q", "3", "verify", "--suite", "pochhammer"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["verify", "--suite", "nosuch"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
