use std::process::{Command, Output};

use serde_json::Value;

fn ultra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ultra")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn hensel_root_with_non_unit_derivative() {
    let out = ultra(&["hensel", "--prime", "2", "--coeffs", "-17,0,1", "--x0", "1", "--prec", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["root"], "9 mod 32");
    assert_eq!(v["schema"], "1");
    assert_eq!(v["k"], 1);
}

#[test]
fn padic_absolute_value() {
    let out = ultra(&["padic", "--abs", "12", "--prime", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["abs"], "1/4");
}

#[test]
fn composite_prime_is_invalid_input() {
    let out = ultra(&["hensel", "--prime", "4", "--coeffs", "-17,0,1", "--x0", "1", "--prec", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("4 is not prime"));
    assert!(out.stdout.is_empty());
}

#[test]
fn failed_precondition_is_invalid_input() {
    // x^2 - 2 has no root in Z_2
    let out = ultra(&["hensel", "--prime", "2", "--coeffs", "-2,0,1", "--x0", "0", "--prec", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_is_invalid_input() {
    let out = ultra(&["hausdorff", "--spec", "{not json", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn refuted_doubling_candidate_exits_one() {
    let spec = r#"{"factors":[5,5],"scales":{"reciprocal-N":true}}"#;
    let out = ultra(&["audit", "doubling", "--spec", spec, "--candidate", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "refuted");
    assert!(v["witness"].is_object());
    let out = ultra(&["audit", "doubling", "--spec", spec, "--candidate", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn isometry_certificate() {
    let out = ultra(&["audit", "isometry", "--radix", "2,3,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["modulus"], 12);
}

#[test]
fn hausdorff_content_and_dimension() {
    let spec = r#"{"factors":[2,2,2],"scales":{"geometric":"1/3"}}"#;
    let v = json(&ultra(&["hausdorff", "--spec", spec, "--alpha", "1"]));
    assert_eq!(v["lower"], "8/27");
    assert_eq!(v["exact"], true);
    let v = json(&ultra(&["hausdorff", "--spec", spec, "--dimension", "--tol", "1e-3"]));
    let ln23 = 2f64.ln() / 3f64.ln();
    assert!(v["dimension"]["lo"].as_f64().unwrap() <= ln23 && ln23 <= v["dimension"]["hi"].as_f64().unwrap());
}

#[test]
fn reports_are_deterministic() {
    let args = ["maximal", "--random-depth", "4", "--seed", "7", "--check", "doob", "--t", "1/2"];
    let a = ultra(&args);
    let b = ultra(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 7);
}

#[test]
fn maximal_checks() {
    for check in ["maximal", "weak", "lp", "distribution"] {
        let out = ultra(&["maximal", "--random-depth", "3", "--check", check, "--p", "3"]);
        assert_eq!(out.status.code(), Some(0), "{check}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn character_gram_paths() {
    for path in ["exact", "float"] {
        let out = ultra(&["characters", "--n", "12", "--gram", path]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["identity"], true);
    }
    let v = json(&ultra(&["characters", "--n", "4"]));
    assert_eq!(v["turns"][1][1], "1/4");
    let out = ultra(&["characters", "--n", "5000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn radic_subcommands() {
    let v = json(&ultra(&["radic", "--radix", "2,3,2", "--embed", "-1"]));
    assert_eq!(v["embed"], serde_json::json!([1, 5, 11]));
    let v = json(&ultra(&["radic", "--radix", "2,3", "--preceq", "6,2"]));
    assert_eq!(v["preceq"], true);
    let v = json(&ultra(&["radic", "--radix", "2,3,2", "--project", "11", "--onto", "2,3"]));
    assert_eq!(v["residue"], 5);
}

#[test]
fn table_format() {
    let out = ultra(&["padic", "--abs", "12", "--prime", "2", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("abs") && l.trim_end().ends_with("1/4")));
}
