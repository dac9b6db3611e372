use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn qqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qqm"))
        .args(args)
        .env_remove("QQM_FORMAT")
        .output()
        .expect("spawn qqm")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = qqm(&full);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().expect("exit code"))
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn assert_schema(name: &str, instance: &Value) {
    let path = workspace_root()
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("valid schema");
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}

fn close(v: &Value, expected: f64, tol: f64) -> bool {
    (v.as_f64().expect("number") - expected).abs() <= tol
}

#[test]
fn prbox_quaternionic_is_perfect() {
    let (v, code) = json(&["prbox"]);
    assert_eq!(code, 0);
    assert_schema("prbox", &v);
    assert!(close(&v["chsh"]["win_probability"], 1.0, 1e-9));
    for cell in v["cells"].as_array().unwrap() {
        assert_eq!(cell["pr_condition"], "PASS");
    }
    let states: Vec<_> = v["schedule"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["pre_measurement_state"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(states, ["phi+", "phi+", "phi+", "phi-"]);
}

#[test]
fn prbox_complex_reaches_tsirelson() {
    let (v, code) = json(&["prbox", "--strategy", "complex"]);
    assert_eq!(code, 0);
    assert_schema("prbox", &v);
    let bound = 0.5 + 0.5 * std::f64::consts::FRAC_1_SQRT_2;
    assert!(close(&v["chsh"]["win_probability"], bound, 1e-9));
    assert!(v.get("schedule").is_none());
}

#[test]
fn prbox_sampling_is_reproducible() {
    let args = [
        "--format",
        "json",
        "--seed",
        "7",
        "--samples",
        "500",
        "prbox",
    ];
    let a = qqm(&args);
    let b = qqm(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_schema("prbox", &v);
    assert_eq!(v["empirical"]["samples"], 500);
    let other = qqm(&[
        "--format",
        "json",
        "--seed",
        "8",
        "--samples",
        "500",
        "prbox",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn chsh_compares_reference_strategies() {
    let (v, code) = json(&["chsh"]);
    assert_eq!(code, 0);
    assert_schema("chsh", &v);
    let got: Vec<(String, f64)> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["strategy"].as_str().unwrap().to_owned(),
                r["win_probability"].as_f64().unwrap(),
            )
        })
        .collect();
    let expect = [
        ("classical", 0.75),
        ("complex", 0.853_553_390_593_273_8),
        ("quaternionic", 1.0),
    ];
    for (name, value) in expect {
        let (_, w) = got.iter().find(|(n, _)| n == name).unwrap();
        assert!((w - value).abs() < 1e-9, "{name}: {w}");
    }
}

#[test]
fn chsh_single_noisy_strategy() {
    let (v, code) = json(&["chsh", "--strategy", "noisy:0.9"]);
    assert_eq!(code, 0);
    assert_schema("chsh", &v);
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
    assert!(close(&v["results"][0]["win_probability"], 0.9, 1e-12));
}

#[test]
fn vandam_inner_product_with_quaternionic_boxes() {
    let (v, code) = json(&["vandam", "--function", "IP2", "--strategy", "quaternionic"]);
    assert_eq!(code, 0);
    assert_schema("vandam", &v);
    assert_eq!(v["success_rate"], 1.0);
    assert_eq!(v["min_success"], 1.0);
    assert_eq!(v["boxes_used"], 2);
    assert_eq!(v["bits_bob_to_alice"], 1);
    assert_eq!(v["bits_alice_to_bob"], 0);
    assert_eq!(v["inputs"], 16);
}

#[test]
fn vandam_noisy_box_degrades() {
    let (v, code) = json(&["vandam", "--function", "AND", "--strategy", "noisy:0.85"]);
    assert_eq!(code, 0);
    assert_schema("vandam", &v);
    let s = v["success_rate"].as_f64().unwrap();
    assert!(s > 0.5 && s < 1.0, "{s}");
    assert!(close(&v["success_rate"], 0.85, 1e-12));
}

#[test]
fn vandam_complex_box_is_not_perfect() {
    let (v, _) = json(&["vandam", "--function", "IP2", "--strategy", "complex"]);
    assert_schema("vandam", &v);
    assert!(v["min_success"].as_f64().unwrap() < 1.0);
}

#[test]
fn vandam_reads_truth_table_file() {
    let path = fixture("majority3.json");
    let (v, code) = json(&["vandam", "--function", &path]);
    assert_eq!(code, 0);
    assert_schema("vandam", &v);
    assert_eq!(v["n_alice"], 2);
    assert_eq!(v["n_bob"], 1);
    assert_eq!(v["boxes_used"], 2);
    assert_eq!(v["success_rate"], 1.0);

    let table: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema("truth-table", &table);
}

#[test]
fn vandam_sampled_run_is_reproducible() {
    let args = [
        "--format",
        "json",
        "--seed",
        "3",
        "--samples",
        "200",
        "vandam",
        "--function",
        "AND",
        "--strategy",
        "noisy:0.8",
    ];
    let a = qqm(&args);
    assert_eq!(a.stdout, qqm(&args).stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_schema("vandam", &v);
    assert_eq!(v["sampled"]["runs"], 800);
}

#[test]
fn order_demo_quaternion_gates_give_orthogonal_states() {
    let (v, code) = json(&["order-demo"]);
    assert_eq!(code, 0);
    assert_schema("order-demo", &v);
    assert_eq!(v["expected_relation"], "orthogonal");
    for c in v["inner_product"].as_array().unwrap() {
        assert!(close(c, 0.0, 1e-12));
    }
    // |11> amplitude carries -k in one order and +k in the other.
    let k = |key: &str| v[key][3]["amplitude"][3].as_f64().unwrap();
    assert!((k("alice_first") + k("bob_first")).abs() < 1e-12);
    assert!(k("alice_first").abs() > 0.7);
}

#[test]
fn order_demo_complex_gates_commute() {
    let (v, code) = json(&["order-demo", "--gates", "complex"]);
    assert_eq!(code, 0);
    assert_schema("order-demo", &v);
    assert_eq!(v["alice_first"], v["bob_first"]);
    assert!(close(&v["inner_product"][0], 1.0, 1e-12));
}

#[test]
fn csv_output_has_header() {
    let out = qqm(&["--format", "csv", "prbox"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,b,x,y,probability"));
    assert_eq!(lines.count(), 16);

    let out = qqm(&["--format", "csv", "order-demo"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("ordering,basis,w,x,y,z"));
}

#[test]
fn format_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qqm"))
        .arg("chsh")
        .env("QQM_FORMAT", "json")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["subcommand"], "chsh");
}

#[test]
fn text_output_is_default() {
    let out = qqm(&["prbox"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["prbox", "--bogus"][..],
        &["prbox", "--strategy", "quantum"],
        &["prbox", "--strategy", "noisy:0.3"],
        &["vandam", "--function", "NAND"],
        &["vandam"],
        &["--format", "yaml", "chsh"],
        &["order-demo", "--gates", "octonion"],
    ] {
        let out = qqm(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let bad = fixture("bad_table.json");
    assert_eq!(qqm(&["vandam", "--function", &bad]).status.code(), Some(2));
}
