use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lyndon-bar"))
        .args(args)
        .env_remove("LYNDON_BAR_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn lyndon_lines_in_order() {
    let o = run(&["lyndon", "--max-length", "4", "--format", "lines"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n0001\n001\n0011\n01\n011\n0111\n1\n");
}

#[test]
fn lyndon_json_is_an_array() {
    let v = json(&["lyndon", "--max-length", "3"]);
    assert_eq!(v, serde_json::json!(["0", "001", "01", "011", "1"]));
}

#[test]
fn alpha_csv_in_weight_two() {
    let o = run(&["coeffs", "--family", "alpha", "--max-weight", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "W,U,V,value\n01,0,1,1\n");
}

#[test]
fn coefficient_json_uses_rational_strings() {
    for family in ["alpha", "beta", "gamma", "a", "b", "ap", "bp"] {
        let v = json(&["coeffs", "--family", family, "--max-weight", "4"]);
        for row in v.as_array().unwrap() {
            for key in ["W", "U", "V", "value"] {
                assert!(row[key].is_string(), "{family}: {row}");
            }
        }
    }
}

#[test]
fn cobracket_of_t01_in_both_bases() {
    let v = json(&["cobracket", "T0:01", "--basis", "t01"]);
    assert_eq!(v["wedge"], serde_json::json!([{ "left": "T0:1", "right": "T1:0", "coeff": "-1" }]));
    let v = json(&["cobracket", "Tx:01", "--basis", "x1"]);
    let terms = v["wedge"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
}

#[test]
fn model_dump_has_generators_and_differential() {
    let v = json(&["model", "--space", "x", "--max-weight", "3"]);
    let gens = v["generators"].as_array().unwrap();
    assert!(gens.iter().any(|g| g["name"] == "L0_01" && g["degree"] == 1 && g["weight"] == 2));
    assert!(v["differential"]["L0_01"].is_array());
    for space in ["a1", "point", "geom"] {
        json(&["model", "--space", space, "--max-weight", "3"]);
    }
}

#[test]
fn trees_are_counted_by_catalan_numbers() {
    for (n, c) in [(1, 1), (2, 1), (3, 2), (4, 5), (5, 14)] {
        let v = json(&["trees", "--leaves", &n.to_string()]);
        assert_eq!(v.as_array().unwrap().len(), c);
    }
}

#[test]
fn lift_with_check_passes() {
    let v = json(&["lift", "011", "--variant", "diff", "--method", "oracle", "--check"]);
    assert_eq!(v["report"]["path"], "oracle");
    assert!(v["report"]["checks"].as_object().unwrap().values().all(|b| b == true));
    assert!(!v["element"].as_array().unwrap().is_empty());
}

#[test]
fn claim_request_reports_its_closedness() {
    let v = json(&["lift", "01", "--method", "claim"]);
    assert_eq!(v["report"]["requested"], "claim");
    assert!(v["report"]["claim_closed"].is_boolean());
}

#[test]
fn verify_small_suite_passes_and_is_deterministic() {
    let args = ["verify", "--suite", "bar", "--max-weight", "3", "--samples", "10"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 42);
    for row in v["rows"].as_array().unwrap() {
        assert!(row.get("check").is_some() && row.get("status").is_some() && row.get("witness").is_some());
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lyndon-bar"))
        .args(["verify", "--suite", "signs", "--max-weight", "2"])
        .env("LYNDON_BAR_SEED", "7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("lyndon-bar-cli-{}.txt", std::process::id()));
    let o = run(&["lyndon", "--max-length", "2", "--format", "lines", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "0\n01\n1\n");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["frobnicate"],
        vec!["lyndon", "--max-length", "9"],
        vec!["cobracket", "T9:01"],
        vec!["lift", "10"],
        vec!["verify", "--suite", "everything"],
        vec!["coeffs", "--family", "delta", "--max-weight", "3"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn weight_cap_can_be_lifted() {
    let o = run(&["lyndon", "--max-length", "9", "--no-weight-cap", "--format", "lines"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() > 100);
}
