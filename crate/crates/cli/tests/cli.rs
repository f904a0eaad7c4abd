use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmsoule"))
        .args(args)
        .env_remove("CMSOULE_PRECISION")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn field_info_reports_the_embeddings() {
    let out = run(&["field-info", "--field", "1", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pi = 2+i"));
    assert!(text.contains("i1(i) = 3, i2(i) = 2"));
    assert!(text.contains("transversal size 4"));

    let out = run(&["field-info", "--field", "1", "--p", "5", "--json"]);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pi"], serde_json::json!({"a": 2, "b": 1, "d": 1}));
    assert_eq!(v["i1_omega"], 3);
    assert_eq!(v["i2_omega"], 2);
}

#[test]
fn inert_and_unsupported_inputs() {
    let out = run(&["field-info", "--field", "1", "--p", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inert"));
    // (-163 / 41) = 1: 41 = N(ω) splits
    assert_eq!(
        run(&["field-info", "--field", "163", "--p", "41"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["field-info", "--field", "163", "--p", "59"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["field-info", "--field", "5", "--p", "7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["field-info", "--field", "1"]).status.code(), Some(2));
}

#[test]
fn scan_ranges_and_files() {
    let v = json(&run(&["scan", "--field", "1", "--max", "4"]));
    assert_eq!(v["records"], serde_json::json!([]));
    let v = json(&run(&["scan", "--field", "1", "--max", "100"]));
    let ps: Vec<u64> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["p"].as_u64().unwrap())
        .collect();
    assert_eq!(ps, [5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97]);
    assert_eq!(v["counter_examples"], serde_json::json!([]));

    let dir = tempfile::tempdir().unwrap();
    let js = dir.path().join("scan.json");
    let csv = dir.path().join("scan.csv");
    let out = run(&[
        "scan",
        "--field",
        "2",
        "--max",
        "3000",
        "--threads",
        "3",
        "--out",
        js.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count();
    assert_eq!(rows, 1 + v["records"].as_array().unwrap().len());
    assert_eq!(
        run(&["scan", "--field", "1", "--max", "100", "--threads", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_precision_floor_and_environment() {
    assert_eq!(run(&["verify", "--precision", "64"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_cmsoule"))
        .args(["verify", "--field", "3", "--suite", "distribution"])
        .env("CMSOULE_PRECISION", "200")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["precision_bits"], 200);
    assert_eq!(v["all_pass"], true);
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn soule_verdicts_and_errors() {
    let v = json(&run(&["soule", "--field", "1", "--p", "5", "--m", "5,5"]));
    assert_eq!(v["verdict"], "not_surjective");
    let v = json(&run(&["soule", "--field", "1", "--p", "5", "--m", "2,4"]));
    assert_eq!(v["verdict"], "trivially_zero");

    let out = run(&[
        "soule", "--field", "1", "--p", "5", "--m", "3,3", "--ideal", "2+w",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("choose another ideal"));
    assert_eq!(
        run(&["soule", "--field", "1", "--p", "7", "--m", "5,5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["soule", "--field", "1", "--p", "5", "--m", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn soule_uses_class_number_facts_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("facts.toml");
    std::fs::write(
        &cfg,
        "[[facts]]\nd = 1\np = 5\nlevel = \"full\"\ndivisible_by_p = false\n",
    )
    .unwrap();
    let base = ["soule", "--field", "1", "--p", "5", "--m", "4,4"];
    assert_eq!(json(&run(&base))["verdict"], "inconclusive");
    let mut args = base.to_vec();
    args.extend(["--config", cfg.to_str().unwrap()]);
    assert_eq!(json(&run(&args))["verdict"], "surjective");
    std::fs::write(&cfg, "facts = 3").unwrap();
    assert_eq!(run(&args).status.code(), Some(2));
}

#[test]
fn soule_with_explicit_ideal_records_every_trial() {
    let v = json(&run(&[
        "soule", "--field", "1", "--p", "5", "--m", "3,3", "--ideal", "3+2w", "--trials", "5",
    ]));
    assert_eq!(v["verdict"], "surjective");
    let test = v["evidence"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["kind"] == "power_test")
        .unwrap();
    assert_eq!(test["records"].as_array().unwrap().len(), 5);
    assert_eq!(test["outcome"], "non_power");
}
