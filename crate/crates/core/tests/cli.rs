use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn walgebra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walgebra"))
        .args(args)
        .output()
        .unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn check_golden(name: &str, args: &[&str]) {
    let path = golden(name);
    let mut full = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--golden", p]);
    let out = walgebra(&full);
    assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    // and the printed form is byte-identical
    let printed = walgebra(args);
    assert_eq!(printed.stdout, std::fs::read(&path).unwrap(), "{name}");
}

#[test]
fn golden_sl2_principal_finite_is_zero() {
    check_golden("sl2_principal_finite.json", &["finite-bracket", "--algebra", "sl:2"]);
}

#[test]
fn golden_sl3_minimal_finite() {
    check_golden(
        "sl3_minimal_finite.tex",
        &[
            "finite-bracket",
            "--algebra",
            "sl:3",
            "--partition",
            "2,1",
            "--format",
            "latex",
        ],
    );
}

#[test]
fn golden_sl2_affine_pencil() {
    check_golden("sl2_principal_affine.json", &["affine-bracket", "--algebra", "sl:2"]);
    check_golden(
        "sl2_principal_affine.tex",
        &["affine-bracket", "--algebra", "sl:2", "--format", "latex"],
    );
}

#[test]
fn golden_zero_nilpotent_is_lie_poisson() {
    check_golden(
        "sl2_zero_finite.tex",
        &[
            "finite-bracket",
            "--algebra",
            "sl:2",
            "--partition",
            "1,1",
            "--format",
            "latex",
        ],
    );
}

#[test]
fn golden_kdv_hierarchy() {
    check_golden(
        "sl2_hierarchy.tex",
        &["hierarchy", "--algebra", "sl:2", "--depth", "3", "--format", "latex"],
    );
}

#[test]
fn golden_mismatch_and_missing_file() {
    let other = golden("sl2_zero_finite.tex");
    let out = walgebra(&[
        "finite-bracket",
        "--algebra",
        "sl:2",
        "--golden",
        other.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let missing = golden("does_not_exist.json");
    let out = walgebra(&[
        "finite-bracket",
        "--algebra",
        "sl:2",
        "--golden",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn info_reports_the_grading() {
    let out = walgebra(&["info", "--algebra", "sl:3", "--partition", "2,1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["dim"], 8);
    assert_eq!(v["g_f"].as_array().unwrap().len(), 4);
    assert_eq!(v["f_is_zero"], false);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = [
        "verify",
        "--algebra",
        "sl:3",
        "--partition",
        "2,1",
        "--samples",
        "3",
        "--degree",
        "2",
        "--seed",
        "7",
    ];
    let a = walgebra(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let b = walgebra(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["info", "--algebra", "sl:3", "--partition", "2,2"][..],
        &["info", "--algebra", "so:3"],
        &["info", "--algebra", "sl:2", "--s", "1,2"],
        &["info", "--algebra", "sl:2", "--s", "0,1,0"],
        &["hierarchy", "--algebra", "sl:3", "--partition", "2,1"],
        &["info"],
        &["frobnicate"],
    ] {
        let out = walgebra(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(&path, r#"{"algebra": "sl:3", "partition": [2, 1], "format": "latex"}"#).unwrap();
    let p = path.to_str().unwrap();
    let out = walgebra(&["finite-bracket", "--config", p]);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, std::fs::read(golden("sl3_minimal_finite.tex")).unwrap());
    let out = walgebra(&["finite-bracket", "--config", p, "--format", "json"]);
    assert_eq!(stdout_json(&out)["table"]["generators"].as_array().unwrap().len(), 4);

    std::fs::write(&path, r#"{"algebra": "sl:3", "colour": "red"}"#).unwrap();
    assert_eq!(code(&walgebra(&["info", "--config", p])), 2);
}

#[test]
fn algebra_from_structure_constants_file() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("sl2.json");
    std::fs::write(
        &alg,
        r#"{"dim": 3, "labels": ["e", "h", "f"],
            "brackets": [[0, 2, 1, 1], [1, 0, 0, 2], [1, 2, 2, -2]],
            "gram": [[0, 0, 1], [0, 2, 0], [1, 0, 0]]}"#,
    )
    .unwrap();
    let job = dir.path().join("job.json");
    let cfg = format!(
        r#"{{"algebra": {{"file": {:?}}}, "triple": {{"e": [1, 0, 0], "x": [0, "1/2", 0], "f": [0, 0, 1]}}}}"#,
        alg.to_str().unwrap()
    );
    std::fs::write(&job, cfg).unwrap();
    let out = walgebra(&["finite-bracket", "--config", job.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(out.stdout, std::fs::read(golden("sl2_principal_finite.json")).unwrap());

    let out = walgebra(&["info", "--algebra-file", alg.to_str().unwrap(), "--partition", "2"]);
    assert_eq!(code(&out), 2);
    std::fs::write(
        &alg,
        r#"{"dim": 2, "brackets": [[0, 1, 0, 1]], "gram": [[1, 0], [0, 1]]}"#,
    )
    .unwrap();
    let out = walgebra(&["info", "--config", job.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn info_examples() {
    let v = stdout_json(&walgebra(&["info", "--algebra", "sl:3", "--partition", "2,1"]));
    assert_eq!(v["n_dim"], 2);
    let v = stdout_json(&walgebra(&["info", "--algebra", "sl:2"]));
    let degrees: Vec<&str> = v["grading"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["degree"].as_str().unwrap())
        .collect();
    assert_eq!(degrees, ["-1", "0", "1"]);
    let v = stdout_json(&walgebra(&["info", "--algebra", "sl:2", "--partition", "1,1"]));
    assert_eq!(v["f_is_zero"], true);
    assert_eq!(v["n_dim"], 0);
}

#[test]
fn hierarchy_depths() {
    let out = walgebra(&["hierarchy", "--algebra", "sl:2", "--depth", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["hierarchy"].as_array().unwrap().len(), 0);
    let out = walgebra(&["hierarchy", "--algebra", "sl:3", "--depth", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["hierarchy"].as_array().unwrap().len(), 2);
}
