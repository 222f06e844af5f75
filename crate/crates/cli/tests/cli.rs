//! End-to-end runs of the compiled binary: worked examples with known
//! spectra, output reproducibility, and the exit code contract.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sturm-rand"));
    cmd.env_remove("STURM_RAND_THREADS");
    cmd
}

fn model(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let out = cmd.output().expect("spawn binary");
    (
        out.status.code().expect("exit code"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn solve_reproduces_the_free_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solve.json");
    let (code, _, stderr) = run(bin()
        .arg("solve")
        .args(["--model".as_ref(), model("free.json").as_os_str()])
        .args(["--window", "0,10"])
        .args(["--out".as_ref(), out.as_os_str()]));
    assert_eq!(code, 0, "stderr: {stderr}");

    let doc = json(&out);
    assert_eq!(doc["command"], "solve");
    assert_eq!(doc["config"]["seed"], 0);
    let values: Vec<f64> = doc["result"]["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    for (got, want) in values.iter().zip([1.0, 4.0, 9.0]) {
        assert!((got - want).abs() < 1e-7, "{got} vs {want}");
    }
}

#[test]
fn coupling_set_of_the_constant_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("coupling.json");
    let (code, _, stderr) = run(bin()
        .arg("coupling")
        .args(["--model".as_ref(), model("single-bump.json").as_os_str()])
        .args(["--coord", "0", "--energy", "2", "--window", "-20,5"])
        .args(["--out".as_ref(), out.as_os_str()]));
    assert_eq!(code, 0, "stderr: {stderr}");

    let doc = json(&out);
    let roots: Vec<f64> = doc["result"]["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_f64().unwrap())
        .collect();
    assert_eq!(roots.len(), 4);
    for (got, want) in roots.iter().zip([-14.0, -7.0, -2.0, 1.0]) {
        assert!((got - want).abs() < 1e-7, "{got} vs {want}");
    }
}

#[test]
fn sample_is_deterministic_in_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let (code, _, _) = run(bin()
            .arg("sample")
            .args(["--model".as_ref(), model("anderson.json").as_os_str()])
            .args(["--seed", "42"])
            .args(["--out".as_ref(), out.as_os_str()]));
        assert_eq!(code, 0);
    }
    let (mut da, mut db) = (json(&a), json(&b));
    assert!(da["timestamp"].is_u64());
    da.as_object_mut().unwrap().remove("timestamp");
    db.as_object_mut().unwrap().remove("timestamp");
    assert_eq!(da, db);
    assert_eq!(da["result"]["seed"], 42);
    assert_eq!(da["result"]["values"].as_object().unwrap().len(), 6);
}

#[test]
fn self_control_experiment_always_coincides() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("exp.json");
    let csv = dir.path().join("trials.csv");
    let (code, _, stderr) = run(bin()
        .arg("experiment")
        .args(["--model".as_ref(), model("anderson.json").as_os_str()])
        .args(["--comparison", "self_control", "--trials", "10", "--seed", "7"])
        .args(["--csv".as_ref(), csv.as_os_str()])
        .args(["--out".as_ref(), out.as_os_str()]));
    assert_eq!(code, 0, "stderr: {stderr}");

    let doc = json(&out);
    assert_eq!(doc["result"]["succeeded"], 10);
    assert_eq!(
        doc["result"]["coincidence_rate"],
        serde_json::json!([1.0, 1.0, 1.0, 1.0])
    );

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial,seed,min_gap,coinc_1e-2,coinc_1e-3,coinc_1e-4,coinc_1e-5"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for (i, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], i.to_string());
        assert_eq!(cols[2], "0");
        assert_eq!(&cols[3..], ["1", "1", "1", "1"]);
    }
}

#[test]
fn emitted_results_parse_back_into_domain_types() {
    let dir = tempfile::tempdir().unwrap();
    let m = model("single-bump.json");
    let paths = [
        dir.path().join("solve.json"),
        dir.path().join("sample.json"),
        dir.path().join("coupling.json"),
        dir.path().join("exp.json"),
    ];
    let argsets: [&[&str]; 4] = [
        &["solve", "--window", "0,10"],
        &["sample", "--seed", "9"],
        &["coupling", "--coord", "0", "--energy", "2", "--window", "-20,5"],
        &["experiment", "--trials", "3"],
    ];
    for (args, out) in argsets.iter().zip(&paths) {
        let (code, _, stderr) = run(bin()
            .args(*args)
            .args(["--model".as_ref(), m.as_os_str()])
            .args(["--out".as_ref(), out.as_os_str()]));
        assert_eq!(code, 0, "{args:?}: {stderr}");
    }

    // Deserializing and reserializing the result field must be lossless.
    fn roundtrip<T: serde::de::DeserializeOwned + serde::Serialize>(path: &Path) {
        let result = json(path)["result"].clone();
        let parsed: T = serde_json::from_value(result.clone()).expect("parse back");
        assert_eq!(serde_json::to_value(&parsed).unwrap(), result);
    }
    roundtrip::<sturm_rand::SpectrumWindow<f64>>(&paths[0]);
    roundtrip::<sturm_rand::OmegaSample<f64>>(&paths[1]);
    roundtrip::<sturm_rand::CouplingSetResult<f64>>(&paths[2]);
    roundtrip::<sturm_rand::ExperimentReport<f64>>(&paths[3]);
}

#[test]
fn misspelled_model_field_is_named_in_the_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let mut doc = json(&model("free.json"));
    let bump = doc["bumps"][0].as_object_mut().unwrap();
    let support = bump.remove("support").unwrap();
    bump.insert("suport".into(), support);
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();

    let (code, _, stderr) =
        run(bin().arg("solve").args(["--model".as_ref(), bad.as_os_str()]));
    assert_eq!(code, 1);
    assert!(stderr.contains("suport"), "stderr: {stderr}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, _, stderr) = run(bin()
        .arg("solve")
        .args(["--model".as_ref(), model("free.json").as_os_str()])
        .arg("--frobnicate"));
    assert_eq!(code, 1);
    assert!(stderr.contains("--frobnicate"), "stderr: {stderr}");

    let (code, _, _) = run(bin().arg("--help"));
    assert_eq!(code, 0);
}

#[test]
fn thread_count_never_changes_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("t1.json"), dir.path().join("t4.json"));
    for (threads, out) in [("1", &a), ("4", &b)] {
        let (code, _, stderr) = run(bin()
            .arg("experiment")
            .args(["--model".as_ref(), model("anderson.json").as_os_str()])
            .args(["--comparison", "subinterval", "--sub-window", "-1,3"])
            .args(["--trials", "12", "--seed", "11"])
            .args(["--out".as_ref(), out.as_os_str()])
            .env("STURM_RAND_THREADS", threads));
        assert_eq!(code, 0, "stderr: {stderr}");
    }
    let (mut da, mut db) = (json(&a), json(&b));
    da.as_object_mut().unwrap().remove("timestamp");
    db.as_object_mut().unwrap().remove("timestamp");
    assert_eq!(da, db);
}

#[test]
fn csv_demands_the_standard_epsilon_grid() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trials.csv");
    let (code, _, stderr) = run(bin()
        .arg("experiment")
        .args(["--model".as_ref(), model("free.json").as_os_str()])
        .args(["--trials", "2", "--eps", "1e-2,1e-3"])
        .args(["--csv".as_ref(), csv.as_os_str()]));
    assert_eq!(code, 1);
    assert!(stderr.contains("standard epsilon grid"), "stderr: {stderr}");
    assert!(!csv.exists());
}
