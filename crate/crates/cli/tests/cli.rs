//! End-to-end tests of the `bjpc` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use bjpc::dataset::scheme1;
use bjpc::region::{balanced_split, lambda_sum_bounds};
use bjpc::Probability;
use serde_json::Value;

fn bjpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bjpc"))
        .args(args)
        .env_remove("BJPC_SEED")
        .output()
        .unwrap()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn simulate_is_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        let out = bjpc(&[
            "--seed",
            seed,
            "--out",
            p,
            "simulate",
            "--m",
            "12",
            "--k",
            "6",
            "--removals",
            "1,0,2,0,0",
            "--params",
            "1.5,0.5,1",
        ]);
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("a.json", "7");
    let b = run("b.json", "7");
    let c = run("c.json", "8");
    assert_eq!(a, b);
    assert_ne!(a, c);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["w"].as_array().unwrap().len(), 6);
}

#[test]
fn simulated_dataset_can_be_fitted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let p = path.to_str().unwrap();
    let sim = bjpc(&[
        "--out", p, "simulate", "--m", "30", "--k", "20", "--params", "1,0.5,1",
    ]);
    assert!(
        sim.status.success(),
        "{}",
        String::from_utf8_lossy(&sim.stderr)
    );
    let v = json(&bjpc(&["--json", "fit", p, "--method", "mle"]));
    assert!(v["mle"]["alpha"].as_f64().unwrap() > 0.0);
}

#[test]
fn fit_reproduces_scheme1_estimates() {
    let v = json(&bjpc(&["--json", "fit", &data("scheme1.json")]));
    assert!(rel(v["mle"]["alpha"].as_f64().unwrap(), 0.983459) < 1e-3);
    assert!(rel(v["mle"]["lambda1"].as_f64().unwrap(), 0.017541) < 1e-3);
    assert!(rel(v["amle"]["alpha"].as_f64().unwrap(), 0.982218) < 1e-3);
    assert!(rel(v["amle"]["lambda2"].as_f64().unwrap(), 0.017622) < 1e-3);
}

#[test]
fn csv_input_matches_json_input() {
    let dir = tempfile::tempdir().unwrap();
    let s = scheme1();
    let mut csv = String::from("w,z\n");
    for (w, z) in s.times().iter().zip(s.indicators()) {
        csv.push_str(&format!("{w},{}\n", u8::from(*z)));
    }
    let path = dir.path().join("s1.csv");
    std::fs::write(&path, csv).unwrap();
    let removals: Vec<String> = s
        .scheme()
        .removals()
        .iter()
        .map(|r| r.to_string())
        .collect();
    let from_csv = json(&bjpc(&[
        "--json",
        "fit",
        path.to_str().unwrap(),
        "--m",
        &s.scheme().m().to_string(),
        "--k",
        &s.scheme().k().to_string(),
        "--removals",
        &removals.join(","),
    ]));
    let from_json = json(&bjpc(&["--json", "fit", &data("scheme1.json")]));
    assert_eq!(from_csv, from_json);

    let missing = bjpc(&["fit", path.to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn region_boundary_matches_library_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("boundary.csv");
    let out = bjpc(&[
        "--json",
        "region",
        &data("scheme1.json"),
        "--gamma",
        "0.1",
        "--emit-boundary",
        path.to_str().unwrap(),
        "--alpha",
        "1.0",
    ]);
    let v = json(&out);
    let volume = v["region"]["volume"].as_f64().unwrap();
    assert!(volume > 0.0);

    let s = scheme1();
    let (_, g2) = balanced_split(Probability::new(0.1).unwrap());
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["alpha", "lower", "upper"]);
    let mut rows = 0;
    let mut saw_one = false;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let a: f64 = rec[0].parse().unwrap();
        let (lo, hi) = lambda_sum_bounds(&s, a, g2).unwrap();
        assert!(rel(rec[1].parse().unwrap(), lo) < 1e-12);
        assert!(rel(rec[2].parse().unwrap(), hi) < 1e-12);
        saw_one |= a == 1.0;
        rows += 1;
    }
    assert!(rows >= 4 && saw_one);
}

#[test]
fn ci_reports_both_methods() {
    let v = json(&bjpc(&[
        "--json",
        "ci",
        &data("scheme2.json"),
        "--boot-reps",
        "200",
    ]));
    let text = v.to_string();
    assert!(
        text.contains("asymptotic") && text.contains("bootstrap"),
        "{text}"
    );
}

#[test]
fn ocs_ranks_every_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rank.csv");
    let out = bjpc(&[
        "--out",
        path.to_str().unwrap(),
        "ocs",
        "--m",
        "6",
        "--k",
        "3",
        "--design-params",
        "1,0.5,1",
        "--reps",
        "50",
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let vols: Vec<f64> = reader
        .records()
        .map(|r| r.unwrap()[4].parse().unwrap())
        .collect();
    // C(m - 1, k - 1) = 10 admissible plans for m = 6, k = 3.
    assert_eq!(vols.len(), 10);
    assert!(vols.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn reproduce_point_table_passes() {
    let v = json(&bjpc(&["--json", "reproduce", "10"]));
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["pass"] == Value::Bool(true)));
}

#[test]
fn exit_codes_distinguish_failures() {
    assert_eq!(bjpc(&["fit"]).status.code(), Some(2));
    assert_eq!(
        bjpc(&["fit", "/nonexistent/data.json"]).status.code(),
        Some(1)
    );
    let bad = bjpc(&[
        "simulate",
        "--m",
        "5",
        "--k",
        "4",
        "--removals",
        "3,3,3",
        "--params",
        "1,1,1",
    ]);
    assert_eq!(bad.status.code(), Some(3));
    let bad_params = bjpc(&[
        "simulate",
        "--m",
        "5",
        "--k",
        "3",
        "--removals",
        "0,0",
        "--params",
        "1,1",
    ]);
    assert_eq!(bad_params.status.code(), Some(2));
}
