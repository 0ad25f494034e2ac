// Copyright 2026 The lightcone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lightcone::benchmarks::brick_wall;
use lightcone::format::serialize_circuit;
use lightcone::linalg::gates;
use serde_json::Value;

const BRICK_WALL_Z2: f64 = 0.6649279794398211;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn lightcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lightcone"))
        .args(args)
        .env_remove("LIGHTCONE_SEED")
        .output()
        .expect("binary runs")
}

fn with_inputs<'a>(cmd: &'a str, circuit: &'a str, obs: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd, "--circuit", circuit, "--observable", obs];
    v.extend_from_slice(rest);
    v
}

fn brick() -> (String, String) {
    (
        data("brick_wall.circ").display().to_string(),
        data("z2.obs").display().to_string(),
    )
}

fn json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn validator() -> jsonschema::Validator {
    let text =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_schema_valid(v: &Value) {
    let errors: Vec<String> = validator()
        .iter_errors(v)
        .map(|e| format!("{e} at {}", e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn oracle_reports_the_benchmark_value() {
    let (c, o) = brick();
    let v = json(&lightcone(&with_inputs("oracle", &c, &o, &["--no-timestamp"])));
    assert_schema_valid(&v);
    assert!((v["value"].as_f64().unwrap() - BRICK_WALL_Z2).abs() < 1e-12);
    assert_eq!(v["terms"][0]["cone_size"], 4);
}

#[test]
fn trivial_causal_estimate_is_one() {
    let c = data("trivial.circ").display().to_string();
    let o = data("z0.obs").display().to_string();
    let v = json(&lightcone(&with_inputs(
        "estimate-causal",
        &c,
        &o,
        &["--epsilon", "0.1"],
    )));
    assert_schema_valid(&v);
    assert_eq!(v["estimate"], 1.0);
    assert_eq!(v["shots"]["k_tot"], 300);
    assert!(v["timing"]["wall_time_seconds"].is_number());
}

#[test]
fn every_report_kind_validates() {
    let (c, o) = brick();
    let runs: Vec<Vec<&str>> = vec![
        with_inputs("estimate-causal", &c, &o, &["--epsilon", "0.1", "--seed", "3"]),
        with_inputs("estimate-algebraic", &c, &o, &["--epsilon", "0.3", "--seed", "3"]),
        with_inputs(
            "estimate-algebraic",
            &c,
            &o,
            &["--epsilon", "0.5", "--hadamard-mode", "circuit"],
        ),
        with_inputs("analyze", &c, &o, &[]),
        with_inputs(
            "repeat-study",
            &c,
            &o,
            &["--epsilon", "0.2", "--estimator", "causal", "--repetitions", "20"],
        ),
        with_inputs(
            "repeat-study",
            &c,
            &o,
            &["--epsilon", "0.5", "--estimator", "algebraic", "--repetitions", "5"],
        ),
    ];
    for args in runs {
        let v = json(&lightcone(&args));
        assert_schema_valid(&v);
    }
    let mut bad = json(&lightcone(&with_inputs("oracle", &c, &o, &[])));
    bad["value"] = Value::String("x".into());
    assert!(!validator().is_valid(&bad));
}

#[test]
fn all_to_all_analysis_takes_beta() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_temp(
        &dir,
        "a2a.circ",
        "layout all_to_all N=6 d=1\nlayer\ninter ZZ(0.4) q0 q3\nlayer\ninter XX(0.2) q3 q5\n",
    );
    let o = write_temp(&dir, "z.obs", "term 1 Zq0\n");
    let v = json(&lightcone(&with_inputs("analyze", &c, &o, &["--beta", "1.5"])));
    assert_schema_valid(&v);
    assert!(v["branching_fit"].is_object());
    assert!(v["cut_count"].is_null());
    let out = lightcone(&with_inputs("analyze", &c, &o, &[]));
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn study_meets_the_success_target() {
    let (c, o) = brick();
    for est in ["causal", "algebraic"] {
        let v = json(&lightcone(&with_inputs(
            "repeat-study",
            &c,
            &o,
            &[
                "--epsilon",
                "0.05",
                "--estimator",
                est,
                "--repetitions",
                "100",
                "--seed",
                "1",
            ],
        )));
        assert_eq!(v["repetitions"], 100);
        assert!(v["success_fraction"].as_f64().unwrap() >= 0.66, "{est}");
        let estimates = v["estimates"].as_array().unwrap();
        assert_eq!(estimates.len(), 100);
    }
}

#[test]
fn reports_are_byte_identical_for_equal_seeds() {
    let (c, o) = brick();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.json").display().to_string();
    for cmd in ["estimate-causal", "estimate-algebraic"] {
        let args = with_inputs(cmd, &c, &o, &["--epsilon", "0.3", "--seed", "17", "--no-timestamp"]);
        let a = lightcone(&args);
        let b = lightcone(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        let mut to_file = args.clone();
        to_file.extend(["--out", file.as_str()]);
        let f = lightcone(&to_file);
        assert!(f.stdout.is_empty());
        assert_eq!(std::fs::read(&file).unwrap(), a.stdout);
    }
    let study = with_inputs(
        "repeat-study",
        &c,
        &o,
        &[
            "--epsilon",
            "0.2",
            "--estimator",
            "causal",
            "--repetitions",
            "50",
            "--no-timestamp",
        ],
    );
    assert_eq!(lightcone(&study).stdout, lightcone(&study).stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let (c, o) = brick();
    let args = with_inputs("estimate-causal", &c, &o, &["--epsilon", "0.2", "--no-timestamp"]);
    let env = Command::new(env!("CARGO_BIN_EXE_lightcone"))
        .args(&args)
        .env("LIGHTCONE_SEED", "9")
        .output()
        .unwrap();
    let mut explicit = args.clone();
    explicit.extend(["--seed", "9"]);
    assert_eq!(env.stdout, lightcone(&explicit).stdout);
    assert_ne!(env.stdout, lightcone(&args).stdout);
}

#[test]
fn csv_output_has_a_header_row() {
    let (c, o) = brick();
    let out = lightcone(&with_inputs(
        "estimate-causal",
        &c,
        &o,
        &["--epsilon", "0.2", "--format", "csv"],
    ));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("method,seed,epsilon,estimate"));
    assert_eq!(text.lines().count(), 2);
    let out = lightcone(&with_inputs("analyze", &c, &o, &["--format", "csv"]));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn exit_codes_follow_error_classes() {
    let (c, o) = brick();
    let dir = tempfile::tempdir().unwrap();

    let broken = write_temp(
        &dir,
        "broken.circ",
        "layout lattice D=1 extents=5 d=1\nlayer\ninter ZZ(oops) q0 q1\n",
    );
    let out = lightcone(&with_inputs("oracle", &broken, &o, &[]));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let outside = write_temp(&dir, "far.obs", "term 1 Zq40\n");
    assert_eq!(
        lightcone(&with_inputs("oracle", &c, &outside, &[])).status.code(),
        Some(2)
    );

    let wide = brick_wall(13, 2, 12, 0.5, |_, _| Some(gates::ry(0.3))).unwrap();
    let wide = write_temp(&dir, "wide.circ", &serialize_circuit(&wide));
    let mid = write_temp(&dir, "mid.obs", "term 1 Zq12\n");
    let out = lightcone(&with_inputs("estimate-causal", &wide, &mid, &["--epsilon", "0.1"]));
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        lightcone(&with_inputs("oracle", &wide, &mid, &[])).status.code(),
        Some(3)
    );

    let out = lightcone(&with_inputs(
        "estimate-algebraic",
        &c,
        &o,
        &["--epsilon", "0.1", "--task-budget", "10"],
    ));
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    assert_eq!(
        lightcone(&with_inputs("estimate-causal", &c, &o, &["--epsilon", "0"]))
            .status
            .code(),
        Some(5)
    );
    assert_eq!(
        lightcone(&with_inputs(
            "estimate-causal",
            &c,
            &o,
            &["--epsilon", "0.1", "--delta", "2"]
        ))
        .status
        .code(),
        Some(5)
    );
    let missing = dir.path().join("nope.circ").display().to_string();
    assert_eq!(
        lightcone(&with_inputs("oracle", &missing, &o, &[])).status.code(),
        Some(5)
    );
    assert_eq!(lightcone(&["estimate-causal", "--bogus"]).status.code(), Some(5));
    assert_eq!(lightcone(&["--help"]).status.code(), Some(0));
}
