use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_isowork"));
    c.env_remove("ISOWORK_TOL");
    c
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn assert_schema(v: &Value) {
    assert_eq!(v["schema_version"], 1);
    assert!(v.get("inputs_echo").is_some(), "{v}");
    assert!(v.get("results").is_some(), "{v}");
}

#[test]
fn work_on_the_one_sixth_scenario() {
    let path = scenario("case_iv.json");
    let out = run(&["work", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0.166666666667"), "{text}");
    assert!(text.contains("case_iv"), "{text}");

    let (code, v) = json(&["work", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_schema(&v);
    assert!((v["results"]["value"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-10);
    assert_eq!(v["results"]["method"], "case_iv");
    assert!(v["results"]["cross_check_delta"].as_f64().is_some());
}

#[test]
fn collinear_scenario_is_case_i_with_zero_work() {
    let path = scenario("collinear.json");
    let (code, v) = json(&["classify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_schema(&v);
    assert_eq!(v["results"]["case"], "case_i");
    assert_eq!(v["results"]["force_residual"], 0.0);
    assert_eq!(v["results"]["curve_residual"], 0.0);
    let (code, v) = json(&["work", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], 0.0);
    assert_eq!(v["results"]["method"], "case_i");
}

#[test]
fn case_iii_scenario_matches_its_closed_form() {
    // z' = -2t/(1+2t), z(0) = 0, so z = ln(1+2t)/2 - t and
    // A = ∫₀¹ (1 + z)(1 + 2t) dt = 2 + ∫₀¹ (1+2t) z dt
    let (code, v) = json(&["work", scenario("case_iii.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["method"], "case_iii");
    // ∫₀¹ (1+2t)(ln(1+2t)/2 − t) dt = (9 ln 3 − 4)/8 − 7/6
    let expect = 2.0 + (9.0 * 3f64.ln() - 4.0) / 8.0 - 7.0 / 6.0;
    let got = v["results"]["value"].as_f64().unwrap();
    assert!((got - expect).abs() < 1e-10, "{got} vs {expect}");
}

#[test]
fn case_ii_scenario() {
    let (code, v) = json(&["work", scenario("case_ii.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["method"], "case_ii");
    // P + R = 3 + 5 at (1, 2) and z goes from 0 to 1
    assert!((v["results"]["value"].as_f64().unwrap() - 8.0).abs() < 1e-12);
}

#[test]
fn completed_scenario_runs_and_echo_round_trips() {
    let path = scenario("case_iv_completed.json");
    let (code, v) = json(&["work", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["method"], "case_iv");
    let echoed = serde_json::to_string(&v["inputs_echo"]["scenario"]).unwrap();
    let reparsed = isowork::cli::Scenario::from_json(&echoed).unwrap();
    let original =
        isowork::cli::Scenario::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reparsed, original);
}

#[test]
fn non_isotropic_force() {
    let path = scenario("not_isotropic.json");
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NotIsotropic"), "{}", stdout(&out));
    let (_, v) = json(&["classify", path.to_str().unwrap()]);
    assert_eq!(v["results"]["status"], "not_isotropic");
    assert!(v["results"]["force_residual"].as_f64().unwrap() > 0.5);

    let out = run(&["work", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not isotropic"), "{}", stderr(&out));
}

#[test]
fn malformed_expression_exits_2_with_offset() {
    let path = scenario("malformed.json");
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("force.P") && err.contains("byte 4"), "{err}");
    let (code, v) = json(&["work", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_schema(&v);
    assert_eq!(v["error"]["context"], "force.P");
}

#[test]
fn missing_file_and_bad_json_exit_2() {
    assert_eq!(
        run(&["work", "/nonexistent/scenario.json"]).status.code(),
        Some(2)
    );
    let dir = std::env::temp_dir().join(format!("isowork-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"force": {"P": "1"}, "curve": {"x": "t", "y": "t", "alpha": 0, "beta": 1}}"#,
    )
    .unwrap();
    let out = run(&["work", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("R"), "{}", stderr(&out));
}

#[test]
fn flags_override_file_fields() {
    let path = scenario("case_iv.json");
    // The integrand is constant, so the work scales with the interval length.
    let (code, v) = json(&["work", path.to_str().unwrap(), "--beta", "3"]);
    assert_eq!(code, 0);
    assert!((v["results"]["value"].as_f64().unwrap() - 3.0 / 6.0).abs() < 1e-10);
    assert_eq!(v["inputs_echo"]["scenario"]["curve"]["beta"], 3.0);
    let (_, v) = json(&["work", path.to_str().unwrap(), "--alpha", "-1"]);
    assert!((v["results"]["value"].as_f64().unwrap() - 2.0 / 6.0).abs() < 1e-10);
}

#[test]
fn tolerance_sources() {
    let path = scenario("case_iv.json");
    let out = bin()
        .args(["--json", "work", path.to_str().unwrap()])
        .env("ISOWORK_TOL", "1e-7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["inputs_echo"]["scenario"]["tol"], 1e-7);
    let out = bin()
        .args(["--json", "work", path.to_str().unwrap(), "--tol", "1e-9"])
        .env("ISOWORK_TOL", "1e-7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["inputs_echo"]["scenario"]["tol"], 1e-9);
    let out = bin()
        .args(["work", path.to_str().unwrap()])
        .env("ISOWORK_TOL", "fast")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["work", path.to_str().unwrap(), "--tol", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn skew_frame_classifies_but_does_not_compute_work() {
    let path = scenario("skew_frame.json");
    let (code, v) = json(&["classify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["case"], Value::Null);
    assert_eq!(
        v["results"]["samples"][0]["force_class"]["tag"],
        "space_like"
    );
    assert_eq!(
        run(&["work", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn plane_case_b() {
    let phi = (-1.0f64 / 3.0).acos().to_string();
    let out = run(&["plane", "--phi", &phi]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("case          B"), "{text}");
    assert!(text.contains("1.41421356237"), "{text}");
}

#[test]
fn plane_cross_work() {
    let phi = std::f64::consts::FRAC_PI_3.to_string();
    let (code, v) = json(&[
        "plane", "--phi", &phi, "--p", "1", "--source", "c2", "--target", "c1", "--alpha", "0",
        "--beta", "1",
    ]);
    assert_eq!(code, 0);
    assert_schema(&v);
    assert_eq!(v["results"]["case"], "C");
    assert!((v["results"]["work"]["value"].as_f64().unwrap() - 10.0).abs() < 1e-12);
    let (_, v) = json(&[
        "plane", "--phi", &phi, "--p", "1", "--source", "c1", "--target", "c1", "--alpha", "0",
        "--beta", "1",
    ]);
    assert_eq!(v["results"]["work"]["value"], 0.0);
}

#[test]
fn plane_no_isotropic_directions() {
    let out = run(&["plane", "--phi", "2.05"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no isotropic directions"));
    let out = run(&[
        "plane", "--phi", "2.05", "--p", "1", "--source", "c1", "--target", "c2", "--alpha", "0",
        "--beta", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plane_right_angle() {
    let phi = std::f64::consts::FRAC_PI_2.to_string();
    let (code, v) = json(&[
        "plane", "--phi", &phi, "--p", "x+y", "--source", "c1", "--target", "c2", "--alpha", "0",
        "--beta", "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["case"], "D");
    assert!((v["results"]["work"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-14);
    assert_eq!(v["results"]["iso_directions"][1]["vertical"], true);
}

#[test]
fn plane_rejects_out_of_range_phi() {
    for phi in ["0", "2.1", "-1"] {
        let out = run(&["plane", "--phi", phi]);
        assert_eq!(out.status.code(), Some(2), "phi {phi}");
    }
    // --source needs its companions
    assert_eq!(
        run(&["plane", "--phi", "1", "--source", "c1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn table1_rows() {
    let (code, v) = json(&["table1", "--p", "1", "--alpha", "0", "--beta", "1"]);
    assert_eq!(code, 0);
    assert_schema(&v);
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let kinds: Vec<&str> = rows
        .iter()
        .map(|r| r["work"]["kind"].as_str().unwrap())
        .collect();
    assert_eq!(
        kinds,
        ["absent", "zero", "zero", "zero", "value", "value", "value", "value"]
    );
    assert!((rows[4]["work"]["value"].as_f64().unwrap() - 10.0).abs() < 1e-12);
    assert_eq!(rows[6]["work"]["value"], 1.0);

    let text = stdout(&run(&["table1", "--p", "x", "--alpha", "0", "--beta", "2"]));
    assert!(text.contains("no is. curves"), "{text}");
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn verify_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("checks passed"));
    let (code, v) = json(&["verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["failed"], 0);
}

#[test]
fn verify_reports_a_perturbed_identity() {
    use clap::Parser;
    use isowork::cli::{run_with_suite, Cli};
    use isowork::verify::Suite;
    let suite = Suite {
        discriminant: |c| (1.0 + c) * (1.0 + 3.1 * c),
        ..Suite::default()
    };
    let out = run_with_suite(Cli::parse_from(["isowork", "verify"]), None, &suite);
    assert_eq!(out.code, 1);
    assert!(
        out.stdout.contains("failed: discriminant identity"),
        "{}",
        out.stdout
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["table1", "--p", "1"]).status.code(), Some(2));
}
