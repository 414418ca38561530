use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phonon-casimir"))
        .args(args)
        .arg("--no-timestamp")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV document, split into fields.
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn half_space_profile_follows_inverse_fourth_power() {
    let o = run(&[
        "profile",
        "--geometry",
        "half-space",
        "--sweep",
        "z",
        "--values",
        "1e-9,2e-9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 2);
    assert_eq!(num(&r[1][1]), num(&r[0][1]) / 16.0);
}

#[test]
fn slab_profile_is_mirror_symmetric() {
    let o = run(&[
        "profile",
        "--geometry",
        "slab",
        "--a",
        "1e-8",
        "--sweep",
        "z",
        "--values",
        "2e-9,8e-9",
        "--method",
        "images",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    let (left, right) = (num(&r[0][2]), num(&r[1][2]));
    assert!(((left - right) / left).abs() < 1e-9);
}

#[test]
fn cubic_torus_profile_scales_by_sixteen() {
    let o = run(&[
        "profile",
        "--geometry",
        "torus",
        "--sweep",
        "l",
        "--values",
        "1e-8,2e-8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert!((num(&r[0][3]) / num(&r[1][3]) - 16.0).abs() < 1e-12);
}

#[test]
fn profile_rejects_bad_sweeps() {
    let o = run(&[
        "profile",
        "--geometry",
        "half-space",
        "--sweep",
        "a",
        "--values",
        "1e-9,2e-9",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "profile",
        "--geometry",
        "half-space",
        "--sweep",
        "z",
        "--values",
        "1e-9",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_check_verdicts() {
    let o = run(&[
        "oracle-check",
        "--geometry",
        "half-space",
        "--z",
        "1e-9",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["summary"]["verdict"]["verdict"], "consistent");

    let o = run(&[
        "oracle-check",
        "--geometry",
        "slab",
        "--a",
        "1e-8",
        "--z",
        "3e-9",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["summary"]["verdict"]["verdict"], "constant_factor");
    let factor = v["summary"]["verdict"]["factor"].as_f64().unwrap();
    assert!((1.0 / factor - PI * PI).abs() < 1e-6);

    let alpha = (2.0 * PI / 3.0).to_string();
    let o = run(&[
        "oracle-check",
        "--geometry",
        "cone",
        "--alpha",
        &alpha,
        "--r",
        "1e-9",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["summary"]["verdict"]["verdict"], "consistent");
    for row in v["rows"].as_array().unwrap() {
        assert!((row["ratio_printed"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn oracle_check_free_field() {
    let o = run(&[
        "oracle-check",
        "--geometry",
        "free-field",
        "--r",
        "1e-8",
        "--dt",
        "3e-12",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# verdict: consistent"));
}

#[test]
fn inadmissible_geometry_exits_with_config_error() {
    let o = run(&[
        "oracle-check",
        "--geometry",
        "wedge",
        "--alpha",
        "1",
        "--r",
        "1e-9",
        "--theta",
        "0.3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["error"]["exit_code"], 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("pi/n"));
}

#[test]
fn scattering_ratio_and_convention() {
    let vac = run(&["scattering", "--wavelength", "350e-9", "--format", "json"]);
    let med = run(&[
        "scattering",
        "--wavelength",
        "350e-9",
        "--omega-in-medium",
        "--format",
        "json",
    ]);
    assert_eq!(vac.status.code(), Some(0));
    let (v, m) = (json(&vac), json(&med));
    assert_eq!(v["meta"]["omega_convention"], "vacuum");
    assert_eq!(m["meta"]["omega_convention"], "in_medium");
    let rv = v["rows"][0]["ratio_zp_thermal"].as_f64().unwrap();
    let rm = m["rows"][0]["ratio_zp_thermal"].as_f64().unwrap();
    assert!((0.0035..=0.0065).contains(&rv));
    assert!((rm / rv - 1.4).abs() < 1e-12);

    let forward = run(&["scattering", "--wavelength", "350e-9", "--theta", "0"]);
    assert_eq!(num(&rows(&forward)[0][4]), 0.0);
}

#[test]
fn zero_temperature_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("media.json");
    std::fs::write(
        &path,
        r#"{"media": {"cold": {"rho0": 145.0, "c_sound": 238.0, "eta": 1.026, "depsilon": 0.1, "temperature": 0.0}}}"#,
    )
    .unwrap();
    let o = run(&[
        "scattering",
        "--wavelength",
        "350e-9",
        "--config",
        path.to_str().unwrap(),
        "--medium",
        "cold",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_medium_and_bad_tolerance_are_config_errors() {
    assert_eq!(run(&["--medium", "vacuum", "media", "list"]).status.code(), Some(2));
    assert_eq!(
        run(&["casimir-force", "--a", "1e-6", "--tol", "-1"]).status.code(),
        Some(2)
    );
}

#[test]
fn media_validate_reports_entries_and_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(
        &good,
        r#"{"media": {"helium": {"rho0": 145.0, "c_sound": 238.0, "eta": 1.026, "depsilon": 0.1, "temperature": 1.2}}}"#,
    )
    .unwrap();
    let o = run(&["media", "validate", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&o)[0][0], "helium");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"media": {"x": {"rho0": -1.0}}}"#).unwrap();
    assert_eq!(
        run(&["media", "validate", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let listed = run(&["media", "list", "--config", good.to_str().unwrap()]);
    let names: Vec<String> = rows(&listed).into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(names, ["helium", "water_293K"]);
}

#[test]
fn casimir_force_against_reference() {
    let o = run(&["casimir-force", "--a", "1e-6"]);
    let r = rows(&o);
    assert!((num(&r[0][1]) / 3.209197049284467e-9 - 1.0).abs() < 1e-12);
}

#[test]
fn squeezed_profile_spans_the_envelope() {
    let o = run(&[
        "squeezed-profile",
        "--k",
        "2e6",
        "--volume",
        "1e-15",
        "--r",
        "0.5",
        "--points",
        "4",
        "--format",
        "json",
    ]);
    let v = json(&o);
    let lo: f64 = v["meta"]["envelope_min"].as_str().unwrap().parse().unwrap();
    let hi: f64 = v["meta"]["envelope_max"].as_str().unwrap().parse().unwrap();
    let values: Vec<f64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values[0], lo);
    assert_eq!(values[2], hi);
}

#[test]
fn parabola_scan_fits_the_scaling_law() {
    let o = run(&[
        "parabola-scan",
        "--a",
        "1e-5,1e-4,1e-3",
        "--b",
        "0.5,1,2",
        "--gamma",
        "0.2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let fit = &v["summary"][0];
    assert!((fit["slope_a"].as_f64().unwrap() + 3.0).abs() < 0.05);
    assert!((fit["slope_b"].as_f64().unwrap() + 1.0).abs() < 0.05);
    assert!(fit["C"].as_f64().unwrap() > 0.0);
    assert!(v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["value"].as_f64().unwrap() < 0.0));
}

#[test]
fn parabola_scan_failure_keeps_partial_rows() {
    // a/b = 0.2 is far outside the scaling regime, so the fit is rejected.
    let o = run(&["parabola-scan", "--a", "1e-4,0.2"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(3), "{text}");
    assert_eq!(rows(&o).len(), 2);
    assert!(text.contains("a/b = 2e-1 is not small"));
    assert!(text
        .lines()
        .last()
        .unwrap()
        .starts_with("# error: exit 3 (numerical): fit rejected"));

    // A narrow mirror sends no ray pair through the point.
    let o = run(&["parabola-scan", "--a", "1e-4", "--aperture", "0.05", "--format", "json"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["error"]["kind"], "numerical");
}

#[test]
fn output_is_deterministic_and_files_match_stdout() {
    let args = [
        "profile",
        "--geometry",
        "wedge",
        "--alpha",
        "1.5707963267948966",
        "--r",
        "1e-8",
        "--sweep",
        "theta",
        "--from",
        "0.1",
        "--to",
        "1.4",
        "--points",
        "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let c = run(&with_out);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);

    let stamped = Command::new(env!("CARGO_BIN_EXE_phonon-casimir"))
        .args(args)
        .output()
        .unwrap();
    assert!(stdout(&stamped).lines().any(|l| l.starts_with("# timestamp: ")));
}
