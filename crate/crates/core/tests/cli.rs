use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kneser::Error;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn kneser(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn run_ok(cmd: &str, file: &str, extra: &[&str], out: &Path) {
    let path = scenario(file);
    let mut args = vec![cmd, "--scenario", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = kneser(&args, out);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{cmd} {file}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn csv_column(path: &Path, col: &str) -> Vec<f64> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let idx = lines
        .next()
        .unwrap()
        .split(',')
        .position(|h| h == col)
        .unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn every_command_writes_its_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let small = ["--nodes", "256", "--grid", "8x32"];
    let cases = [
        (
            "extend",
            "circle_identity.json",
            &["extend.csv", "extend.json"][..],
        ),
        ("verify", "ellipse_twist.json", &["verify.json"]),
        ("tfun", "ellipse_twist.json", &["tfun.csv", "tfun.json"]),
        ("qc", "circle_twist.json", &["qc.json"]),
        ("mollify", "kinked_mollify.json", &["mollify.json"]),
        ("probe", "circle_probe.json", &["probe.json"]),
    ];
    for (cmd, file, outputs) in cases {
        let out = dir.path().join(cmd);
        run_ok(cmd, file, &small, &out);
        for name in outputs {
            assert!(out.join(name).is_file(), "{cmd} did not write {name}");
        }
    }
}

#[test]
fn circle_identity_grid_has_unit_jacobian() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(
        "extend",
        "circle_identity.json",
        &["--grid", "16x64"],
        dir.path(),
    );
    let j = csv_column(&dir.path().join("extend.csv"), "jacobian");
    assert_eq!(j.len(), 17 * 64);
    assert!(j.iter().all(|v| (v - 1.0).abs() < 1e-8));
}

#[test]
fn affine_boundary_grid_has_constant_jacobian() {
    let dir = tempfile::tempdir().unwrap();
    run_ok("extend", "affine_boundary.json", &[], dir.path());
    let j = csv_column(&dir.path().join("extend.csv"), "jacobian");
    assert!(j.iter().all(|v| (v - 0.96).abs() < 1e-8));
}

#[test]
fn plateau_grid_jacobian_is_nonnegative() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(
        "extend",
        "circle_plateau.json",
        &["--grid", "16x64"],
        dir.path(),
    );
    let j = csv_column(&dir.path().join("extend.csv"), "jacobian");
    let min = j.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(min >= -1e-9, "min J = {min}");
    assert!(min < 1e-6, "no near-zero Jacobian at the plateau");
}

#[test]
fn tfun_circle_identity_is_one() {
    let dir = tempfile::tempdir().unwrap();
    run_ok("tfun", "circle_identity.json", &[], dir.path());
    let t = csv_column(&dir.path().join("tfun.csv"), "T_value");
    assert_eq!(t.len(), 1024);
    assert!(t.iter().all(|v| (v - 1.0).abs() < 1e-8));
}

#[test]
fn tfun_cross_form_at_2048_nodes() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(
        "tfun",
        "ellipse_twist.json",
        &["--nodes", "2048"],
        dir.path(),
    );
    let r = json(&dir.path().join("tfun.json"));
    assert!(r["cross_form_max"].as_f64().unwrap() <= 1e-5);
    assert!(r["min"].as_f64().unwrap() > 0.0);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for cmd in ["verify", "probe"] {
        run_ok(cmd, "bean_probe.json", &["--nodes", "256"], &a);
        run_ok(cmd, "bean_probe.json", &["--nodes", "256"], &b);
        let name = format!("{cmd}.json");
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap()
        );
    }
}

#[test]
fn spec_errors_exit_with_code_two_and_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"curve":{"kind":"circle","radius":-1}}"#).unwrap();
    let o = kneser(&["verify", "--scenario", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let r = json(&dir.path().join("error.json"));
    assert_eq!(r["exit_code"], 2);
    assert!(r["error"].as_str().unwrap().contains("radius"));

    let good = scenario("circle_identity.json");
    for extra in [["--grid", "8*32"], ["--nodes", "1000"]] {
        let mut args = vec!["tfun", "--scenario", good.to_str().unwrap()];
        args.extend_from_slice(&extra);
        assert_eq!(kneser(&args, dir.path()).status.code(), Some(2));
    }
    let missing = dir.path().join("missing.json");
    let o = kneser(&["qc", "--scenario", missing.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_guards_map_to_exit_code_three() {
    assert_eq!(Error::NumericalGuard("x".into()).exit_code(), 3);
    assert_eq!(Error::NonDini("x".into()).exit_code(), 3);
    assert_eq!(Error::InvalidSpec("x".into()).exit_code(), 2);
}

#[test]
fn fold_witness_reports_collision_pairs() {
    let dir = tempfile::tempdir().unwrap();
    run_ok("verify", "bean_fold.json", &[], dir.path());
    let r = json(&dir.path().join("verify.json"));
    assert_eq!(r["verdict"], "fold-detected");
    assert!(r["t_min"].as_f64().unwrap() < -1e-3);
    let pairs = r["injectivity"]["pairs"].as_array().unwrap();
    assert!(!pairs.is_empty());
}
