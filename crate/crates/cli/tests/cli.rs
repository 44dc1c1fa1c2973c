use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sol3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sol3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn integrate_writes_the_csv_header_and_is_deterministic() {
    let a = sol3(&["integrate", "--theta0", "pi/8", "--max-s", "5"]);
    assert_eq!(code(&a), 0);
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    assert_eq!(text.lines().next(), Some("s,x,y,theta,theta_prime,H,K"));
    assert!(text.lines().count() > 100);
    let b = sol3(&["integrate", "--theta0", "pi/8", "--max-s", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn integrate_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let o = sol3(&[
        "integrate",
        "--H",
        "1",
        "--y0",
        "0.6425",
        "--max-s",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let file = fs::read(&path).unwrap();
    assert_eq!(
        file,
        sol3(&["integrate", "--H", "1", "--y0", "0.6425", "--max-s", "4"]).stdout
    );
    let text = String::from_utf8(file).unwrap();
    for line in text.lines().skip(1) {
        let h: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!((h - 1.0).abs() < 1e-8);
    }
}

#[test]
fn classify_reports_type_b_at_pi_over_8() {
    let o = sol3(&["classify", "--theta0", "pi/8"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["kind"], "TypeB");
    let w = v["slab_width"].as_f64().unwrap();
    assert!((w - 2.0 * 0.7372140283).abs() < 1e-5, "{w}");
}

#[test]
fn shoot_exit_codes() {
    let ok = sol3(&["shoot", "--H", "1"]);
    assert_eq!(code(&ok), 0);
    let v = json(&ok);
    assert_eq!(v["status"], "closed");
    assert!((v["y0_star"].as_f64().unwrap() - 0.6425).abs() < 1e-2);
    for key in ["s1", "residual_x", "residual_y", "iterations"] {
        assert!(!v[key].is_null(), "{key}");
    }

    let bracket = sol3(&["shoot", "--H", "1", "--bracket", "2:3"]);
    assert_eq!(code(&bracket), 2);
    assert_eq!(json(&bracket)["status"], "bracket_failure");

    assert_eq!(code(&sol3(&["shoot", "--H", "0"])), 64);
    assert_eq!(code(&sol3(&["shoot"])), 64);
}

#[test]
fn loose_tolerances_fail_the_closure_certificate() {
    let o = sol3(&[
        "shoot",
        "--H",
        "1",
        "--abs-tol",
        "1e-4",
        "--rel-tol",
        "1e-4",
        "--max-step",
        "0.5",
    ]);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    assert_eq!(v["status"], "non_closing");
    assert!(v["residual_y"].as_f64().unwrap().abs() >= 1e-6);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&sol3(&["frobnicate"])), 64);
    assert_eq!(code(&sol3(&["integrate", "--theta0", "pie"])), 64);
    assert_eq!(code(&sol3(&["integrate", "--system", "willmore"])), 64);
    assert_eq!(code(&sol3(&["mesh", "--curve", "type-i", "--grid", "0:1:0:1:1:4"])), 64);
    assert_eq!(code(&sol3(&["--help"])), 0);
}

#[test]
fn mesh_obj_layout() {
    let o = sol3(&["mesh", "--curve", "type-iii", "--grid", "-1:1:-1:1:5:4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let verts: Vec<Vec<f64>> = text
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| l.split(' ').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(verts.len(), 20);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2 * 4 * 3);
    for v in verts.iter().filter(|v| v[0].abs() > 1e-12) {
        assert!((v[1] / v[0] - (2.0 * v[2]).exp()).abs() < 1e-9);
    }
    let integrated = sol3(&["mesh", "--theta0", "pi/8", "--grid", "-3:3:-1:1:7:3"]);
    assert_eq!(code(&integrated), 0);
}

#[test]
fn verify_passes_with_the_default_seed() {
    let o = sol3(&["verify", "--samples", "100", "--seed", "42"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-6);
    assert_eq!(o.stdout, sol3(&["verify", "--samples", "100", "--seed", "42"]).stdout);
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn sweep_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    write(
        &cfg,
        r#"
jobs = 2

[[run]]
command = "integrate"
theta0 = "pi/8"
max_s = 5.0
out = "a.csv"

[[run]]
command = "classify"
x0 = 1.0
y0 = 2.0
theta0 = "pi/3"
out = "b.json"

[[run]]
command = "mesh"
curve = "flat-circle"
grid = "0:6.283185307179586:-1:1:16:3"
out = "c.obj"
"#,
    );
    let o = sol3(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    for f in ["a.csv", "b.json", "c.obj"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let b: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(b["kind"], "TypeA");

    let first = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(
        code(&sol3(&["sweep", "--config", cfg.to_str().unwrap(), "--jobs", "1"])),
        0
    );
    assert_eq!(first, fs::read(dir.path().join("a.csv")).unwrap());
}

#[test]
fn sweep_reports_the_first_failing_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    write(
        &cfg,
        r#"
[[run]]
command = "shoot"
H = 1.0
bracket = "2:3"
out = "bad.json"

[[run]]
command = "verify"
out = "ok.json"
"#,
    );
    assert_eq!(code(&sol3(&["sweep", "--config", cfg.to_str().unwrap()])), 2);
    assert!(dir.path().join("ok.json").exists());

    write(&cfg, "[[run]]\ncommand = \"integrate\"\nthet0 = 1.0\nout = \"x.csv\"\n");
    assert_eq!(code(&sol3(&["sweep", "--config", cfg.to_str().unwrap()])), 64);
}
