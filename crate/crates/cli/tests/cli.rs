use std::path::Path;
use std::process::{Command, Output};

fn swe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swe")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Config of a built-in case with `edits` applied as whole-line replacements.
fn config(dir: &Path, case: &str, edits: &[(&str, &str)]) -> std::path::PathBuf {
    let mut text = stdout(&swe(&["show-config", "--case", case]));
    for (from, to) in edits {
        assert!(text.contains(from), "no `{from}` in config");
        text = text.replace(from, to);
    }
    let path = dir.join(format!("{case}.cfg"));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn lists_every_builtin_case() {
    let o = swe(&["list-cases"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for name in swe_core::cases::case_names() {
        assert!(out.contains(&name), "{name}");
    }
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(swe(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(swe(&["run"]).status.code(), Some(1));
    assert_eq!(swe(&["run", "--config", "x", "--mode", "wp9"]).status.code(), Some(1));
    let o = swe(&["riemann-compare", "--case", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown case `nope`"));
    assert!(swe(&["--help"]).status.success());
}

#[test]
fn run_writes_snapshots_and_gauges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = config(
        dir.path(),
        "rp1",
        &[
            ("end_time = 0.075", "end_time = 0.01\ngauges = mid:0.0:0.01, right:0.25:0.01"),
            ("every = none", "every = 4"),
            ("vtk = false", "vtk = true"),
        ],
    );
    let o = swe(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("t = 0.010000"));
    let vtk: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "vtk"))
        .collect();
    assert!(vtk.len() >= 3);
    let gauges = std::fs::read_to_string(out.join("rp1_gauges.csv")).unwrap();
    let mut lines = gauges.lines();
    assert_eq!(lines.next(), Some("t,mid,right"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, [0.0, 1.0, 2.0]);
}

#[test]
fn mode_override_forces_implicit_theta() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "rp1", &[("theta = 1.0", "theta = 0.6"), ("end_time = 0.075", "end_time = 0.002")]);
    let o = swe(&["run", "--config", cfg.to_str().unwrap(), "--mode", "wp3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("theta 0.6 -> 1"));
    assert!(stderr(&o).contains("scheme wp3"));
}

#[test]
fn invalid_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "rp1", &[("theta = 1.0", "theta = 1.5")]);
    let o = swe(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("theta"));
    let o = swe(&["run", "--config", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solver_failure_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "rp1", &[("cg_maxiter = 5000", "cg_maxiter = 1")]);
    let o = swe(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("did not converge"));
}

#[test]
fn mesh_gen_writes_a_readable_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("box.mesh");
    let o = swe(&[
        "mesh-gen", "--nx", "4", "--ny", "3", "--bounds", "-2,0,-1,1", "--sides", "outflow", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let data = swe_core::mesh::read_mesh(&path).unwrap();
    assert_eq!(data.vertices.len(), 20);
    assert_eq!(data.triangles.len(), 24);
    assert_eq!(data.boundary.len(), 14);
    assert!(data.boundary.iter().all(|s| s.tag == swe_core::mesh::BoundaryTag::Outflow));
    let bad = swe(&["mesh-gen", "--nx", "0", "--ny", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn riemann_compare_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cut.csv");
    let o = swe(&["riemann-compare", "--case", "rp1", "--t", "0.01", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("x,h,u,h_exact,u_exact\n"));
    assert!(csv.lines().count() > 200);
    let o = swe(&["riemann-compare", "--case", "vortex"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn convergence_and_wellbalance_report() {
    let o = swe(&["convergence", "--levels", "16,32"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().nth(1).unwrap().trim_start().starts_with("16"));

    let o = swe(&["wellbalance", "--steps", "10"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("q identically zero: true"));
    assert_eq!(swe(&["wellbalance", "--case", "rp1"]).status.code(), Some(1));
}
