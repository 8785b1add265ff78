use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn fsifeti(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fsifeti"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn strip_timing(mut v: Value) -> Value {
    let o = v.as_object_mut().unwrap();
    o.remove("wall_time_s");
    o.remove("solve_time_s");
    v
}

#[test]
fn cavity_run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = fsifeti(&["cavity", "--lh", "32", "--out", out, "--dump-mesh", "--dump-matrices"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["report.json", "residuals.csv", "interface.csv", "field.csv", "mesh_fluid0.txt", "mesh_beam.txt", "sub0_stiffness.mtx", "frame.mtx"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
    let r = report(dir.path());
    assert!(r["build"].as_str().is_some_and(|s| !s.is_empty()));
    assert!(r["wall_time_s"].as_f64().is_some());
    assert_eq!(r["config"]["freq"], 5.0);
    assert_eq!(r["physical"]["beam"]["E"], 2.1e11);
    let it = r["solver"]["iterations"].as_u64().unwrap();
    assert!((1..=12).contains(&it), "cavity iterations {it}");
    let history = csv_rows(&dir.path().join("residuals.csv"));
    assert_eq!(history.len() as u64, it + 1);

    let mesh = fs::read_to_string(dir.path().join("mesh_fluid0.txt")).unwrap();
    let mut lines = mesh.lines();
    assert_eq!(lines.next(), Some("nodes 96 elements 96"));
    assert_eq!(mesh.lines().count(), 1 + 96 + 96);
}

#[test]
fn direct_and_iterative_interface_files_agree() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, solver) in [(&a, "bicgstab"), (&b, "direct")] {
        let o = fsifeti(&["cavity", "--lh", "32", "--solver", solver, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ra = csv_rows(&a.path().join("interface.csv"));
    let rb = csv_rows(&b.path().join("interface.csv"));
    assert_eq!(ra.len(), rb.len());
    let parse = |r: &[String], i: usize| r[i].parse::<f64>().unwrap();
    let scale = rb.iter().map(|r| parse(r, 4).hypot(parse(r, 5))).fold(0.0, f64::max);
    for (x, y) in ra.iter().zip(&rb) {
        assert_eq!(x[1], y[1]);
        for col in 2..8 {
            assert!((parse(x, col) - parse(y, col)).abs() <= 1e-6 * scale, "column {col}: {} vs {}", x[col], y[col]);
        }
    }
}

#[test]
fn single_threaded_runs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = fsifeti(&["duct", "--ns", "4", "--threads", "1", "--out", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for f in ["residuals.csv", "interface.csv", "field.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
    let (ra, rb) = (strip_timing(report(a.path())), strip_timing(report(b.path())));
    let (mut ca, mut cb) = (ra.clone(), rb.clone());
    ca["config"]["out"] = Value::Null;
    cb["config"]["out"] = Value::Null;
    assert_eq!(ca, cb);
}

#[test]
fn duct_residual_history_trends_down() {
    let dir = tempfile::tempdir().unwrap();
    let o = fsifeti(&["duct", "--ns", "8", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let h: Vec<f64> = csv_rows(&dir.path().join("residuals.csv")).iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(h.len() > 4);
    assert_eq!(h[0], 1.0);
    assert!(*h.last().unwrap() <= 1e-10);
    // Least-squares slope of log10(residual) against the iteration index.
    let n = h.len() as f64;
    let xs: Vec<f64> = (0..h.len()).map(|i| i as f64).collect();
    let ys: Vec<f64> = h.iter().map(|r| r.log10()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!(slope < 0.0);
    let third = h.len() / 3;
    let head: f64 = ys[..third].iter().sum::<f64>() / third as f64;
    let tail: f64 = ys[h.len() - third..].iter().sum::<f64>() / third as f64;
    assert!(tail < head);
    assert!(report(dir.path())["results"]["pressure_relative_l2_error"].as_f64().unwrap() < 0.02);
}

#[test]
fn config_file_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out");
    fs::write(&cfg, format!("# duct run\nbenchmark = duct\nns = 2\nlh = 10\nout = {}\n", out.display())).unwrap();
    let o = fsifeti(&["--config", cfg.to_str().unwrap(), "--ns", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["benchmark"], "duct");
    assert_eq!(r["config"]["ns"], 4);
    assert_eq!(r["model"]["fluid_elements"].as_array().unwrap().len(), 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(fsifeti(&["cavity", "--tol", "-1", "--out", out]).status.code(), Some(1));
    assert_eq!(fsifeti(&["cavity", "--coupling", "glue", "--out", out]).status.code(), Some(1));
    assert_eq!(fsifeti(&["cavity", "--lh", "2", "--out", out]).status.code(), Some(1));
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "lh = 32\nunknown_key = 1\n").unwrap();
    let o = fsifeti(&["--config", bad.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = fsifeti(&["cavity", "--lh", "16", "--max-iter", "1", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(report(dir.path())["converged"], false);
    assert_eq!(fsifeti(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_writes_one_row_per_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let o = fsifeti(&[
        "sweep", "--lh", "16", "--sweep-min", "2", "--sweep-max", "20", "--sweep-points", "4", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[5] == "ok"));
    assert_eq!(rows[0][0], "2e0");
    assert_eq!(rows[3][0], "2e1");
}
