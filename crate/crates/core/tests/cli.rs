use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_transport-noise"));
    c.env_remove("TRANSPORT_NOISE_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn spectrum_csv_has_schema_and_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.conf",
        "model.g = 0.2\nmodel.n_fock = 5\nspectrum.omega.start = 0.5\nspectrum.omega.stop = 1.5\nspectrum.omega.count = 11\n",
    );
    let out = run(&["spectrum", "--config", &cfg, "--methods", "resolvent,macdonald"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("#schema="));
    assert_eq!(lines[1], "omega,value,method,pair,normalization");
    assert_eq!(lines.len(), 2 + 22);
    let rows: Vec<Vec<&str>> = lines[2..].iter().map(|l| l.split(',').collect()).collect();
    for r in &rows {
        let mantissa = r[1].split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "{}", r[1]);
    }
    for k in 0..11 {
        let a: f64 = rows[k][1].parse().unwrap();
        let b: f64 = rows[k + 11][1].parse().unwrap();
        assert_eq!((rows[k][2], rows[k + 11][2]), ("resolvent", "macdonald"));
        assert!(((a - b) / a).abs() <= 1e-5, "{a} {b}");
    }
}

#[test]
fn output_is_bit_exact_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "grid.conf",
        "model.n_fock = 3\nsweep.axis1.name = g\nsweep.axis1.values = 0, 0.2\nsweep.axis2.name = omega\nsweep.axis2.start = 0.5\nsweep.axis2.stop = 1.5\nsweep.axis2.count = 5\nsweep.quantities = S_ee, F_Q\n",
    );
    let a = run(&["sweep", "--config", &cfg]);
    let b = bin()
        .args(["sweep", "--config", &cfg])
        .env("TRANSPORT_NOISE_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("#schema="));
}

#[test]
fn steady_json_reports_thermal_number_variance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "thermal.conf", "model.temperature = 1\n");
    let out_path = dir.path().join("steady.json");
    let out = run(&["steady", "--config", &cfg, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    let f = v["moments"]["fano_q"].as_f64().unwrap();
    assert!((f - 1.5819767).abs() <= 1e-6, "{f}");
}

#[test]
fn json_config_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"model": {"g": 0.1, "n_fock": 4}, "spectrum": {"omega": {"values": [0.5, 1.0]}}}"#,
    );
    let out = run(&["spectrum", "--config", &cfg, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["values"].as_array().unwrap().len(), 2);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "a.conf", "model.g = 0.1\n\nmodel.gee = 3\n");
    let out = run(&["steady", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let conflict = write(dir.path(), "b.conf", "preset = fig2\nmodel.delta = 0.3\n");
    let out = run(&["sweep", "--config", &conflict]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("one source of truth"));

    let count = write(dir.path(), "c.conf", "sweep.axis1.name = g\nsweep.axis1.start = 0\nsweep.axis1.stop = 1\nsweep.axis1.count = 1\nsweep.quantities = S_ee\n");
    let out = run(&["sweep", "--config", &count]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("counts ≥ 2"));

    assert_eq!(run(&["spectrum", "--preset", "fig2"]).status.code(), Some(2));
    assert_eq!(run(&["steady", "--workers", "0"]).status.code(), Some(2));
    assert_eq!(run(&["steady", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--preset", "fig9"]).status.code(), Some(2));
}

#[test]
fn unconverged_cutoff_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "hot.conf",
        "model.temperature = 2\nmodel.g = 0.3\nsweep.fock_cap = 4\n",
    );
    let out = run(&["steady", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fast_check_passes_on_a_preset() {
    let out = run(&["check", "--preset", "fig2", "--check", "fast"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("thermal_occupation"));
    assert!(text.contains("0 failed"));
}
