use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mirror_dce::cli::{parse_config, write_artifacts};
use mirror_dce::circuit::CircuitParams;
use mirror_dce::experiments::{from_long_table, Artifact, CsvTable, SpectrumDataset};
use mirror_dce::trajectories::TrajectoryKind;

fn mirror_dce(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mirror-dce"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env("RUST_LOG", "error")
        .output()
        .unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn config_errors_name_the_field() {
    let cases = [
        ("[circuit]\nZ0 = -5.0\n", "circuit.Z0"),
        ("[circuit]\nfoo = 1.0\n", "foo"),
        ("[trajectory]\nA = 1e19\nfd = 1e10\n", "trajectory.kind"),
        ("[trajectory]\nkind = 'sa'\nfd = 1e10\n", "A"),
        ("[trajectory]\nkind = 'xx'\nA = 1e19\n", "trajectory.kind"),
        ("[trajectory]\nkind = 'sa'\nA = 1e19\nabar = 2e19\n", "exactly one"),
        ("[circuit]\nv = 1.0e8\n[trajectory]\nkind = 'sa'\nA = 1e19\nv = 1.1e8\n", "trajectory.v"),
        ("[physics]\nT = -0.1\n", "physics.T"),
        ("[circuit]\nC_J = 'big'\n", "C_J"),
    ];
    for (text, needle) in cases {
        let err = parse_config(text).expect_err(text).to_string();
        assert!(err.contains(needle), "{text:?}: {err}");
    }
}

#[test]
fn config_defaults_and_resolution() {
    let cfg = parse_config("").unwrap();
    assert_eq!(cfg.circuit, CircuitParams::default());
    let cfg = parse_config("command = 'traj'\n[trajectory]\nkind = 'aua'\nabar = 20e18\nfd = 14.6e9\n").unwrap();
    assert_eq!(cfg.trajectory.kind, Some(TrajectoryKind::Aua));
    let a = cfg.trajectory.accel.unwrap().resolve(TrajectoryKind::Aua, cfg.trajectory.omega_d.unwrap(), cfg.circuit.v);
    assert_eq!(a.unwrap(), 20e18);
}

#[test]
fn params_prints_selected_table() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&mirror_dce(dir.path(), &["params", "--kind", "sa", "--abar", "20e18"]));
    let value = |label: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(label)).unwrap();
        line.split_whitespace().last().unwrap().parse().unwrap()
    };
    assert!((value("omega_d/2pi") - 14.6).abs() < 0.1, "{text}");
    assert!((value("A [m/s^2]") / 13.725e18 - 1.0).abs() < 0.01, "{text}");
}

#[test]
fn reproduce_fig2_writes_fourier_table() {
    let dir = tempfile::tempdir().unwrap();
    ok(&mirror_dce(dir.path(), &["reproduce", "fig2"]));
    let text = fs::read_to_string(dir.path().join("fig2_fourier.csv")).unwrap();
    let t = CsvTable::parse(&text).unwrap();
    let traj = t.column("trajectory").unwrap();
    assert!(t.rows.iter().any(|r| r[traj] == "SA"));
    assert!(t.rows.iter().any(|r| r[traj] == "AUA"));
    assert!(text.starts_with("# mirror-dce v1\n"));
}

#[test]
fn spectrum_without_harmonics_is_dark() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["spectrum", "--kind", "sa", "--A", "13.725e18", "--fd", "14.6e9", "--nmax", "0", "--points", "50"];
    ok(&mirror_dce(dir.path(), &args));
    let d = SpectrumDataset::from_csv(&fs::read_to_string(dir.path().join("spectrum_SA.csv")).unwrap()).unwrap();
    assert_eq!(d.points.len(), 50);
    assert!(d.points.iter().all(|p| p.1 == 0.0));
}

#[test]
fn emitted_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    ok(&mirror_dce(dir.path(), &["spectrum", "--kind", "aua", "--A", "20e18", "--fd", "14.6e9", "--T", "0.025"]));
    let text = fs::read_to_string(dir.path().join("spectrum_AUA.csv")).unwrap();
    let d = SpectrumDataset::from_csv(&text).unwrap();
    assert_eq!(d.to_csv(), text);
    ok(&mirror_dce(dir.path(), &["reproduce", "fig6", "--points", "7", "--long"]));
    let text = fs::read_to_string(dir.path().join("fig6_nout_vs_abar.csv")).unwrap();
    let t = CsvTable::parse(&text).unwrap();
    assert_eq!(t.render(), text);
    assert_eq!(from_long_table(&t).unwrap().len(), 12);
}

#[test]
fn failing_command_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = mirror_dce(dir.path(), &["reproduce", "fig9"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig9"));
    let out = mirror_dce(dir.path(), &["params", "--kind", "sm", "--abar", "1e24"]);
    assert!(!out.status.success());
    // drive above the plasma frequency
    let out = mirror_dce(dir.path(), &["spectrum", "--kind", "sa", "--A", "1e18", "--fd", "38e9", "--nmax", "3"]);
    assert!(!out.status.success());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn partial_outputs_removed() {
    let dir = tempfile::tempdir().unwrap();
    // a directory in the way of the second file makes the rename fail
    fs::create_dir(dir.path().join("b.csv")).unwrap();
    fs::write(dir.path().join("b.csv").join("keep"), "x").unwrap();
    let arts = vec![
        Artifact { name: "a.csv".into(), contents: "1\n".into() },
        Artifact { name: "b.csv".into(), contents: "2\n".into() },
    ];
    assert!(write_artifacts(dir.path(), &arts).is_err());
    assert!(!dir.path().join("a.csv").exists());
    assert!(!dir.path().join(".b.csv.partial").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [a.path(), b.path()] {
        ok(&mirror_dce(dir, &["reproduce", "fig7", "--points", "31"]));
        ok(&mirror_dce(dir, &["traj", "--kind", "sm", "--abar", "9.054e17", "--fd", "18e9"]));
        ok(&mirror_dce(dir, &["flux", "--kind", "sa", "--A", "13.725e18", "--fd", "14.6e9"]));
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 5);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}
