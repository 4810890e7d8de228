use std::fs;
use std::path::Path;
use std::process::Command;

use dimer::io::{printed, read_csv, read_json};
use dimer::scenario::{run_scenario, Plan, Preset};

fn dimer(args: &[&str], cwd: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dimer"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

#[test]
fn preset_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a.csv", "b.csv"] {
        let o = dimer(
            &["--preset", "fig-rabi", "--steps", "3000", "--out", out],
            dir.path(),
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        fs::read(dir.path().join("a.summary.json")).unwrap(),
        fs::read(dir.path().join("b.summary.json")).unwrap()
    );
}

#[test]
fn csv_matches_in_memory_records() {
    let dir = tempfile::tempdir().unwrap();
    let o = dimer(
        &[
            "--preset", "fig-rabi", "--n", "40", "--steps", "3000", "--out", "s.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let back = read_csv(fs::File::open(dir.path().join("s.csv")).unwrap()).unwrap();

    let Plan::Single(mut spec) = Preset::FigRabi.plan(40).unwrap() else {
        unreachable!()
    };
    spec.steps = 3000;
    let result = run_scenario(&spec).unwrap();
    assert_eq!(back.len(), result.series.len());
    for (a, b) in result.series.iter().zip(&back) {
        assert_eq!(printed(a.t), b.t);
        assert_eq!(printed(a.imbalance), b.imbalance);
        assert_eq!(printed(a.variance), b.variance);
        assert_eq!(printed(a.entanglement_bits), b.entanglement_bits);
        assert_eq!(printed(a.energy), b.energy);
    }
    // Summary on stdout parses and carries the revival time.
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let t_cr = summary["collapse_revival"]["t_cr"].as_f64().unwrap();
    assert!((t_cr - 4.0 * std::f64::consts::PI).abs() < 0.05 * 4.0 * std::f64::consts::PI);
}

#[test]
fn json_document_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = dimer(
        &[
            "--n",
            "6",
            "--k",
            "0.5",
            "--ej",
            "1",
            "--initial",
            "cat",
            "--t-max",
            "5",
            "--steps",
            "700",
            "--format",
            "json",
            "--out",
            "r.json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let raw: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    for key in ["spec", "summary", "series"] {
        assert!(raw.get(key).is_some(), "missing {key}");
    }
    assert_eq!(raw["spec"]["initial"], "cat");
    assert_eq!(raw["spec"]["config"]["n_total"], 6);
    let doc = read_json(fs::File::open(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(doc.series.len(), 700);
    let direct = run_scenario(&doc.spec).unwrap();
    assert_eq!(direct.series, doc.series);
}

#[test]
fn empty_system_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = dimer(
        &["--n", "0", "--initial", "fock:0,0", "--out", "zero.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_csv(fs::File::open(dir.path().join("zero.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    let r = rows[0];
    assert_eq!(
        [
            r.imbalance,
            r.imbalance_scaled,
            r.variance,
            r.entanglement_bits,
            r.energy
        ],
        [0.0; 5]
    );
}

#[test]
fn bad_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["--initial", "fock:1,x"][..],
        &["--preset", "no-such-preset"][..],
        &["--n", "10", "--initial", "fock:3,3"][..],
        &["--steps", "1"][..],
        &["--t-max", "-2"][..],
    ] {
        let o = dimer(args, dir.path());
        assert!(!o.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
}

#[test]
fn degenerate_sweep_equals_single_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = dimer(
        &[
            "--n",
            "30",
            "--ratio",
            "0.001",
            "--initial",
            "fock:30,0",
            "--t-max",
            "10",
            "--steps",
            "800",
            "--out",
            "single.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    // A repeated identical ratio turns the run into a two-cell sweep.
    let o = dimer(
        &[
            "--n",
            "30",
            "--ratio",
            "0.001",
            "--ratio",
            "0.001",
            "--initial",
            "fock:30,0",
            "--t-max",
            "10",
            "--steps",
            "800",
            "--out",
            "sw",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let single = fs::read(dir.path().join("single.csv")).unwrap();
    let cells: Vec<_> = fs::read_dir(dir.path().join("sw"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv") && !p.ends_with("summary.csv"))
        .collect();
    assert_eq!(cells.len(), 2);
    for cell in cells {
        assert_eq!(fs::read(cell).unwrap(), single);
    }
}

#[test]
fn balanced_sweep_stays_flat() {
    let dir = tempfile::tempdir().unwrap();
    let o = dimer(
        &[
            "--n",
            "50",
            "--ratio",
            "0.0004",
            "--ratio",
            "0.02",
            "--ratio",
            "1",
            "--initial",
            "fock:25,25",
            "--t-max",
            "20",
            "--steps",
            "1000",
            "--out",
            "flat",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(dir.path().join("flat/summary.csv")).unwrap();
    assert_eq!(table.lines().count(), 4);
    for entry in fs::read_dir(dir.path().join("flat")).unwrap() {
        let p = entry.unwrap().path();
        if p.ends_with("summary.csv") || p.extension().is_none_or(|e| e != "csv") {
            continue;
        }
        for r in read_csv(fs::File::open(&p).unwrap()).unwrap() {
            assert!(
                r.imbalance.abs() <= 1e-9,
                "{}: {}",
                p.display(),
                r.imbalance
            );
        }
    }
}

#[test]
fn preset_listing() {
    let dir = tempfile::tempdir().unwrap();
    let o = dimer(&["--list-presets"], dir.path());
    let listed = String::from_utf8(o.stdout).unwrap();
    for p in Preset::ALL {
        assert!(listed.lines().any(|l| l == p.name()));
    }
}
