use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cvpoly::analysis::bare_polynomial_fidelity;
use cvpoly::gates::{taylor_factorize, DiagonalUnitary};
use cvpoly::states::{make_fock, Grid};

fn cvpoly(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvpoly"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("CVPOLY_OUT")
        .output()
        .expect("binary runs")
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap()).collect()
}

fn header(path: &Path) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.headers().unwrap().iter().map(str::to_owned).collect()
}

#[test]
fn bare_writes_two_tables_with_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let out = cvpoly(&["bare", "--nu", "0.1,0.2,0.5"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for family in ["fock", "coherent"] {
        let csv = dir.path().join(format!("bare_{family}.csv"));
        assert_eq!(header(&csv), ["family", "x", "nu", "fidelity"]);
        assert_eq!(rows(&csv).len(), 33);
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("bare_{family}.manifest.json"))).unwrap())
                .unwrap();
        assert_eq!(manifest["deterministic"], true);
        assert_eq!(manifest["command"], "bare");
        assert_eq!(manifest["rows"], 33);
    }
    let first = &rows(&dir.path().join("bare_fock.csv"))[0];
    assert_eq!(&first[0], "fock");
    assert_eq!(first[1].parse::<f64>().unwrap(), 0.0);
    assert_eq!(first[2].parse::<f64>().unwrap(), 0.1);
    let u = DiagonalUnitary::cubic_phase(0.1);
    let plan = taylor_factorize(&u, 1).unwrap();
    let direct = bare_polynomial_fidelity(&u, &plan, &make_fock(0, Grid::default()).unwrap()).unwrap();
    assert_eq!(first[3].parse::<f64>().unwrap(), direct);
}

#[test]
fn zero_strength_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    assert!(cvpoly(&["bare", "--nu", "0"], dir.path()).status.success());
    for family in ["fock", "coherent"] {
        for r in rows(&dir.path().join(format!("bare_{family}.csv"))) {
            let f: f64 = r[3].parse().unwrap();
            assert!((f - 1.0).abs() < 1e-12, "{family} {}: {f}", &r[1]);
        }
    }
}

#[test]
fn reruns_are_byte_identical_across_worker_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(cvpoly(&["method2", "--db", "5,10", "--jobs", "1"], a.path())
        .status
        .success());
    assert!(cvpoly(&["method2", "--db", "5,10", "--jobs", "4"], b.path())
        .status
        .success());
    for name in ["method2_fock.csv", "method2_coherent.csv", "method2_fock.manifest.json"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn manifest_replays_its_run() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(cvpoly(&["method1", "--db", "1,5", "--grid", "-16,16,2048"], a.path())
        .status
        .success());
    let manifest = a.path().join("method1_fock.manifest.json");
    assert!(cvpoly(&["method1", "--config", manifest.to_str().unwrap()], b.path())
        .status
        .success());
    for name in ["method1_fock.csv", "method1_coherent.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn flags_beat_config_beats_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"nu": [0.2], "grid": "-16,16,2048"}"#).unwrap();
    let from_file = dir.path().join("file");
    assert!(cvpoly(&["bare", "--config", cfg.to_str().unwrap()], &from_file)
        .status
        .success());
    let r = rows(&from_file.join("bare_fock.csv"));
    assert_eq!(r.len(), 11);
    assert!(r.iter().all(|x| x[2].parse::<f64>().unwrap() == 0.2));

    let from_flag = dir.path().join("flag");
    assert!(
        cvpoly(&["bare", "--config", cfg.to_str().unwrap(), "--nu", "0.5"], &from_flag)
            .status
            .success()
    );
    let r = rows(&from_flag.join("bare_fock.csv"));
    assert!(r.iter().all(|x| x[2].parse::<f64>().unwrap() == 0.5));
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(from_flag.join("bare_fock.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["parameters"]["grid"], "-16,16,2048");
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("env-out");
    let out = Command::new(env!("CARGO_BIN_EXE_cvpoly"))
        .args(["bare", "--nu", "0.1"])
        .env("CVPOLY_OUT", &target)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("bare_fock.csv").exists());
    assert!(!dir.path().join("cvpoly-out").exists());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"colour": 3}"#).unwrap();
    let cases: [&[&str]; 5] = [
        &["bare", "--grid", "1,2"],
        &["bare", "--grid", "-10,10,1000"],
        &["method1", "--nu", "0.1,0.2"],
        &["bare", "--config", cfg.to_str().unwrap()],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(cvpoly(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn singular_ancilla_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = cvpoly(&["method1", "--db", "0"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k^2 - 2"));
}

#[test]
fn verify_passes_then_fails_at_zero_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let ok = cvpoly(&["verify", "--db", "5"], dir.path());
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stdout));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 7);

    let bad = cvpoly(&["verify", "--db", "5", "--tolerance", "0"], dir.path());
    assert_eq!(bad.status.code(), Some(4));
    let report: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(report["pass"], false);
    assert!(dir.path().join("verify_report.json").exists());
}

#[test]
fn postselect_columns_and_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = cvpoly(&["method1-postselect", "--delta", "0.1", "--nodes", "4"], dir.path());
    assert!(out.status.success());
    let fock = dir.path().join("method1_postselect_fock.csv");
    assert_eq!(
        header(&fock),
        ["family", "x", "db", "delta", "fidelity", "success_prob"]
    );
    let r = rows(&fock);
    assert_eq!(r.len(), 1);
    assert_eq!(&r[0][1], "1");
    assert_eq!(rows(&dir.path().join("method1_postselect_coherent.csv")).len(), 11);
}
