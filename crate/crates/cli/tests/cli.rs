//! End-to-end checks of the binary: artifact layout, exit codes,
//! determinism across thread counts, and config echo round-trips.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn findisp(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_findisp"));
    cmd.current_dir(dir).args(args);
    match threads {
        Some(n) => cmd.env("FINDISP_THREADS", n),
        None => cmd.env_remove("FINDISP_THREADS"),
    };
    cmd.output().expect("spawn findisp")
}

fn read(dir: &Path, rel: &str) -> String {
    fs::read_to_string(dir.join(rel)).unwrap_or_else(|e| panic!("read {rel}: {e}"))
}

#[test]
fn rod_dispersion_example_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let out = findisp(tmp.path(), &["rod-dispersion", "--B", "0.1", "--kappa", "0:6.2832:64"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(tmp.path(), "out/curve.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "kappa,omega,omega_inf,c_g,deviation_pct");
    assert_eq!(lines.len(), 65);
    assert!(tmp.path().join("out/config.resolved.json").exists());
}

#[test]
fn invalid_model_exits_2_and_lists_choices() {
    let tmp = tempfile::tempdir().unwrap();
    let out = findisp(tmp.path(), &["beam-dispersion", "--model", "extensional"], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("conventional") && err.contains("inextensional"), "{err}");
}

#[test]
fn deviation_column_is_monotone() {
    let tmp = tempfile::tempdir().unwrap();
    let out = findisp(
        tmp.path(),
        &["deviation", "--kappa", "3.141593", "--B", "0.02:0.2:10", "--model", "rod"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = read(tmp.path(), "out/curve.csv");
    let dev: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert_eq!(dev.len(), 10);
    assert!(dev.windows(2).all(|w| w[1] > w[0]), "{dev:?}");
}

#[test]
fn artifacts_identical_across_thread_counts() {
    let run = |threads: &str| {
        let tmp = tempfile::tempdir().unwrap();
        let out = findisp(tmp.path(), &["rod-dispersion", "--preset", "fig-axial"], Some(threads));
        assert_eq!(out.status.code(), Some(0));
        let mut names: Vec<String> = fs::read_dir(tmp.path().join("out"))
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        let contents: Vec<String> = names.iter().map(|n| read(tmp.path(), &format!("out/{n}"))).collect();
        (names, contents)
    };
    assert_eq!(run("1"), run("5"));
}

#[test]
fn config_echo_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = findisp(tmp.path(), &["rod-dispersion"], None);
    assert_eq!(out.status.code(), Some(0));
    let echo = tmp.path().join("out/config.resolved.json");
    let out2 = findisp(
        tmp.path(),
        &["rod-dispersion", "--config", echo.to_str().unwrap(), "-o", "second"],
        None,
    );
    assert_eq!(out2.status.code(), Some(0), "{}", String::from_utf8_lossy(&out2.stderr));
    assert_eq!(read(tmp.path(), "out/curve.csv"), read(tmp.path(), "second/curve.csv"));
}

#[test]
fn unknown_config_key_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("cfg.json"), r#"{"kappa": "0:1:4", "wavnumber": 2}"#).unwrap();
    let out = findisp(tmp.path(), &["rod-dispersion", "--config", "cfg.json"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wavnumber"));
}

#[test]
fn validation_failure_leaves_no_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = findisp(tmp.path(), &["rod-dispersion", "--kappa", "5,1,2"], None);
    assert_eq!(out.status.code(), Some(2));
    let left: Vec<_> = match fs::read_dir(tmp.path().join("out")) {
        Ok(it) => it.map(|e| e.unwrap().file_name()).collect(),
        Err(_) => Vec::new(),
    };
    assert!(left.is_empty(), "{left:?}");
}

#[test]
fn solver_limit_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = findisp(
        tmp.path(),
        &["static", "--model", "rod", "--load", "uniform-axial", "--value", "-0.3"],
        None,
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unwritable_output_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("blocked"), "file, not a directory").unwrap();
    let out = findisp(tmp.path(), &["rod-dispersion", "-o", "blocked/sub"], None);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn static_presets_cover_both_beam_models() {
    let tmp = tempfile::tempdir().unwrap();
    let out = findisp(tmp.path(), &["static", "--preset", "fig-rod-static"], None);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "out/static_report.json")).unwrap();
    let tip = report["tip_u_over_L"].as_f64().unwrap();
    assert!((tip - 0.1598).abs() < 5e-4, "{tip}");
    let csv = read(tmp.path(), "out/static.csv");
    assert!(csv.starts_with("s_over_L,u_over_L,v_over_L\n"));

    let out = findisp(tmp.path(), &["static", "--preset", "fig-flex-static", "-o", "flex"], None);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "flex/static_report.json")).unwrap();
    let tip = report["tip_v_over_L"].as_f64().unwrap();
    assert!(tip < 0.0 && tip.abs() < 0.5, "{tip}");
}

#[test]
fn simulate_rod_emits_snapshots_and_extraction() {
    let tmp = tempfile::tempdir().unwrap();
    let out = findisp(
        tmp.path(),
        &["simulate-rod", "--protocol", "initial", "--B", "0.1", "--kappa",
          "3.141592653589793", "--stride", "0.05"],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(tmp.path(), "out/simulation.csv");
    assert!(csv.starts_with("t,s_0,s_1,"));
    let side: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "out/simulation.json")).unwrap();
    let omega = side["extracted"]["omega_measured"].as_f64().unwrap();
    assert!((omega - 3.07).abs() < 0.05, "{omega}");
    assert!(side["energy_drift"].as_f64().unwrap() < 1e-3);
    assert_eq!(side["extraction_error"], serde_json::Value::Null);
}

#[test]
fn unknown_preset_lists_valid_names() {
    let tmp = tempfile::tempdir().unwrap();
    let out = findisp(tmp.path(), &["static", "--preset", "fig-nope"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig-rod-static"));
}
