//! End-to-end checks of the compiled binary: exit codes, output files,
//! flag overrides, and byte-identical reruns.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swiptlink"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn validate_mode_passes_on_reference_config() {
    let out = bin()
        .arg("--config")
        .arg(configs().join("reference.conf"))
        .arg("--mode")
        .arg("validate")
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        out.status.success(),
        "validate failed:\n{stdout}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 8);
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn missing_config_is_a_clean_error() {
    let out = bin()
        .arg("--config")
        .arg("/nonexistent/path.conf")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn broken_config_is_a_clean_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "[system]\nN_t = sixty-four\nP_t = 1\n").unwrap();
    let out = bin().arg("--config").arg(&path).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn sweep_writes_csv_with_metadata_and_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.conf");
    std::fs::write(
        &config,
        "[system]\nP_t = 2.8876040e6\n[tx]\nN_g = 24\n[sweep]\nvariable = rho\nvalues = 0.25,0.75\ncurve_variable = theta_g\ncurve_values = 0.75\n[run]\nmode = sweep\ntrials = 10\nseed = 3\n",
    )
    .unwrap();

    let run = |out: &Path| {
        let status = bin()
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out.join("sweep.csv")).unwrap()
    };
    let a = run(&dir.path().join("a"));
    let b = run(&dir.path().join("b"));
    assert_eq!(a, b, "reruns must be byte-identical");

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    let meta = lines.next().unwrap();
    assert!(meta.starts_with("# config_hash="));
    assert!(meta.contains("seed=3") && meta.contains("trials=10") && meta.contains("version="));
    assert_eq!(
        lines.next().unwrap(),
        "rho,theta_g,mean_Rs_u,mean_Rs_g,P_o_u,P_o_g,mean_E_u,mean_E_g,Rs_sum_bound,trials,seed"
    );
    assert_eq!(text.lines().count(), 2 + 2); // metadata + header + 2 rows
    assert!(!text.contains('\r'), "LF line endings required");
}

#[test]
fn trials_and_seed_flags_override_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.conf");
    std::fs::write(
        &config,
        "[system]\nP_t = 1e6\n[sweep]\nvariable = rho\nvalues = 0.5\ncurve_variable = theta_g\ncurve_values = 0.75\n[run]\nmode = sweep\ntrials = 10\nseed = 3\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let status = bin()
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .arg("--trials")
        .arg("5")
        .arg("--seed")
        .arg("99")
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    assert!(text.lines().next().unwrap().contains("seed=99"));
    assert!(text.lines().next().unwrap().contains("trials=5"));
    let row = text.lines().nth(2).unwrap();
    assert!(row.ends_with(",5,99"));
}

#[test]
fn calibrate_flag_reports_power() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cal.conf");
    std::fs::write(
        &config,
        "[system]\nP_t = 1\n[sweep]\nvariable = rho\nvalues = 0.5\ncurve_variable = theta_g\ncurve_values = 0.75\n[run]\nmode = sweep\ntrials = 2\nseed = 1\n",
    )
    .unwrap();
    let out = bin()
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .arg("--calibrate-snr")
        .output()
        .unwrap();
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("calibrated P_t = 2.88760"),
        "unexpected calibration output: {stderr}"
    );
}

#[test]
fn outage_check_mode_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("--config")
        .arg(configs().join("outage_check.conf"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("outage_check.csv")).unwrap();
    assert_eq!(text.lines().count(), 2 + 40);
    assert!(String::from_utf8_lossy(&out.stdout).contains("max |closed - oracle|"));
}
