//! End-to-end runs of the `mimpeak` binary.

use std::path::Path;
use std::process::{Command, Output};

use mimpeak::estimators::DenominatorForm;
use mimpeak::SignalModel;
use mimpeak_cli::selfcheck;

fn mimpeak(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mimpeak"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_gaussian_csv(path: &Path) {
    let s = SignalModel::gaussian(1.0, 5.0, 0.2)
        .unwrap()
        .sample(0.0, 10.0, 10.0)
        .unwrap();
    let mut text = String::from("x,y\n");
    for (x, y) in s.samples().iter() {
        text.push_str(&format!("{x},{y}\n"));
    }
    std::fs::write(path, text).unwrap();
}

fn x_p(out: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix("x_p"))
        .expect("x_p line")
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn estimate_noise_free_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    write_gaussian_csv(&dir.path().join("g.csv"));
    for method in ["centroid", "mim1", "mim2"] {
        let o = mimpeak(&["estimate", "g.csv", "--method", method, "--threshold", "0.0125"], dir.path());
        assert!(o.status.success(), "{method}: {}", stderr(&o));
        let out = stdout(&o);
        assert!((x_p(&out) - 5.0).abs() <= 1e-9, "{out}");
        assert!(out.contains("status      converged"));
        assert!(out.contains("residual_s"));
    }
}

#[test]
fn estimate_with_noise_level_threshold() {
    let dir = tempfile::tempdir().unwrap();
    write_gaussian_csv(&dir.path().join("g.csv"));
    let o = mimpeak(&["estimate", "g.csv", "--sigma-n", "0.1"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("threshold   0.05"));
}

#[test]
fn too_few_samples() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("two.csv"), "x,y\n0,1\n1,2\n").unwrap();
    let o = mimpeak(&["estimate", "two.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at least 3"), "{}", stderr(&o));
}

#[test]
fn non_uniform_grid() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("nu.csv"), "x,y\n0,0.1\n1,1\n2.5,0.2\n3.5,0.1\n").unwrap();
    let o = mimpeak(&["estimate", "nu.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("non-uniform"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_gaussian_csv(&dir.path().join("g.csv"));
    // Missing file.
    assert_eq!(mimpeak(&["estimate", "nope.csv"], dir.path()).status.code(), Some(2));
    // Threshold above the peak.
    let o = mimpeak(&["estimate", "g.csv", "--threshold", "2"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    // Config problems.
    std::fs::write(dir.path().join("bad.cfg"), "trials = 5\nflavour = x\n").unwrap();
    let o = mimpeak(&["snr-sweep", "--config", "bad.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("unknown key 'flavour'"));
    let o = mimpeak(&["estimate", "g.csv", "--max-iters", "0"], dir.path());
    assert_eq!(o.status.code(), Some(5));
    // Unwritable output.
    let o = mimpeak(
        &["rate-sweep", "--trials", "2", "--out", "missing/dir/out.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn seeded_sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let o = mimpeak(&["snr-sweep", "--trials", "10", "--seed", "42", "--out", name], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    assert!(dir.path().join("a.manifest").exists());
}

#[test]
fn default_row_counts_and_header() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, rows) in [("snr-sweep", 21), ("rate-sweep", 24), ("threshold-sweep", 54)] {
        let o = mimpeak(&[cmd, "--trials", "20"], dir.path());
        assert!(o.status.success(), "{cmd}: {}", stderr(&o));
        let text = std::fs::read_to_string(dir.path().join(format!("{cmd}.csv"))).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "estimator,rate,sigma_n,snr_db,threshold_multiplier,trials,n_ok,bias,std,mean_iterations,oscillation_rate"
        );
        assert_eq!(lines.len() - 1, rows, "{cmd}");
    }
}

#[test]
fn manifest_reproduces_results() {
    let dir = tempfile::tempdir().unwrap();
    let o = mimpeak(
        &[
            "threshold-sweep",
            "--trials",
            "25",
            "--seed",
            "9",
            "--threshold-multiplier",
            "0.5,1.5,2.5",
            "--method",
            "mim1,mim2",
            "--out",
            "first.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = mimpeak(
        &["threshold-sweep", "--config", "first.manifest", "--out", "second.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let first = std::fs::read(dir.path().join("first.csv")).unwrap();
    let second = std::fs::read(dir.path().join("second.csv")).unwrap();
    assert_eq!(first, second);
    assert_eq!(String::from_utf8(first).unwrap().lines().count(), 1 + 3 * 2);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.cfg"), "trials = 7\nrates = 4,5\n").unwrap();
    let o = mimpeak(
        &["rate-sweep", "--config", "c.cfg", "--rate", "6", "--out", "r.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest = std::fs::read_to_string(dir.path().join("r.manifest")).unwrap();
    assert!(manifest.contains("rates = 6\n"));
    assert!(manifest.contains("trials = 7\n"));
}

#[test]
fn selfcheck_passes() {
    let o = mimpeak(&["selfcheck"], Path::new("."));
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("stationary point matches grid argmin"));
}

#[test]
fn selfcheck_rejects_unscaled_denominator() {
    let report = selfcheck::run(DenominatorForm::Unscaled);
    assert!(!report.passed());
    assert_eq!(report.failed(), vec!["mim2 stationary point"]);
    assert!(report.to_text().contains("FAIL mim2 stationary point"));
}
