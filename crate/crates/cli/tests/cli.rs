use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gabmul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gabmul"))
        .args(args)
        .env_remove("GABMUL_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid json")
}

#[test]
fn gen_signal_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let out = gabmul(&["gen-signal", "--n", "32", "--seed", seed, "--output", p(path)]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    assert_eq!(read(&a).lines().count(), 33);
}

#[test]
fn spectrogram_of_zero_signal_is_zero() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("zero.csv");
    let rows: String = (0..16).map(|k| format!("{k},0,0\n")).collect();
    std::fs::write(&input, format!("index,re,im\n{rows}")).unwrap();
    let output = dir.path().join("spec.csv");
    let out = gabmul(&["spectrogram", "--input", p(&input), "--output", p(&output)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), 16);
    let mut count = 0;
    for line in lines {
        for cell in line.split(',') {
            assert_eq!(cell.parse::<f64>().unwrap(), 0.0);
            count += 1;
        }
    }
    assert_eq!(count, 256);
}

#[test]
fn spectrogram_energy_matches_signal_energy() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("s.csv");
    assert_eq!(code(&gabmul(&["gen-signal", "--n", "24", "--output", p(&input)])), 0);
    let output = dir.path().join("spec.csv");
    let out = gabmul(&["spectrogram", "--input", p(&input), "--window", "gaussian:2", "--output", p(&output)]);
    assert_eq!(code(&out), 0);
    let total: f64 = read(&output)
        .lines()
        .skip(1)
        .flat_map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .sum();
    let energy: f64 = read(&input)
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').skip(1).map(|c| c.parse().unwrap()).collect();
            v[0] * v[0] + v[1] * v[1]
        })
        .sum();
    // unit-norm window: sum over the plane is N times the signal energy
    assert!((total - 24.0 * energy).abs() < 1e-9 * total);
}

#[test]
fn repr_check_full_lattice_ones_windows() {
    let out = gabmul(&["repr-check", "--n", "12", "--window", "ones", "--filter", "random:3"]);
    assert_eq!(code(&out), 0);
    let report = json(&stdout(&out));
    assert_eq!(report["representable"], true);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn repr_check_delta_windows_fail_condition_one() {
    let dir = TempDir::new().unwrap();
    let report_path = dir.path().join("report.json");
    let out = gabmul(&[
        "repr-check", "--n", "8", "--window", "delta", "--filter", "random", "--output", p(&report_path),
    ]);
    assert_eq!(code(&out), 1);
    let report = json(&stdout(&out));
    assert_eq!(report["representable"], false);
    let conditions: Vec<u64> = report["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["condition"].as_u64().unwrap())
        .collect();
    assert!(conditions.contains(&1));
    assert_eq!(json(&read(&report_path)), report);
}

#[test]
fn repr_construct_round_trip() {
    let dir = TempDir::new().unwrap();
    let mask = dir.path().join("mask.csv");
    let out = gabmul(&[
        "repr-construct", "--n", "24", "--window", "gaussian:3", "--filter", "random:5", "--output", p(&mask),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json(&stdout(&out));
    assert!(summary["relative_kernel_gap"].as_f64().unwrap() <= 1e-9);
    let text = read(&mask);
    let header = json(text.lines().next().unwrap());
    assert_eq!(header["representation"], "mask");
    assert_eq!(header["n"], 24);
}

#[test]
fn repr_construct_refuses_non_representable() {
    let dir = TempDir::new().unwrap();
    let mask = dir.path().join("mask.csv");
    let out = gabmul(&["repr-construct", "--n", "8", "--window", "delta", "--output", p(&mask)]);
    assert_eq!(code(&out), 1);
    assert!(!mask.exists());
}

#[test]
fn gauss_verify_reports_each_lambda() {
    let out = gabmul(&["gauss-verify", "--lambdas", "0.75,1.5"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| l.ends_with("PASS") || l.ends_with("FAIL")).collect();
    assert_eq!(rows.len(), 2 + 2 * 7);
    for row in &rows {
        assert_eq!(row.ends_with("FAIL"), row.contains("6λ²"), "{row}");
    }
    assert!(text.contains("λ=0.75") && text.contains("λ=1.5"));
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&gabmul(&["repr-check", "--no-such-flag"])), 2);
    assert_eq!(code(&gabmul(&["repr-check", "--n", "7", "--alpha", "2"])), 2);
    assert_eq!(code(&gabmul(&["repr-check", "--n", "8", "--window", "hann"])), 2);
    assert_eq!(code(&gabmul(&["gen-signal", "--kind", "chirp"])), 2);
    let dir = TempDir::new().unwrap();
    let out = gabmul(&["--out-dir", p(dir.path()), "figure-lowpass", "--n", "32", "--cutoff", "16"]);
    assert_eq!(code(&out), 2);
}

fn figure(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["--out-dir", p(dir), "figure-lowpass", "--n", "96"];
    args.extend_from_slice(extra);
    gabmul(&args)
}

#[test]
fn figure_lowpass_outputs() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert_eq!(code(&figure(a.path(), &["--cutoff", "16"])), 0);
    assert_eq!(code(&figure(b.path(), &["--cutoff", "16"])), 0);
    for name in [
        "input.csv",
        "spectrogram_filter.csv",
        "spectrogram_multiplier.csv",
        "singular_values.csv",
        "singular_vector.csv",
        "frequency_response.csv",
        "summary.json",
    ] {
        assert_eq!(read(&a.path().join(name)), read(&b.path().join(name)), "{name}");
    }
    let values: Vec<f64> = read(&a.path().join("singular_values.csv"))
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 20);
    assert!(values.iter().all(|&s| s >= 0.0));
    assert!(values.windows(2).all(|w| w[0] >= w[1]));
    let summary = json(&read(&a.path().join("summary.json")));
    assert_eq!(summary["spectral_distance"].as_f64().unwrap(), values[0]);
}

#[test]
fn figure_lowpass_zero_cutoff_passes_dc_only() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&figure(dir.path(), &["--cutoff", "0"])), 0);
    let text = read(&dir.path().join("frequency_response.csv"));
    let ideal: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ideal.len(), 96);
    assert_eq!(ideal[0], 1.0);
    assert!(ideal[1..].iter().all(|&x| x == 0.0));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out_dir = dir.path().join("from_config");
    std::fs::write(
        &cfg,
        serde_json::json!({ "n": 10, "seed": 4, "out_dir": out_dir }).to_string(),
    )
    .unwrap();
    assert_eq!(code(&gabmul(&["--config", p(&cfg), "gen-signal"])), 0);
    let from_config = read(&out_dir.join("signal.csv"));
    assert_eq!(from_config.lines().count(), 11);

    let flag_path = dir.path().join("flag.csv");
    let out = gabmul(&["--config", p(&cfg), "gen-signal", "--n", "6", "--output", p(&flag_path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(read(&flag_path).lines().count(), 7);

    std::fs::write(&cfg, r#"{"nn": 3}"#).unwrap();
    assert_eq!(code(&gabmul(&["--config", p(&cfg), "gen-signal"])), 2);
}

#[test]
fn out_dir_env_is_a_default() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gabmul"))
        .args(["gen-window", "--n", "8"])
        .env("GABMUL_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("window.csv").exists());
}
