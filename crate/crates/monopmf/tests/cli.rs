//! Black-box tests of the command-line interface.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn monopmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monopmf"))
        .args(args)
        .env_remove("MONOPMF_SEED")
        .output()
        .expect("binary runs")
}

fn write_tmp(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn estimate_flat_from_counts_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_tmp(dir.path(), "counts.csv", "1,3\n2,5\n3,2\n4,6\n5,4\n");
    let out = monopmf(&[
        "estimate", "--input", &input, "--estimator", "flat", "--flats", "2,3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("# n = 20"));
    assert!(text.contains("# k = 5"));
    for i in 1..=5 {
        assert!(text.contains(&format!("{i},0.200000000000")), "{text}");
    }
}

#[test]
fn estimate_empirical_from_samples_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_tmp(dir.path(), "samples.txt", "1\n1\n2\n");
    let out = monopmf(&["estimate", "--input", &input, "--estimator", "empirical"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1,0.666666666667"), "{text}");
    assert!(text.contains("2,0.333333333333"), "{text}");
}

#[test]
fn estimate_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_tmp(dir.path(), "samples.txt", "1\n1\n2\n");
    let out = monopmf(&[
        "estimate", "--input", &input, "--estimator", "empirical", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["estimator"], "empirical");
    assert_eq!(v["n"], 3);
    assert_eq!(v["k"], 2);
    assert_eq!(v["probs"].as_array().unwrap().len(), 2);
}

#[test]
fn parse_error_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_tmp(dir.path(), "bad.csv", "1,x\n");
    let out = monopmf(&["estimate", "--input", &input, "--estimator", "empirical"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert!(out.stdout.is_empty());
}

#[test]
fn flats_mismatch_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_tmp(dir.path(), "counts.csv", "1,3\n2,5\n3,2\n4,6\n5,4\n");
    let out = monopmf(&[
        "estimate", "--input", &input, "--estimator", "flat", "--flats", "2,2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn estimate_csv_roundtrips_to_12_places() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_tmp(dir.path(), "counts.csv", "1,1\n2,3\n3,2\n4,1\n");
    let out = monopmf(&["estimate", "--input", &input, "--estimator", "grenander"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let probs: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("index"))
        .map(|l| l.split_once(',').unwrap().1.parse().unwrap())
        .collect();
    assert_eq!(probs.len(), 4);
    // grenander of (1,3,2,1)/7: first two pool to 2/7
    let expected = [2.0 / 7.0, 2.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0];
    for (a, b) in probs.iter().zip(expected) {
        assert!((a - b).abs() < 5e-13, "{probs:?}");
    }
}

#[test]
fn compare_includes_pairwise_distances() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_tmp(dir.path(), "counts.csv", "1,1\n2,3\n");
    let out = monopmf(&["compare", "--input", &input, "--flats", "1,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("index,empirical,rearrangement,grenander,flat"));
    // rearrangement (0.75,0.25) vs grenander (0.5,0.5): l2^2 = 0.125
    assert!(
        text.contains("rearrangement,grenander,0.125000000000"),
        "{text}"
    );
}

#[test]
fn compare_without_flats_omits_flat_column() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_tmp(dir.path(), "counts.csv", "1,3\n2,1\n");
    let out = monopmf(&["compare", "--input", &input]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("index,empirical,rearrangement,grenander\n"));
    assert!(!text.contains("flat"));
}

#[test]
fn compare_on_monotone_data_has_zero_distances() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_tmp(dir.path(), "counts.csv", "1,4\n2,2\n3,1\n");
    let out = monopmf(&["compare", "--input", &input, "--flats", "1,1,1"]);
    assert!(out.status.success());
    for line in stdout(&out)
        .lines()
        .filter(|l| l.contains(",") && !l.contains("index") && !l.contains("estimator_a"))
        .filter(|l| l.chars().next().unwrap().is_alphabetic())
    {
        let fields: Vec<&str> = line.split(',').collect();
        for v in &fields[2..] {
            assert_eq!(v.parse::<f64>().unwrap(), 0.0, "{line}");
        }
    }
}

#[test]
fn simulate_is_deterministic_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out_dir in [&out_a, &out_b] {
        let out = monopmf(&[
            "simulate",
            "--out",
            out_dir.to_str().unwrap(),
            "--reps",
            "5",
            "--seed",
            "7",
            "--sizes",
            "20",
            "--svg",
            "--check-asymptotics",
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let losses_a = fs::read(out_a.join("losses.csv")).unwrap();
    let losses_b = fs::read(out_b.join("losses.csv")).unwrap();
    assert_eq!(losses_a, losses_b);

    let summary = fs::read_to_string(out_a.join("summary.csv")).unwrap();
    assert!(summary.starts_with("estimator,metric,sample_size,"));
    assert!(summary.lines().next().unwrap().ends_with("limit_n_loss"));
    assert!(out_a.join("l2_n20.svg").exists());
    assert!(out_a.join("hellinger_n20.svg").exists());
}

#[test]
fn simulate_env_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    let out_flag = dir.path().join("flag");
    let out_env = dir.path().join("env");
    let run = monopmf(&[
        "simulate",
        "--out",
        out_flag.to_str().unwrap(),
        "--reps",
        "5",
        "--seed",
        "99",
        "--sizes",
        "20",
    ]);
    assert!(run.status.success());
    let run = Command::new(env!("CARGO_BIN_EXE_monopmf"))
        .args([
            "simulate",
            "--out",
            out_env.to_str().unwrap(),
            "--reps",
            "5",
            "--seed",
            "1",
            "--sizes",
            "20",
        ])
        .env("MONOPMF_SEED", "99")
        .output()
        .unwrap();
    assert!(run.status.success());
    assert_eq!(
        fs::read(out_flag.join("losses.csv")).unwrap(),
        fs::read(out_env.join("losses.csv")).unwrap()
    );
}

#[test]
fn simulate_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tmp(
        dir.path(),
        "experiment.conf",
        "# demo config\n\
         components = 0.2:4, 0.8:8\n\
         sample_sizes = 20\n\
         replications = 3\n\
         seed = 5\n\
         estimators = flat, grenander\n\
         metrics = l2\n",
    );
    let out_dir = dir.path().join("out");
    let out = monopmf(&["simulate", "--out", out_dir.to_str().unwrap(), "--config", &config]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let losses = fs::read_to_string(out_dir.join("losses.csv")).unwrap();
    // 2 estimators x 1 metric x 3 replicates + header
    assert_eq!(losses.lines().count(), 7);
}

#[test]
fn simulate_preset_writes_three_mixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("fig1");
    let out = monopmf(&[
        "simulate",
        "--out",
        out_dir.to_str().unwrap(),
        "--preset",
        "paper-fig1",
        "--reps",
        "3",
        "--seed",
        "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for i in 1..=3 {
        assert!(out_dir.join(format!("mixture{i}_losses.csv")).exists());
        assert!(out_dir.join(format!("mixture{i}_summary.csv")).exists());
    }
}

#[test]
fn unwritable_output_dir_is_exit_4() {
    let out = monopmf(&[
        "simulate",
        "--out",
        "/proc/no-such-place/out",
        "--reps",
        "1",
        "--sizes",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(4));
}
