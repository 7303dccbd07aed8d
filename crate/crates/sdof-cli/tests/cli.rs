//! End-to-end tests of the `sdof` binary: output contracts, exit codes,
//! and reproducibility of the simulate pipeline.

use std::path::Path;
use std::process::{Command, Output};

fn sdof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdof"))
        .args(args)
        .env_remove("SDOF_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

const BASE_SCENARIO: &str = "\
n_a = 4
n_b = 7
n_e_t = 1
n_e_r = 5
r = 10.0
sweep = \"eve_x\"
sweep_values = [-10.0, 0.0, 10.0]
trials = 5
seed = 7
";

// --- sdof ---

#[test]
fn optimized_split_reports_dof_star_and_argmax() {
    let out = sdof(&["sdof", "--na", "4", "--nb", "7", "--net", "1", "--ner", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("max sdof = 2 at n_b_t = 2"), "{text}");
    assert!(text.contains("maximizing splits: 2 4"), "{text}");
}

#[test]
fn fixed_split_reports_plain_dof() {
    let out = sdof(&["sdof", "--na", "4", "--nb", "7", "--nbt", "2", "--net", "1", "--ner", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("sdof = 2"));
}

#[test]
fn no_eavesdropper_means_full_spatial_rank() {
    let out = sdof(&["sdof", "--na", "3", "--nb", "5", "--net", "0", "--ner", "0"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("max sdof = 3"));
}

#[test]
fn json_report_round_trips_through_a_generic_parser() {
    let out = sdof(&[
        "sdof", "--na", "10", "--nb", "18", "--net", "3", "--ner", "17", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["dof"], 3);
    assert_eq!(v["nbt_star"], 7);
    assert!(v["maximizing_splits"].as_array().unwrap().contains(&serde_json::json!(7)));
}

#[test]
fn zero_antenna_count_exits_with_usage_code() {
    let out = sdof(&["sdof", "--na", "0", "--nb", "7", "--net", "1", "--ner", "5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("at least one antenna"));
}

#[test]
fn oversized_split_exits_with_usage_code() {
    let out = sdof(&["sdof", "--na", "4", "--nb", "7", "--nbt", "9", "--net", "1", "--ner", "5"]);
    assert_eq!(code(&out), 2);
}

// --- worstcase ---

#[test]
fn overwhelming_eve_zeroes_the_worst_case() {
    let out = sdof(&["worstcase", "--na", "10", "--nb", "18", "--ne", "20"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("worst-case sdof = 0"));
}

#[test]
fn small_eve_cannot_reduce_a_wide_link() {
    let out = sdof(&["worstcase", "--na", "2", "--nb", "10", "--ne", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("worst-case sdof = 2"));
}

#[test]
fn minimizing_splits_are_the_pure_strategies() {
    let out = sdof(&["worstcase", "--na", "4", "--nb", "7", "--ne", "6", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["dof"], 1);
    assert_eq!(v["minimizing_splits"], serde_json::json!([0, 6]));
    assert_eq!(v["eavesdrop_only_worst"], true);
    assert_eq!(v["jam_only_worst"], true);
}

// --- verify ---

#[test]
fn degenerate_grid_passes_trivially() {
    let out = sdof(&[
        "verify", "--na-max", "1", "--nb-max", "1", "--ne-max", "0", "--nsum-max", "0",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verification passed"));
}

#[test]
fn positivity_grid_reports_the_known_counterexample_family() {
    // Everything except the positivity claim verifies on this grid; the
    // claim itself fails exactly on the n_a = 1, n_e = n_b - 1 diagonal.
    let out = sdof(&[
        "verify", "--na-max", "2", "--nb-max", "3", "--ne-max", "2", "--nsum-max", "4",
    ]);
    assert_eq!(code(&out), 4);
    let text = stdout(&out);
    assert!(text.contains("worst-case positivity: n_a=1 n_b=2 n_e=1"), "{text}");
    assert!(text.contains("worst-case positivity: n_a=1 n_b=3 n_e=2"), "{text}");
    assert!(text.contains("optimal-split") && text.contains("ok"), "{text}");
    assert!(text.contains("verification FAILED"), "{text}");
}

#[test]
fn corrupted_formula_hook_trips_the_verifier() {
    let out = sdof(&[
        "verify", "--na-max", "2", "--nb-max", "2", "--ne-max", "1", "--nsum-max", "2",
        "--self-test-fault",
    ]);
    assert_eq!(code(&out), 4);
    let text = stdout(&out);
    assert!(text.contains("optimal-split dof:"), "{text}");
    assert!(text.contains("FAIL"), "{text}");
}

#[test]
fn verify_json_reports_every_grid() {
    let out = sdof(&[
        "verify", "--na-max", "1", "--nb-max", "1", "--ne-max", "0", "--nsum-max", "0",
        "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 5);
}

// --- simulate ---

#[test]
fn identical_invocations_produce_identical_csv_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("smoke.cfg");
    std::fs::write(&cfg, BASE_SCENARIO).unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (out_path, label) in [(&a, "first"), (&b, "second")] {
        let out = sdof(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{label} run failed: {}", stderr(&out));
        assert!(stdout(&out).contains("seed = 7"));
        assert!(stdout(&out).contains("config sha256 = "));
    }
    let a_bytes = std::fs::read(&a).unwrap();
    let b_bytes = std::fs::read(&b).unwrap();
    assert!(!a_bytes.is_empty());
    assert_eq!(a_bytes, b_bytes);

    let text = String::from_utf8(a_bytes).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sweep_var,sweep_value,scheme,mean_secrecy_rate_bits,mean_rb_bits,mean_re_bits,k_streams,trials"
    );
    // 3 sweep points x 2 schemes, every line with the full column count.
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert_eq!(row.split(',').count(), 8, "{row}");
    }

    let meta_path = format!("{}.meta.json", a.display());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(meta_path).unwrap()).unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["failed_trials_total"], 0);
}

#[test]
fn thread_count_does_not_change_the_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("smoke.cfg");
    std::fs::write(&cfg, BASE_SCENARIO).unwrap();
    let a = dir.path().join("serial.csv");
    let b = dir.path().join("parallel.csv");
    for (out_path, threads) in [(&a, Some("1")), (&b, None)] {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sdof"));
        cmd.args([
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ])
        .env_remove("SDOF_OUT_DIR")
        .env_remove("RAYON_NUM_THREADS");
        if let Some(n) = threads {
            cmd.env("RAYON_NUM_THREADS", n);
        }
        let out = cmd.output().expect("binary runs");
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn seed_override_changes_the_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("smoke.cfg");
    std::fs::write(&cfg, BASE_SCENARIO).unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |path: &Path, seed: &str| {
        let out = sdof(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    };
    run(&a, "7");
    run(&b, "8");
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn json_output_round_trips_and_counts_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("smoke.cfg");
    std::fs::write(&cfg, BASE_SCENARIO).unwrap();
    let out_path = dir.path().join("rows.json");
    let out = sdof(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).expect("valid json");
    assert_eq!(v["sweep_var"], "eve_x");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn unknown_config_key_is_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("typo.cfg");
    std::fs::write(&cfg, format!("{BASE_SCENARIO}trails = 10\n")).unwrap();
    let out = sdof(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("trails"));
}

#[test]
fn conflicting_sweep_specs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("conflict.cfg");
    std::fs::write(
        &cfg,
        format!("{BASE_SCENARIO}sweep_start = 0.0\nsweep_stop = 1.0\nsweep_steps = 3\n"),
    )
    .unwrap();
    let out = sdof(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("not both"));
}

#[test]
fn missing_config_file_exits_with_usage_code() {
    let out = sdof(&["simulate", "--config", "/nonexistent/nowhere.cfg"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn out_dir_env_var_places_the_default_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("envtest.cfg");
    std::fs::write(&cfg, BASE_SCENARIO).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sdof"))
        .args(["simulate", "--config", cfg.to_str().unwrap(), "--trials", "1"])
        .env("SDOF_OUT_DIR", out_dir.path())
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out_dir.path().join("envtest.csv").exists());
    assert!(out_dir.path().join("envtest.csv.meta.json").exists());
}

#[test]
fn shipped_presets_parse_and_run() {
    let scenarios = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let dir = tempfile::tempdir().unwrap();
    let mut found = 0;
    for entry in std::fs::read_dir(&scenarios).expect("scenarios directory ships with the repo") {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "cfg") {
            continue;
        }
        found += 1;
        let out_path = dir.path().join(format!("{found}.csv"));
        let out = sdof(&[
            "simulate",
            "--config",
            path.to_str().unwrap(),
            "--trials",
            "1",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}: {}", path.display(), stderr(&out));
        let text = std::fs::read_to_string(&out_path).unwrap();
        assert!(text.lines().count() > 1, "{} produced no rows", path.display());
    }
    assert!(found >= 6, "expected the preset collection, found {found} files");
}
