//! End-to-end tests of the `ssbm` binary: exit codes, file outputs, and the
//! generate -> fit -> eval pipeline.

use std::path::Path;
use std::process::{Command, Output};

fn ssbm(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ssbm"));
    cmd.args(args);
    cmd.env_remove("SSBM_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

const NETWORK_I: &str = "[sg]\nc = 4\nm = 32\nk = 32.0\np_in = 0.8\np_minus = 0.0\np_plus = 0.0\nseed = 1\n";

#[test]
fn generate_writes_edge_list_truth_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("net.toml");
    write(&config, NETWORK_I);
    let out = dir.path().join("gen");
    let result = ssbm(
        &[
            "generate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert!(result.status.success(), "{result:?}");

    let edges = std::fs::read_to_string(out.join("edges.txt")).unwrap();
    let data_lines = edges.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(data_lines, 2048);

    let truth = std::fs::read_to_string(out.join("truth.txt")).unwrap();
    let blocks: std::collections::HashSet<&str> = truth
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    assert_eq!(blocks.len(), 4);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["generation"]["n"], 128);
    assert_eq!(manifest["generation"]["edges"], 2048);
    assert_eq!(manifest["command"], "generate");
    assert!(manifest["input_digest"].as_str().unwrap().len() == 64);
}

#[test]
fn invalid_probability_fails_with_code_1_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    write(
        &config,
        "[sg]\nc = 4\nm = 32\nk = 32.0\np_in = 1.2\np_minus = 0.0\np_plus = 0.0\n",
    );
    let result = ssbm(
        &[
            "generate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            dir.path().join("x").to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(result.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("p_in"), "stderr: {stderr}");
}

#[test]
fn fit_missing_file_exits_2_and_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-graph.txt");
    let result = ssbm(
        &[
            "fit",
            missing.to_str().unwrap(),
            "--out",
            dir.path().join("out.json").to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("no-such-graph.txt"), "stderr: {stderr}");
}

#[test]
fn pipeline_recovers_planted_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("net.toml");
    write(&config, NETWORK_I);
    let out = dir.path().join("gen");
    assert!(ssbm(
        &[
            "generate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        &[],
    )
    .status
    .success());

    let fit_out = dir.path().join("fit.json");
    let result = ssbm(
        &[
            "fit",
            out.join("edges.txt").to_str().unwrap(),
            "--out",
            fit_out.to_str().unwrap(),
            "--seed",
            "9",
        ],
        &[],
    );
    assert!(result.status.success(), "{result:?}");
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&fit_out).unwrap()).unwrap();
    assert_eq!(record["fit"]["k_found"], 4);
    assert_eq!(record["fit"]["assignment"].as_array().unwrap().len(), 128);

    let eval = ssbm(
        &[
            "eval",
            fit_out.to_str().unwrap(),
            out.join("truth.txt").to_str().unwrap(),
        ],
        &[],
    );
    assert!(eval.status.success());
    let metrics: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&eval.stdout)).unwrap();
    assert_eq!(metrics["k_true"], 4);
    assert_eq!(metrics["k_found"], 4);
    assert!(metrics["nmi"].as_f64().unwrap() > 0.99);
}

#[test]
fn eval_is_invariant_to_truth_relabeling_and_detects_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("net.toml");
    write(
        &config,
        "[sg]\nc = 2\nm = 10\nk = 6.0\np_in = 0.9\np_minus = 0.0\np_plus = 0.0\nseed = 2\n",
    );
    let out = dir.path().join("gen");
    assert!(ssbm(
        &[
            "generate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        &[],
    )
    .status
    .success());
    let fit_out = dir.path().join("fit.json");
    assert!(ssbm(
        &[
            "fit",
            out.join("edges.txt").to_str().unwrap(),
            "--out",
            fit_out.to_str().unwrap(),
            "--seed",
            "4",
        ],
        &[],
    )
    .status
    .success());

    // Relabel truth blocks 0 <-> 7: NMI must stay 1.
    let truth = std::fs::read_to_string(out.join("truth.txt")).unwrap();
    let relabeled: String = truth
        .lines()
        .map(|l| {
            if l.starts_with('#') {
                l.to_string()
            } else {
                let mut parts = l.split_whitespace();
                let node = parts.next().unwrap();
                let block: usize = parts.next().unwrap().parse().unwrap();
                format!("{node} {}", if block == 0 { 7 } else { 0 })
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let relabeled_path = dir.path().join("truth_relabeled.txt");
    write(&relabeled_path, &relabeled);
    let eval = ssbm(
        &[
            "eval",
            fit_out.to_str().unwrap(),
            relabeled_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(eval.status.success());
    let metrics: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&eval.stdout)).unwrap();
    assert!(metrics["nmi"].as_f64().unwrap() > 0.9999);

    // A truth file over a different node set is a validation error.
    let truncated: String = truth.lines().take(5).collect::<Vec<_>>().join("\n");
    let bad_path = dir.path().join("truth_bad.txt");
    write(&bad_path, &truncated);
    let eval = ssbm(
        &[
            "eval",
            fit_out.to_str().unwrap(),
            bad_path.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(eval.status.code(), Some(1));
}

#[test]
fn forced_single_block_scores_zero_against_truth() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("net.toml");
    write(
        &config,
        "[sg]\nc = 2\nm = 10\nk = 6.0\np_in = 0.9\np_minus = 0.0\np_plus = 0.0\nseed = 3\n",
    );
    let out = dir.path().join("gen");
    assert!(ssbm(
        &[
            "generate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        &[],
    )
    .status
    .success());
    let fit_out = dir.path().join("fit.json");
    assert!(ssbm(
        &[
            "fit",
            out.join("edges.txt").to_str().unwrap(),
            "--out",
            fit_out.to_str().unwrap(),
            "--k-min",
            "1",
            "--k-max",
            "1",
            "--seed",
            "4",
        ],
        &[],
    )
    .status
    .success());
    let eval = ssbm(
        &[
            "eval",
            fit_out.to_str().unwrap(),
            out.join("truth.txt").to_str().unwrap(),
        ],
        &[],
    );
    let metrics: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&eval.stdout)).unwrap();
    assert_eq!(metrics["k_found"], 1);
    assert_eq!(metrics["nmi"].as_f64().unwrap(), 0.0);
}

#[test]
fn seed_env_var_is_a_fallback_for_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("net.toml");
    write(
        &config,
        "[sg]\nc = 2\nm = 8\nk = 4.0\np_in = 0.8\np_minus = 0.1\np_plus = 0.1\nseed = 0\n",
    );
    let out_env = dir.path().join("a");
    let out_flag = dir.path().join("b");
    assert!(ssbm(
        &[
            "generate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_env.to_str().unwrap(),
        ],
        &[("SSBM_SEED", "42")],
    )
    .status
    .success());
    assert!(ssbm(
        &[
            "generate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_flag.to_str().unwrap(),
            "--seed",
            "42",
        ],
        &[],
    )
    .status
    .success());
    let a = std::fs::read_to_string(out_env.join("edges.txt")).unwrap();
    let b = std::fs::read_to_string(out_flag.join("edges.txt")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bench_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.toml");
    write(
        &suite,
        "\
[suite]\nbase_seed = 5\nseeds_per_point = 2\n\n\
[sweeps.demo]\nfamily = \"sg\"\nparam = \"p_in\"\nfrom = 0.6\nto = 0.8\nstep = 0.2\n\
c = 2\nm = 10\nk = 6.0\nrestarts = 2\n",
    );
    let out = dir.path().join("bench");
    let result = ssbm(
        &[
            "bench",
            "--config",
            suite.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--workers",
            "2",
        ],
        &[],
    );
    assert!(result.status.success(), "{result:?}");
    let csv = std::fs::read_to_string(out.join("demo.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "param_value,seed,nmi,k_found,wall_time_ms,error"
    );
    assert_eq!(lines.count(), 4); // 2 points x 2 seeds
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let points = summary["metrics"][0]["points"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    assert!(points[0]["median_nmi"].as_f64().is_some());
}

#[test]
fn help_and_unknown_flags() {
    let help = ssbm(&["--help"], &[]);
    assert!(help.status.success());
    let text = String::from_utf8_lossy(&help.stdout);
    for sub in ["generate", "fit", "eval", "bench"] {
        assert!(text.contains(sub));
    }
    let unknown = ssbm(&["fit", "--no-such-flag"], &[]);
    assert_eq!(unknown.status.code(), Some(1));
}
