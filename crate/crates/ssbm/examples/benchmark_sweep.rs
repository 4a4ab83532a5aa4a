//! Run a small generate-fit-eval sweep and print the resulting CSV curve.
//!
//! Run with: cargo run --release --example benchmark_sweep

use ssbm::cli::cmd_bench;

const SUITE: &str = r#"
[suite]
base_seed = 9
seeds_per_point = 3

[sweeps.within_noise]
family = "sg"
param = "p_minus"
from = 0.0
to = 0.5
step = 0.25
c = 4
m = 16
k = 12.0
p_in = 0.7
restarts = 3
"#;

fn main() -> ssbm::Result<()> {
    let dir = std::env::temp_dir().join("ssbm-example-bench");
    std::fs::create_dir_all(&dir).map_err(|e| ssbm::Error::io(&dir, e))?;
    let suite_path = dir.join("suite.toml");
    std::fs::write(&suite_path, SUITE).map_err(|e| ssbm::Error::io(&suite_path, e))?;

    cmd_bench(&suite_path, &dir, Some(2), None)?;

    println!("--- {}", dir.join("within_noise.csv").display());
    print!(
        "{}",
        std::fs::read_to_string(dir.join("within_noise.csv")).unwrap()
    );
    println!("--- per-point medians from summary.json");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap())
            .expect("summary parses");
    for point in summary["metrics"][0]["points"].as_array().unwrap() {
        println!(
            "  p_minus = {:>4}: median NMI {:.3} over {} runs",
            point["param_value"], point["median_nmi"], point["runs"]
        );
    }
    Ok(())
}
