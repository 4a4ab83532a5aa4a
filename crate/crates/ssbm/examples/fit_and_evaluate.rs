//! Fit the block model to a noisy synthetic network and score the result
//! against the planted partition.
//!
//! Run with: cargo run --release --example fit_and_evaluate

use ssbm::{fit, generate_sg, k_recovery, FitConfig, SgConfig};

fn main() -> ssbm::Result<()> {
    // Heavy sign noise on both sides: half the internal edges negative,
    // half the cross edges positive. Structure survives in the densities.
    let config = SgConfig::new(4, 32, 32.0, 0.6, 0.5, 0.5).with_seed(1);
    let (graph, truth) = generate_sg(&config)?;
    println!(
        "fitting n = {}, edges = {}, planted blocks = {}",
        graph.n(),
        graph.edge_count(),
        truth.k()
    );

    let fit_config = FitConfig {
        seed: 42,
        ..FitConfig::default()
    };
    let result = fit(&graph, &fit_config)?;

    let report = k_recovery(&result, &truth)?;
    println!(
        "recovered k = {} (true {}), NMI = {:.4}",
        report.k_found, report.k_true, report.nmi
    );
    println!(
        "best cost {:.2} after {} sweeps in {:.1} ms (converged: {})",
        result.best_cost,
        result.total_sweeps,
        result.wall_time.as_secs_f64() * 1e3,
        result.converged
    );
    println!("best cost per surviving block count:");
    for (k, cost) in &result.per_k_best {
        let marker = if *cost == result.best_cost { "  <- best" } else { "" };
        println!("  k = {k}: {cost:.2}{marker}");
    }
    Ok(())
}
