//! Inspect a fitted model: block priors, recovered membership, and the
//! noise densities encoded by the connection triples.
//!
//! Run with: cargo run --release --example inspect_model

use ssbm::{fit, generate_sg, FitConfig, SgConfig};

fn main() -> ssbm::Result<()> {
    let config = SgConfig::new(3, 24, 14.0, 0.75, 0.2, 0.1).with_seed(5);
    let (graph, truth) = generate_sg(&config)?;
    let result = fit(&graph, &FitConfig { seed: 8, ..FitConfig::default() })?;

    let params = &result.best_params;
    let partition = &result.best_partition;
    println!(
        "k_found = {}, live blocks = {:?}, phi = {:?}",
        result.k_found(),
        params.live_blocks(),
        params
            .live_blocks()
            .iter()
            .map(|&k| (params.phi()[k] * 1e3).round() / 1e3)
            .collect::<Vec<_>>()
    );
    println!("recovered block sizes: {:?}", partition.block_sizes());
    println!("planted block sizes:   {:?}", truth.block_sizes());

    // Average connection triples from each live block to the members of
    // each recovered block: the diagonal shows internal edge and noise
    // densities, off-diagonals the cross-block behavior.
    let live = params.live_blocks();
    println!("mean (positive, negative, null) probability from block row to block column:");
    for &k in &live {
        let mut line = String::new();
        for target in 0..partition.k() {
            let members: Vec<usize> = partition
                .assignment()
                .iter()
                .enumerate()
                .filter(|&(_, &b)| b == target)
                .map(|(j, _)| j)
                .collect();
            let mut mean = [0.0f64; 3];
            for &j in &members {
                let t = params.lambda(k, j);
                for h in 0..3 {
                    mean[h] += t[h];
                }
            }
            for slot in mean.iter_mut() {
                *slot /= members.len() as f64;
            }
            line.push_str(&format!(
                " ({:.2}, {:.2}, {:.2})",
                mean[0], mean[1], mean[2]
            ));
        }
        println!("  block {k}:{line}");
    }
    println!("cost trace: {} sweeps across {} block-count regimes", result.total_sweeps, result.per_k_best.len());
    Ok(())
}
