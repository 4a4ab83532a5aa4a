//! Generate a degree-driven synthetic network with planted blocks and write
//! it to disk.
//!
//! Run with: cargo run --example generate_sg

use ssbm::{generate_sg, sg_edge_target, write_edge_list, write_partition, SgConfig};

fn main() -> ssbm::Result<()> {
    // 4 blocks of 32 nodes, average degree 32; 80% of edges land inside a
    // block, no sign noise: a balanced network.
    let config = SgConfig::new(4, 32, 32.0, 0.8, 0.0, 0.0).with_seed(7);
    let (graph, truth) = generate_sg(&config)?;

    let (pos, neg) = graph.sign_counts();
    println!(
        "generated n = {}, edges = {} (target {}), {} positive / {} negative",
        graph.n(),
        graph.edge_count(),
        sg_edge_target(&config),
        pos,
        neg
    );
    println!("planted blocks: {:?}", truth.block_sizes());

    let within = graph
        .edges()
        .iter()
        .filter(|&&(i, j, _)| truth.assignment()[i] == truth.assignment()[j])
        .count();
    println!(
        "within-block edge fraction: {:.3} (p_in = {})",
        within as f64 / graph.edge_count() as f64,
        config.p_in
    );

    let dir = std::env::temp_dir().join("ssbm-example-sg");
    std::fs::create_dir_all(&dir).map_err(|e| ssbm::Error::io(&dir, e))?;
    write_edge_list(&graph, dir.join("edges.txt"))?;
    write_partition(&truth, graph.node_labels(), dir.join("truth.txt"))?;
    println!("wrote edges.txt and truth.txt under {}", dir.display());
    Ok(())
}
