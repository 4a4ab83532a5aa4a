//! Generate a network that mixes community and bipartite structure from a
//! per-block-pair category table.
//!
//! Run with: cargo run --example generate_multi_structure

use ssbm::{generate_block_pair, BlockPairConfig};

fn main() -> ssbm::Result<()> {
    // Four blocks of 32 nodes: a dense positive community, a sparser one,
    // and two blocks with near-empty interiors tied together by negative
    // cross-links.
    let config = BlockPairConfig::two_communities_two_bipartites().with_seed(11);
    let (graph, truth) = generate_block_pair(&config)?;

    let (pos, neg) = graph.sign_counts();
    println!(
        "generated n = {}, edges = {} ({} positive / {} negative)",
        graph.n(),
        graph.edge_count(),
        pos,
        neg
    );

    // Edge counts per block pair show the planted mixture.
    let k = truth.k();
    let mut pos_counts = vec![vec![0usize; k]; k];
    let mut neg_counts = vec![vec![0usize; k]; k];
    for (i, j, s) in graph.edges() {
        let (a, b) = (truth.assignment()[i], truth.assignment()[j]);
        let (a, b) = (a.min(b), a.max(b));
        if s > 0 {
            pos_counts[a][b] += 1;
        } else {
            neg_counts[a][b] += 1;
        }
    }
    println!("block pair: positive / negative edges");
    for a in 0..k {
        for b in a..k {
            println!(
                "  ({a}, {b}): {:>4} / {:>4}",
                pos_counts[a][b], neg_counts[a][b]
            );
        }
    }
    println!("blocks 0 and 1 are communities; 2 and 3 connect almost only across pairs");
    Ok(())
}
