//! Edge-list files: write a labeled signed graph and read it back.
//!
//! Run with: cargo run --example edge_list_io

use ssbm::{load_edge_list_with_stats, write_edge_list, SignedGraph};

fn main() -> ssbm::Result<()> {
    let labels: Vec<String> = ["alice", "bob", "carol", "dan", "erin"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let edges = vec![(0, 1, 1), (0, 2, 1), (1, 2, 1), (2, 3, -1), (3, 4, 1)];
    let graph = SignedGraph::from_edges(5, edges, false)?.with_labels(labels)?;

    let dir = std::env::temp_dir().join("ssbm-example-io");
    std::fs::create_dir_all(&dir).map_err(|e| ssbm::Error::io(&dir, e))?;
    let path = dir.join("toy.edges");
    write_edge_list(&graph, &path)?;
    println!("--- {}", path.display());
    print!("{}", std::fs::read_to_string(&path).unwrap());

    let (back, stats) = load_edge_list_with_stats(&path, None, false)?;
    println!(
        "--- reloaded: n = {}, edges = {}, dropped self-loops = {}",
        back.n(),
        back.edge_count(),
        stats.self_loops_dropped
    );
    assert_eq!(back.n(), graph.n());
    for i in 0..graph.n() {
        for j in 0..graph.n() {
            assert_eq!(back.entry(i, j), graph.entry(i, j));
        }
    }
    println!("round trip preserved every adjacency entry");
    println!(
        "entry(carol, dan) = {} (negative edge), entry(alice, erin) = {} (no edge)",
        back.entry(2, 3),
        back.entry(0, 4)
    );
    Ok(())
}
