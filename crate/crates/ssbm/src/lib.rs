//! Discovery of block structures in signed networks.
//!
//! Signed networks carry positive and negative edges. This crate fits a
//! probabilistic block model to such networks, where each block is described
//! by its per-node probabilities of a positive, negative, or absent edge.
//! That parameterization captures communities (positive interiors),
//! bipartites (dense cross-connections), and mixtures of both. The learner
//! selects the number of blocks on the fly: a message-length cost penalizes
//! model size, and blocks whose responsibility mass drops below the
//! annihilation threshold are retired mid-run, so one pass over the block
//! space performs parameter estimation and model selection together.
//!
//! The crate ships:
//!
//! - [`graph`]: the signed adjacency type, partitions, and edge-list I/O;
//! - [`synth`]: seeded benchmark generators with planted ground truth;
//! - [`learner`]: the component-wise EM learner and its individual steps;
//! - [`eval`]: NMI scoring and block-count recovery reports;
//! - [`cli`]: the `ssbm` command-line harness (generate / fit / eval /
//!   bench).
//!
//! Every run is reproducible: all randomness flows from ChaCha8 streams
//! derived from explicit seeds. See the `examples/` directory for one
//! runnable walkthrough per capability.

pub mod cli;
pub mod error;
pub mod eval;
pub mod graph;
pub mod learner;
pub mod numeric;
pub mod synth;

pub use error::{Error, Result};
pub use eval::{confusion, k_recovery, nmi, ConfusionMatrix, KRecovery};
pub use graph::{
    load_edge_list, load_edge_list_with_stats, load_partition_pairs, write_edge_list,
    write_partition, LoadStats, Partition, SignedGraph,
};
pub use learner::{
    category, cost, default_k_max, e_step_row, fit, fit_from, log_evidence_per_node,
    m_step_lambda, m_step_phi, CostPoint, FitConfig, FitResult, ModelParams, PhiUpdate,
    Responsibilities,
};
pub use synth::{generate_block_pair, generate_sg, sg_edge_target, BlockPairConfig, SgConfig};
