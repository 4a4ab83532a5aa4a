//! Synthetic signed-network generators with planted ground truth.
//!
//! Two families are provided. [`generate_sg`] draws a fixed number of
//! edges whose placement (within vs. between blocks) and sign are
//! controlled by `(c, m, k, p_in, p_minus, p_plus)`. [`generate_block_pair`]
//! draws every node pair's category once from a per-block-pair
//! `(positive, negative, null)` table, which can plant communities,
//! bipartites, and mixtures of both.
//!
//! All randomness comes from ChaCha8, a seekable counter-based stream
//! cipher RNG, so equal seeds reproduce bit-identical networks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Partition, SignedGraph};

/// Attempt budget multiplier for edge placement in [`generate_sg`].
const ATTEMPT_FACTOR: usize = 100;

/// Configuration of the degree-driven generator: `c` blocks of `m` nodes,
/// average node degree `k`. An edge lands inside a single block with
/// probability `p_in`, otherwise between two distinct blocks; within-block
/// edges are negative with probability `p_minus`, between-block edges
/// positive with probability `p_plus`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SgConfig {
    pub c: usize,
    pub m: usize,
    pub k: f64,
    pub p_in: f64,
    pub p_minus: f64,
    pub p_plus: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SgConfig {
    pub fn new(c: usize, m: usize, k: f64, p_in: f64, p_minus: f64, p_plus: f64) -> Self {
        SgConfig {
            c,
            m,
            k,
            p_in,
            p_minus,
            p_plus,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn n(&self) -> usize {
        self.c * self.m
    }

    pub fn validate(&self) -> Result<()> {
        if self.c == 0 {
            return Err(Error::config("c", "must be at least 1"));
        }
        if self.m == 0 {
            return Err(Error::config("m", "must be at least 1"));
        }
        if !self.k.is_finite() || self.k < 0.0 {
            return Err(Error::config("k", "must be a finite non-negative number"));
        }
        if self.k >= (self.c * self.m) as f64 {
            return Err(Error::config("k", "average degree must be below c*m"));
        }
        for (name, p) in [
            ("p_in", self.p_in),
            ("p_minus", self.p_minus),
            ("p_plus", self.p_plus),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(name, format!("probability {p} not in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Target edge count for an [`SgConfig`]: floor(n * k / 2).
pub fn sg_edge_target(config: &SgConfig) -> usize {
    ((config.n() as f64) * config.k / 2.0).floor() as usize
}

/// Generates an undirected simple graph with `c` planted blocks of `m`
/// nodes and exactly `floor(n*k/2)` edges. Each edge independently lands
/// within one uniformly chosen block with probability `p_in`, otherwise
/// between two distinct blocks; the endpoint pair is then rejection-sampled
/// among free slots of that class. When a class has no free pair left, the
/// edge falls through to the other class, so extreme settings such as
/// `p_in = 1` with more edges than internal pairs still produce the exact
/// edge count. Fails with [`Error::InfeasibleConfig`] if placement exhausts
/// the budget of 100x the target count in attempts.
pub fn generate_sg(config: &SgConfig) -> Result<(SignedGraph, Partition)> {
    config.validate()?;
    let n = config.n();
    let target = sg_edge_target(config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let within_capacity = config.c * config.m * (config.m - 1) / 2;
    let between_capacity = n * (n - 1) / 2 - within_capacity;
    let mut within_placed = 0usize;
    let mut between_placed = 0usize;

    let mut occupied = std::collections::HashSet::with_capacity(target * 2);
    let mut edges: Vec<(usize, usize, i8)> = Vec::with_capacity(target);
    let budget = ATTEMPT_FACTOR.saturating_mul(target);
    let mut attempts = 0usize;

    while edges.len() < target {
        let mut within = rng.gen::<f64>() < config.p_in;
        if within && within_placed == within_capacity {
            within = false;
        } else if !within && between_placed == between_capacity {
            within = true;
        }
        // One class coin per edge; only the pair is redrawn on collision.
        let (a, b) = loop {
            attempts += 1;
            if attempts > budget {
                return Err(Error::InfeasibleConfig {
                    required: target,
                    placed: edges.len(),
                });
            }
            let (a, b) = if within {
                let block = rng.gen_range(0..config.c);
                let base = block * config.m;
                (
                    base + rng.gen_range(0..config.m),
                    base + rng.gen_range(0..config.m),
                )
            } else {
                let b1 = rng.gen_range(0..config.c);
                let b2 = rng.gen_range(0..config.c);
                if b1 == b2 {
                    continue;
                }
                (
                    b1 * config.m + rng.gen_range(0..config.m),
                    b2 * config.m + rng.gen_range(0..config.m),
                )
            };
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if occupied.insert(key) {
                break key;
            }
        };
        if within {
            within_placed += 1;
        } else {
            between_placed += 1;
        }
        let sign = if within {
            if rng.gen::<f64>() < config.p_minus {
                -1
            } else {
                1
            }
        } else if rng.gen::<f64>() < config.p_plus {
            1
        } else {
            -1
        };
        edges.push((a, b, sign));
    }

    let graph = SignedGraph::from_edges(n, edges, false)?;
    let truth: Vec<usize> = (0..n).map(|i| i / config.m).collect();
    Ok((graph, Partition::from_labels(&truth)))
}

/// Configuration of the block-pair multinomial generator. `pi[k][q]` is the
/// `(positive, negative, null)` probability triple for an edge slot between
/// blocks `k` and `q`; the table must be symmetric and each triple must sum
/// to one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockPairConfig {
    pub block_sizes: Vec<usize>,
    pub pi: Vec<Vec<[f64; 3]>>,
    #[serde(default)]
    pub seed: u64,
}

impl BlockPairConfig {
    pub fn new(block_sizes: Vec<usize>, pi: Vec<Vec<[f64; 3]>>) -> Self {
        BlockPairConfig {
            block_sizes,
            pi,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Four blocks of 32 nodes mixing two communities with two bipartites:
    /// block 1 is a dense positive community, block 2 a sparser one, and
    /// blocks 3 and 4 have nearly empty interiors with strong negative
    /// cross-connections. Block pair (2,4) uses {0.01, 0.4, 0.59}, making
    /// the table symmetric.
    pub fn two_communities_two_bipartites() -> Self {
        let t = |p: f64, m: f64, z: f64| [p, m, z];
        let pi = vec![
            vec![
                t(0.6, 0.1, 0.3),
                t(0.1, 0.2, 0.7),
                t(0.1, 0.2, 0.7),
                t(0.1, 0.2, 0.7),
            ],
            vec![
                t(0.1, 0.2, 0.7),
                t(0.2, 0.1, 0.7),
                t(0.01, 0.4, 0.59),
                t(0.01, 0.4, 0.59),
            ],
            vec![
                t(0.1, 0.2, 0.7),
                t(0.01, 0.4, 0.59),
                t(0.01, 0.01, 0.98),
                t(0.01, 0.4, 0.59),
            ],
            vec![
                t(0.1, 0.2, 0.7),
                t(0.01, 0.4, 0.59),
                t(0.01, 0.4, 0.59),
                t(0.01, 0.01, 0.98),
            ],
        ];
        BlockPairConfig::new(vec![32; 4], pi)
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.block_sizes.len();
        if c == 0 {
            return Err(Error::config("block_sizes", "must name at least one block"));
        }
        if self.block_sizes.iter().any(|&s| s == 0) {
            return Err(Error::config("block_sizes", "block sizes must be positive"));
        }
        if self.pi.len() != c || self.pi.iter().any(|row| row.len() != c) {
            return Err(Error::config("pi", format!("table must be {c}x{c}")));
        }
        for (a, row) in self.pi.iter().enumerate() {
            for (b, triple) in row.iter().enumerate() {
                if triple.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                    return Err(Error::config(
                        "pi",
                        format!("pi[{a}][{b}] has an entry outside [0, 1]"),
                    ));
                }
                let sum: f64 = triple.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(Error::config(
                        "pi",
                        format!("pi[{a}][{b}] sums to {sum}, expected 1"),
                    ));
                }
                if self.pi[b][a] != *triple {
                    return Err(Error::config(
                        "pi",
                        format!("table not symmetric at ({a}, {b})"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Draws each unordered node pair's category once from the triple of its
/// block pair and returns the symmetric graph plus the planted partition.
pub fn generate_block_pair(config: &BlockPairConfig) -> Result<(SignedGraph, Partition)> {
    config.validate()?;
    let n = config.n();
    let mut block_of = Vec::with_capacity(n);
    for (b, &size) in config.block_sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat(b).take(size));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut edges: Vec<(usize, usize, i8)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let triple = &config.pi[block_of[i]][block_of[j]];
            let u = rng.gen::<f64>();
            if u < triple[0] {
                edges.push((i, j, 1));
            } else if u < triple[0] + triple[1] {
                edges.push((i, j, -1));
            }
        }
    }

    let graph = SignedGraph::from_edges(n, edges, false)?;
    Ok((graph, Partition::from_labels(&block_of)))
}
