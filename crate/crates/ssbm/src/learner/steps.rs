//! Single E-step / M-step / cost operations of the block learner.
//!
//! These are the building blocks that [`crate::learner::fit`] composes into
//! component-wise sweeps; they are exposed separately so each one can be
//! checked against independent oracles.

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::numeric::{log_sum_exp, softmax_in_place};

use super::params::{category, ModelParams, Responsibilities, CATEGORIES};

/// Default upper bound of the block search space: floor(sqrt(n)), at least 1.
pub fn default_k_max(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r > 1 && r * r > n {
        r -= 1;
    }
    r.max(1)
}

/// Log evidence of node `i` under block `k`: the summed log probability of
/// every observed edge category of `i` against the block's connection
/// triples, skipping the diagonal.
pub fn log_evidence_per_node(
    graph: &SignedGraph,
    params: &ModelParams,
    i: usize,
    k: usize,
) -> f64 {
    let n = graph.n();
    let lam = params.lambda_block(k);
    let null_at = |j: usize| lam[j * CATEGORIES + 2];
    let mut total = 0.0;
    for j in 0..n {
        if j != i {
            total += null_at(j).ln();
        }
    }
    // Swap the null term for the observed category on nonzero entries.
    for (j, s) in graph.row(i) {
        total += lam[j * CATEGORIES + category(s)].ln() - null_at(j).ln();
    }
    total
}

/// Posterior block memberships of node `i`: proportional to
/// `phi[k] * evidence(i, k)` over live blocks, normalized in the log domain.
/// Annihilated blocks receive an exact zero.
pub fn e_step_row(graph: &SignedGraph, params: &ModelParams, i: usize) -> Vec<f64> {
    let mut row = vec![f64::NEG_INFINITY; params.k_max()];
    for k in params.live_blocks() {
        row[k] = params.phi()[k].ln() + log_evidence_per_node(graph, params, i, k);
    }
    softmax_in_place(&mut row);
    row
}

/// Result of a prior update: the new `phi` vector and the blocks whose mass
/// was clamped to zero by it.
#[derive(Clone, Debug)]
pub struct PhiUpdate {
    pub phi: Vec<f64>,
    pub annihilated: Vec<usize>,
}

/// Prior update with annihilation: `phi[k]` is proportional to
/// `max(0, column_sum(k) - c/2)`, renormalized over the surviving blocks.
/// Columns clamped to zero are zeroed in `zeta` and the rows renormalized.
/// Blocks whose columns were already identically zero stay dead without
/// being reported again. Errors with [`Error::DegenerateModel`] when every
/// live block clamps to zero at once.
pub fn m_step_phi(zeta: &mut Responsibilities, c: f64) -> Result<PhiUpdate> {
    let sums = zeta.column_sums();
    let numerators: Vec<f64> = sums.iter().map(|&s| (s - c / 2.0).max(0.0)).collect();
    let total: f64 = numerators.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateModel);
    }
    let mut phi: Vec<f64> = numerators.iter().map(|&m| m / total).collect();
    // Guard against drift from the division.
    let norm: f64 = phi.iter().sum();
    for p in phi.iter_mut() {
        *p /= norm;
    }
    let annihilated: Vec<usize> = (0..phi.len())
        .filter(|&k| sums[k] > 0.0 && numerators[k] == 0.0)
        .collect();
    zeta.zero_columns_and_renormalize(&annihilated);
    Ok(PhiUpdate { phi, annihilated })
}

/// Connection-triple update for block `k`: per node `j`, the
/// responsibility-weighted fractions of positive / negative / null entries
/// in column `j` over rows `i != j`, each entry then clamped to
/// `lambda_floor`. Errors when the block carries no responsibility mass.
pub fn m_step_lambda(
    graph: &SignedGraph,
    zeta: &Responsibilities,
    k: usize,
    lambda_floor: f64,
) -> Result<Vec<[f64; 3]>> {
    let n = graph.n();
    let mass = zeta.column_sum(k);
    if mass <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "block {k} has zero responsibility mass; annihilate it instead"
        )));
    }
    let mut pos = vec![0.0f64; n];
    let mut neg = vec![0.0f64; n];
    for i in 0..n {
        let z = zeta.entry(i, k);
        if z == 0.0 {
            continue;
        }
        for (j, s) in graph.row(i) {
            if s > 0 {
                pos[j] += z;
            } else {
                neg[j] += z;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let denom = mass - zeta.entry(j, k);
        let triple = if denom <= 0.0 {
            [0.0, 0.0, 1.0]
        } else {
            [
                pos[j] / denom,
                neg[j] / denom,
                (denom - pos[j] - neg[j]) / denom,
            ]
        };
        out.push([
            triple[0].max(lambda_floor),
            triple[1].max(lambda_floor),
            triple[2].max(lambda_floor),
        ]);
    }
    Ok(out)
}

/// Model cost: the negative mixture log-likelihood of the adjacency plus the
/// model code length, which is a block-count penalty `K_ne*(c+1)/2 * ln n`,
/// the prior term `c/2 * sum(ln phi)` over live blocks, and the quantization
/// constant `K_ne*(c+1)/2 * (1 + ln kappa)` with `kappa = 1/(2*pi*e)`.
pub fn cost(graph: &SignedGraph, params: &ModelParams) -> f64 {
    let n = graph.n();
    let live = params.live_blocks();
    let log_phi: Vec<f64> = live.iter().map(|&k| params.phi()[k].ln()).collect();
    let mut neg_log_like = 0.0;
    let mut terms = vec![0.0; live.len()];
    for i in 0..n {
        for (slot, (&k, &lp)) in terms.iter_mut().zip(live.iter().zip(&log_phi)) {
            *slot = lp + log_evidence_per_node(graph, params, i, k);
        }
        neg_log_like -= log_sum_exp(&terms);
    }
    neg_log_like + cost_penalty(params)
}

/// The model-code-length part of [`cost`], shared with the sweep loop.
pub(crate) fn cost_penalty(params: &ModelParams) -> f64 {
    let k_ne = params.k_ne() as f64;
    let c = params.c();
    let half_dim = k_ne * (c + 1.0) / 2.0;
    let one_plus_log_kappa = -(2.0 * std::f64::consts::PI).ln();
    let prior: f64 = params
        .live_blocks()
        .iter()
        .map(|&k| params.phi()[k].ln())
        .sum();
    half_dim * (params.n() as f64).ln() + (c / 2.0) * prior + half_dim * one_plus_log_kappa
}
