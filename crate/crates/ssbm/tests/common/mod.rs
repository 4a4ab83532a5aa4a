//! Shared oracles for the integration and acceptance suites.
//!
//! Everything here re-derives the learner's quantities through an
//! independent route: exact rational arithmetic for the posterior and the
//! update formulas, bit-shifted big-rational logarithms plus compensated
//! summation for the cost, and hash-map counting for NMI. None of it calls
//! into the implementation paths it checks.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssbm::{category, ModelParams, Responsibilities, SignedGraph};

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// ln of a positive big rational, exact up to f64 rounding: both sides are
/// shifted down to at most 512 bits before conversion.
pub fn ln_big_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "ln of non-positive rational");
    let shift_of = |x: &BigInt| -> u64 { x.bits().saturating_sub(512) };
    let sn = shift_of(r.numer());
    let sd = shift_of(r.denom());
    let nf = (r.numer() >> sn).to_f64().expect("shifted numerator fits");
    let df = (r.denom() >> sd).to_f64().expect("shifted denominator fits");
    nf.ln() - df.ln() + (sn as f64 - sd as f64) * std::f64::consts::LN_2
}

/// Exact per-node block evidence: prod over j != i of lambda[k][j][cat].
pub fn evidence_oracle(graph: &SignedGraph, params: &ModelParams, i: usize, k: usize) -> BigRational {
    let mut product = rat(1.0);
    for j in 0..graph.n() {
        if j != i {
            product *= rat(params.lambda(k, j)[category(graph.entry(i, j))]);
        }
    }
    product
}

/// Exact posterior row of node i over live blocks.
pub fn e_step_row_oracle(graph: &SignedGraph, params: &ModelParams, i: usize) -> Vec<BigRational> {
    let mut weights = vec![BigRational::zero(); params.k_max()];
    for k in params.live_blocks() {
        weights[k] = rat(params.phi()[k]) * evidence_oracle(graph, params, i, k);
    }
    let total: BigRational = weights.iter().cloned().sum();
    weights.into_iter().map(|w| w / total.clone()).collect()
}

/// Exact prior update: phi[k] proportional to max(0, colsum_k - c/2), and
/// the set of columns clamped to zero. `None` when every block clamps at
/// once (the degenerate case the implementation reports as an error).
pub fn phi_update_oracle(
    zeta: &Responsibilities,
    c: f64,
) -> Option<(Vec<BigRational>, Vec<usize>)> {
    let half_c = rat(c) / rat(2.0);
    let k_max = zeta.k_max();
    let mut sums = vec![BigRational::zero(); k_max];
    for i in 0..zeta.n() {
        for (k, sum) in sums.iter_mut().enumerate() {
            *sum += rat(zeta.entry(i, k));
        }
    }
    let numerators: Vec<BigRational> = sums
        .iter()
        .map(|s| {
            let shifted = s - half_c.clone();
            if shifted.is_positive() {
                shifted
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let total: BigRational = numerators.iter().cloned().sum();
    if total.is_zero() {
        return None;
    }
    let annihilated = (0..k_max)
        .filter(|&k| sums[k].is_positive() && numerators[k].is_zero())
        .collect();
    let phi = numerators.into_iter().map(|m| m / total.clone()).collect();
    Some((phi, annihilated))
}

/// Exact connection-triple update for block k: responsibility-weighted
/// category fractions over rows i != j, clamped to the floor.
pub fn lambda_update_oracle(
    graph: &SignedGraph,
    zeta: &Responsibilities,
    k: usize,
    floor: f64,
) -> Vec<[BigRational; 3]> {
    let n = graph.n();
    let floor = rat(floor);
    let mass: BigRational = (0..n).map(|i| rat(zeta.entry(i, k))).sum();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let denom = mass.clone() - rat(zeta.entry(j, k));
        let mut triple = [
            BigRational::zero(),
            BigRational::zero(),
            rat(1.0),
        ];
        if denom.is_positive() {
            let mut counts = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
            for i in 0..n {
                if i != j {
                    counts[category(graph.entry(i, j))] += rat(zeta.entry(i, k));
                }
            }
            for h in 0..3 {
                triple[h] = counts[h].clone() / denom.clone();
            }
        }
        for slot in triple.iter_mut() {
            if *slot < floor {
                *slot = floor.clone();
            }
        }
        out.push(triple);
    }
    out
}

/// Cost oracle: exact rational mixture weights per node, logs taken with
/// [`ln_big_rational`], accumulated with Neumaier compensation, plus the
/// penalty terms evaluated directly.
pub fn cost_oracle(graph: &SignedGraph, params: &ModelParams) -> f64 {
    let n = graph.n();
    let mut total = 0.0f64;
    let mut compensation = 0.0f64;
    let add = |value: f64, total: &mut f64, comp: &mut f64| {
        let t = *total + value;
        if total.abs() >= value.abs() {
            *comp += (*total - t) + value;
        } else {
            *comp += (value - t) + *total;
        }
        *total = t;
    };
    for i in 0..n {
        let mut mixture = BigRational::zero();
        for k in params.live_blocks() {
            mixture += rat(params.phi()[k]) * evidence_oracle(graph, params, i, k);
        }
        add(-ln_big_rational(&mixture), &mut total, &mut compensation);
    }
    let neg_log_like = total + compensation;

    let k_ne = params.k_ne() as f64;
    let c = params.c();
    let half_dim = k_ne * (c + 1.0) / 2.0;
    let one_plus_log_kappa = -(2.0 * std::f64::consts::PI).ln();
    let prior: f64 = params
        .live_blocks()
        .iter()
        .map(|&k| params.phi()[k].ln())
        .sum();
    neg_log_like + half_dim * (n as f64).ln() + (c / 2.0) * prior + half_dim * one_plus_log_kappa
}

/// Independent NMI from raw label vectors: hash-map joint and marginal
/// counts, then the confusion-matrix ratio.
pub fn nmi_bruteforce(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let total = a.len() as f64;
    let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
    let mut left: HashMap<usize, f64> = HashMap::new();
    let mut right: HashMap<usize, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_insert(0.0) += 1.0;
        *left.entry(x).or_insert(0.0) += 1.0;
        *right.entry(y).or_insert(0.0) += 1.0;
    }
    let numerator: f64 = joint
        .iter()
        .map(|(&(x, y), &m)| -2.0 * m * (m * total / (left[&x] * right[&y])).ln())
        .sum();
    let denominator: f64 = left.values().map(|&m| m * (m / total).ln()).sum::<f64>()
        + right.values().map(|&m| m * (m / total).ln()).sum::<f64>();
    if denominator == 0.0 {
        1.0
    } else {
        numerator / denominator
    }
}

/// Random Bernoulli signed graph for oracle and robustness tests.
pub fn random_signed_graph(n: usize, edge_p: f64, neg_p: f64, seed: u64) -> SignedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < edge_p {
                let sign = if rng.gen::<f64>() < neg_p { -1 } else { 1 };
                edges.push((i, j, sign));
            }
        }
    }
    SignedGraph::from_edges(n, edges, false).expect("valid random graph")
}

/// Random row-normalized responsibilities.
pub fn random_zeta(n: usize, k_max: usize, seed: u64) -> Responsibilities {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let raw: Vec<f64> = (0..k_max).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let sum: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / sum).collect()
        })
        .collect();
    Responsibilities::from_rows(&rows).expect("normalized rows")
}

/// Random valid model parameters (plain flat-Dirichlet triples).
pub fn random_params(n: usize, k_max: usize, seed: u64) -> ModelParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ModelParams::random_init(n, k_max, 1e-10, 1.0, &mut rng)
}

pub fn relative_gap(actual: f64, expected: f64) -> f64 {
    (actual - expected).abs() / expected.abs().max(1e-300)
}
