//! Block-model fitting for signed networks.
//!
//! [`fit`] searches the block space `[k_min, k_max]` in a single pass:
//! component-wise EM sweeps update one block at a time, a clamp on the
//! prior update annihilates blocks whose responsibility mass falls below
//! `c/2`, and a message-length cost selects the best model across the
//! shrinking block count. Restarts are independent and run in parallel.
//!
//! One sweep costs `O(K * (n + m) + n * K^2)` on a graph with `m` edges:
//! connection-triple and evidence updates touch only nonzero entries and a
//! per-block null-category baseline.

mod params;
mod steps;

pub use params::{category, ModelParams, Responsibilities, CATEGORIES};
pub use steps::{
    cost, default_k_max, e_step_row, log_evidence_per_node, m_step_lambda, m_step_phi, PhiUpdate,
};

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Partition, SignedGraph};

use params::CATEGORIES as CATS;
use steps::cost_penalty;

/// Knobs of the learner. `k_max = None` resolves to `floor(sqrt(n))`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitConfig {
    /// Lower bound of the block search space.
    pub k_min: usize,
    /// Upper bound of the block search space; `None` means `floor(sqrt(n))`.
    pub k_max: Option<usize>,
    /// Convergence threshold on the absolute cost decrease per sweep.
    pub epsilon: f64,
    /// Number of independent random restarts; the best cost wins.
    pub restarts: usize,
    /// Master seed; restart `r` draws from ChaCha8 stream `r` of this seed.
    pub seed: u64,
    /// Probability floor applied to every connection-triple entry.
    pub lambda_floor: f64,
    /// Softness of the anchor initialization: each node's initial
    /// responsibility row puts `1 - blend` on its nearest anchor block and
    /// spreads `blend` evenly, and the connection triples start from the
    /// M-step of those rows.
    pub init_blend: f64,
    /// Safety cap on sweeps per block-count regime.
    pub max_sweeps: usize,
    /// Draw the hard assignment from the posterior instead of taking the
    /// per-node argmax.
    pub sample_assignment: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            k_min: 1,
            k_max: None,
            epsilon: 1e-4,
            restarts: 5,
            seed: 0,
            lambda_floor: 1e-10,
            init_blend: 0.7,
            max_sweeps: 500,
            sample_assignment: false,
        }
    }
}

impl FitConfig {
    fn validate(&self, resolved_k_max: usize) -> Result<()> {
        if self.k_min < 1 {
            return Err(Error::config("k_min", "must be at least 1"));
        }
        if resolved_k_max < self.k_min {
            return Err(Error::config(
                "k_max",
                format!("{resolved_k_max} is below k_min = {}", self.k_min),
            ));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::config("epsilon", "must be a positive finite number"));
        }
        if self.restarts < 1 {
            return Err(Error::config("restarts", "must be at least 1"));
        }
        if !(self.lambda_floor > 0.0 && self.lambda_floor <= 1e-3) {
            return Err(Error::config("lambda_floor", "must lie in (0, 1e-3]"));
        }
        if !(0.0..1.0).contains(&self.init_blend) {
            return Err(Error::config("init_blend", "must lie in [0, 1)"));
        }
        if self.max_sweeps < 1 {
            return Err(Error::config("max_sweeps", "must be at least 1"));
        }
        Ok(())
    }
}

/// One sweep's cost record. `converged` marks the sweep on which a regime
/// met the epsilon criterion.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CostPoint {
    pub sweep: usize,
    pub k_ne: usize,
    pub cost: f64,
    pub converged: bool,
}

/// Outcome of [`fit`]: the lowest-cost model seen across every restart and
/// block-count regime.
#[derive(Clone, Debug)]
pub struct FitResult {
    pub best_params: ModelParams,
    pub best_partition: Partition,
    pub best_cost: f64,
    /// Sweep-by-sweep costs of the restart that produced the best model.
    pub cost_trace: Vec<CostPoint>,
    /// Lowest converged cost seen per live block count, across restarts.
    pub per_k_best: BTreeMap<usize, f64>,
    pub seed_used: u64,
    pub wall_time: Duration,
    /// False when some regime hit the sweep cap before meeting epsilon.
    pub converged: bool,
    /// True when some restart lost every block at once and fell back to its
    /// best earlier model.
    pub degenerate: bool,
    /// Total sweeps executed across all restarts.
    pub total_sweeps: usize,
    /// Minimum over converged regimes of (live block mass - k_ne); positive
    /// whenever every surviving block kept more responsibility mass than
    /// the live block count.
    pub resolution_margin: f64,
}

impl FitResult {
    /// Number of blocks actually used by the best hard partition.
    pub fn k_found(&self) -> usize {
        self.best_partition.k()
    }
}

/// Flat signed neighbor lists; lets the sweep kernels touch only nonzero
/// entries.
struct GraphCtx {
    n: usize,
    row_pos: Vec<Vec<u32>>,
    row_neg: Vec<Vec<u32>>,
}

impl GraphCtx {
    fn build(graph: &SignedGraph) -> Self {
        let n = graph.n();
        let mut row_pos = vec![Vec::new(); n];
        let mut row_neg = vec![Vec::new(); n];
        for i in 0..n {
            for (j, s) in graph.row(i) {
                if s > 0 {
                    row_pos[i].push(j as u32);
                } else {
                    row_neg[i].push(j as u32);
                }
            }
        }
        GraphCtx { n, row_pos, row_neg }
    }
}

/// Recomputes block `k`'s log evidence for every node from its connection
/// triples: a null-category baseline plus corrections on nonzero entries.
fn refresh_log_u_column(
    ctx: &GraphCtx,
    lambda_block: &[f64],
    k: usize,
    k_max: usize,
    log_u: &mut [f64],
    ln_lambda: &mut [f64],
) {
    let n = ctx.n;
    for (dst, src) in ln_lambda.iter_mut().zip(lambda_block) {
        *dst = src.ln();
    }
    let base: f64 = (0..n).map(|j| ln_lambda[j * CATS + 2]).sum();
    for i in 0..n {
        let mut v = base - ln_lambda[i * CATS + 2];
        for &j in &ctx.row_pos[i] {
            let j = j as usize;
            v += ln_lambda[j * CATS] - ln_lambda[j * CATS + 2];
        }
        for &j in &ctx.row_neg[i] {
            let j = j as usize;
            v += ln_lambda[j * CATS + 1] - ln_lambda[j * CATS + 2];
        }
        log_u[i * k_max + k] = v;
    }
}

/// In-place connection-triple update for block `k`; mirrors
/// [`m_step_lambda`] but writes into the params tensor and reuses
/// accumulator buffers.
fn lambda_kernel(
    ctx: &GraphCtx,
    zeta: &Responsibilities,
    k: usize,
    floor: f64,
    out: &mut [f64],
    acc_pos: &mut [f64],
    acc_neg: &mut [f64],
) {
    let n = ctx.n;
    acc_pos.fill(0.0);
    acc_neg.fill(0.0);
    let mut mass = 0.0;
    for i in 0..n {
        let z = zeta.entry(i, k);
        if z == 0.0 {
            continue;
        }
        mass += z;
        for &j in &ctx.row_pos[i] {
            acc_pos[j as usize] += z;
        }
        for &j in &ctx.row_neg[i] {
            acc_neg[j as usize] += z;
        }
    }
    for j in 0..n {
        let denom = mass - zeta.entry(j, k);
        let (p, m, z) = if denom <= 0.0 {
            (0.0, 0.0, 1.0)
        } else {
            (
                acc_pos[j] / denom,
                acc_neg[j] / denom,
                (denom - acc_pos[j] - acc_neg[j]) / denom,
            )
        };
        out[j * CATS] = p.max(floor);
        out[j * CATS + 1] = m.max(floor);
        out[j * CATS + 2] = z.max(floor);
    }
}

/// Posterior refresh of column `k` against the current prior and evidence.
fn refresh_zeta_column(
    params: &ModelParams,
    log_u: &[f64],
    zeta: &mut Responsibilities,
    k: usize,
) {
    let k_max = params.k_max();
    let live = params.live_blocks();
    let log_phi: Vec<f64> = live.iter().map(|&l| params.phi()[l].ln()).collect();
    let n = zeta.n();
    for i in 0..n {
        let row_u = &log_u[i * k_max..(i + 1) * k_max];
        let mut max = f64::NEG_INFINITY;
        for (&l, &lp) in live.iter().zip(&log_phi) {
            let t = lp + row_u[l];
            if t > max {
                max = t;
            }
        }
        let mut denom = 0.0;
        let mut numer = 0.0;
        for (&l, &lp) in live.iter().zip(&log_phi) {
            let e = (lp + row_u[l] - max).exp();
            denom += e;
            if l == k {
                numer = e;
            }
        }
        zeta.row_mut(i)[k] = numer / denom;
    }
}

/// Full posterior refresh of every row; used once per start to seed the
/// responsibilities.
fn full_e_step(params: &ModelParams, log_u: &[f64], zeta: &mut Responsibilities) {
    let k_max = params.k_max();
    let live = params.live_blocks();
    let log_phi: Vec<f64> = live.iter().map(|&l| params.phi()[l].ln()).collect();
    for i in 0..zeta.n() {
        let row_u = &log_u[i * k_max..(i + 1) * k_max];
        let row = zeta.row_mut(i);
        row.fill(0.0);
        let mut max = f64::NEG_INFINITY;
        for (&l, &lp) in live.iter().zip(&log_phi) {
            let t = lp + row_u[l];
            if t > max {
                max = t;
            }
        }
        let mut denom = 0.0;
        for (&l, &lp) in live.iter().zip(&log_phi) {
            let e = (lp + row_u[l] - max).exp();
            row[l] = e;
            denom += e;
        }
        for z in row.iter_mut() {
            *z /= denom;
        }
    }
}

/// Rescales every row to sum to one. Column refreshes against moving
/// parameters leave a drift that this clears at sweep boundaries.
fn renormalize_rows(zeta: &mut Responsibilities) {
    for i in 0..zeta.n() {
        let row = zeta.row_mut(i);
        let sum: f64 = row.iter().sum();
        if sum > 0.0 {
            for z in row.iter_mut() {
                *z /= sum;
            }
        }
    }
}

/// Negative mixture log-likelihood from cached evidence plus the model code
/// length.
fn cost_from_log_u(params: &ModelParams, log_u: &[f64]) -> f64 {
    let k_max = params.k_max();
    let live = params.live_blocks();
    let log_phi: Vec<f64> = live.iter().map(|&l| params.phi()[l].ln()).collect();
    let mut neg_log_like = 0.0;
    for i in 0..params.n() {
        let row_u = &log_u[i * k_max..(i + 1) * k_max];
        let mut max = f64::NEG_INFINITY;
        for (&l, &lp) in live.iter().zip(&log_phi) {
            let t = lp + row_u[l];
            if t > max {
                max = t;
            }
        }
        let sum: f64 = live
            .iter()
            .zip(&log_phi)
            .map(|(&l, &lp)| (lp + row_u[l] - max).exp())
            .sum();
        neg_log_like -= max + sum.ln();
    }
    neg_log_like + cost_penalty(params)
}

/// Argmax (or posterior-sampled) hard assignment, labels compacted.
fn hard_partition(
    zeta: &Responsibilities,
    sample: bool,
    rng: &mut ChaCha8Rng,
) -> Partition {
    let mut labels = Vec::with_capacity(zeta.n());
    for i in 0..zeta.n() {
        let row = zeta.row(i);
        let pick = if sample {
            let u: f64 = rng.gen();
            let mut cum = 0.0;
            let mut chosen = row.len() - 1;
            for (k, &z) in row.iter().enumerate() {
                cum += z;
                if u < cum {
                    chosen = k;
                    break;
                }
            }
            chosen
        } else {
            let mut best = 0;
            let mut best_val = f64::NEG_INFINITY;
            for (k, &z) in row.iter().enumerate() {
                if z > best_val {
                    best_val = z;
                    best = k;
                }
            }
            best
        };
        labels.push(pick);
    }
    Partition::from_labels(&labels)
}

struct BestModel {
    cost: f64,
    params: ModelParams,
    partition: Partition,
}

struct StartOutcome {
    best: Option<BestModel>,
    trace: Vec<CostPoint>,
    per_k: BTreeMap<usize, f64>,
    hit_cap: bool,
    degenerate: bool,
    sweeps: usize,
    margin: f64,
}

/// One component-wise sweep over every live block: posterior column
/// refresh, the block's own prior update with the annihilation clamp, then
/// connection-triple and evidence refresh when it survives.
///
/// Each block's life-or-death verdict happens at its own turn, right after
/// its column refresh; other blocks keep their prior mass (renormalized)
/// until their turn comes. Killing blocks in bulk from stale column sums
/// collapses the search long before the survivors can specialize.
fn sweep_once(
    ctx: &GraphCtx,
    lambda_floor: f64,
    params: &mut ModelParams,
    zeta: &mut Responsibilities,
    log_u: &mut [f64],
    ln_lambda: &mut [f64],
    acc_pos: &mut [f64],
    acc_neg: &mut [f64],
) -> Result<()> {
    let k_max = params.k_max();
    let n = ctx.n as f64;
    for k in 0..k_max {
        if params.phi()[k] <= 0.0 {
            continue;
        }
        refresh_zeta_column(params, log_u, zeta, k);
        // Survival gate: the resolution-limit scale c/2 = K_ne, floored by
        // the fair share a block would hold if one more block were live.
        // The floor keeps the gate binding through the descent, so
        // half-split twins and residual micro-blocks are retired instead of
        // being recorded; a uniform split into K_ne blocks always clears it.
        // The weights of surviving blocks use the plain c/2 shrinkage, which
        // is the exact maximizer the cost's prior term corresponds to.
        let c = params.c();
        let gate = (c / 2.0).max(n / (params.k_ne() as f64 + 1.0));
        let sums = zeta.column_sums();
        if sums[k] <= gate {
            if params.k_ne() == 1 {
                return Err(Error::DegenerateModel);
            }
            params.annihilate(k);
            params.set_c(2.0 * params.k_ne() as f64);
            zeta.zero_columns_and_renormalize(&[k]);
            continue;
        }
        let clamped = (sums[k] - c / 2.0).max(0.0);
        let denom: f64 = sums.iter().map(|&s| (s - c / 2.0).max(0.0)).sum();
        let mut phi = params.phi().to_vec();
        phi[k] = clamped / denom;
        let total: f64 = phi.iter().sum();
        for p in phi.iter_mut() {
            *p /= total;
        }
        params.set_phi(phi);
        lambda_kernel(ctx, zeta, k, lambda_floor, params.lambda_block_mut(k), acc_pos, acc_neg);
        refresh_log_u_column(ctx, params.lambda_block(k), k, k_max, log_u, ln_lambda);
    }
    renormalize_rows(zeta);
    Ok(())
}

/// Initial parameters seeded from spread anchor nodes.
///
/// Draws `k_max` anchors by distance-squared weighting on signed adjacency
/// rows (the k-means++ rule), assigns every node to its nearest anchor with
/// uniform random tie-breaking, softens the assignment rows with `blend`
/// uniform mass, and takes each block's connection triples from the M-step
/// of those rows. Spreading the anchors puts an initial claimant on every
/// well-separated group, which a plain uniform assignment often misses on
/// networks whose structure lives in edge density rather than edge sign.
fn anchor_init(
    ctx: &GraphCtx,
    k_max: usize,
    config: &FitConfig,
    rng: &mut ChaCha8Rng,
) -> ModelParams {
    let n = ctx.n;
    let blend = config.init_blend;

    // dist2[i][a] = squared distance between rows i and a with each entry
    // one-hot encoded by category: a one-sided edge counts 1, disagreeing
    // signs count 2. Shared neighbors pull nodes together even when signs
    // are uninformative, and sign agreement tightens it further.
    let mut dist2 = vec![0.0f64; n * k_max];
    let mut min_dist2 = vec![f64::INFINITY; n];
    let mut anchor_signs = vec![0i8; n];
    let degree: Vec<f64> = (0..n)
        .map(|i| (ctx.row_pos[i].len() + ctx.row_neg[i].len()) as f64)
        .collect();

    for a_idx in 0..k_max {
        // First anchor uniform; later ones weighted by current min dist2.
        let anchor = if a_idx == 0 {
            rng.gen_range(0..n)
        } else {
            let total: f64 = min_dist2.iter().sum();
            if total <= 0.0 {
                rng.gen_range(0..n)
            } else {
                let mut target = rng.gen::<f64>() * total;
                let mut chosen = n - 1;
                for (i, &w) in min_dist2.iter().enumerate() {
                    target -= w;
                    if target < 0.0 {
                        chosen = i;
                        break;
                    }
                }
                chosen
            }
        };
        anchor_signs.fill(0);
        for &j in &ctx.row_pos[anchor] {
            anchor_signs[j as usize] = 1;
        }
        for &j in &ctx.row_neg[anchor] {
            anchor_signs[j as usize] = -1;
        }
        for i in 0..n {
            let mut same = 0.0;
            let mut opposite = 0.0;
            for &j in &ctx.row_pos[i] {
                match anchor_signs[j as usize] {
                    1 => same += 1.0,
                    -1 => opposite += 1.0,
                    _ => {}
                }
            }
            for &j in &ctx.row_neg[i] {
                match anchor_signs[j as usize] {
                    -1 => same += 1.0,
                    1 => opposite += 1.0,
                    _ => {}
                }
            }
            let common = same + opposite;
            let d2 = degree[i] + degree[anchor] - 2.0 * common + 2.0 * opposite;
            dist2[i * k_max + a_idx] = d2;
            if d2 < min_dist2[i] {
                min_dist2[i] = d2;
            }
        }
    }

    let mut zeta = Responsibilities::new_zero(n, k_max);
    let mut nearest = Vec::with_capacity(k_max);
    for i in 0..n {
        let row_d = &dist2[i * k_max..(i + 1) * k_max];
        let best = row_d.iter().cloned().fold(f64::INFINITY, f64::min);
        nearest.clear();
        nearest.extend(
            row_d
                .iter()
                .enumerate()
                .filter(|(_, &d)| d == best)
                .map(|(a, _)| a),
        );
        let pick = nearest[rng.gen_range(0..nearest.len())];
        let row = zeta.row_mut(i);
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = blend / k_max as f64 + if k == pick { 1.0 - blend } else { 0.0 };
        }
    }

    let mut lambda = vec![0.0; k_max * n * CATS];
    let mut acc_pos = vec![0.0; n];
    let mut acc_neg = vec![0.0; n];
    for k in 0..k_max {
        lambda_kernel(
            ctx,
            &zeta,
            k,
            config.lambda_floor,
            &mut lambda[k * n * CATS..(k + 1) * n * CATS],
            &mut acc_pos,
            &mut acc_neg,
        );
    }
    let phi = vec![1.0 / k_max as f64; k_max];
    ModelParams::from_parts(n, phi, lambda, 2.0 * k_max as f64)
        .expect("anchor init produces valid parameters")
}

fn run_start(
    ctx: &GraphCtx,
    config: &FitConfig,
    mut params: ModelParams,
    rng: &mut ChaCha8Rng,
) -> StartOutcome {
    let n = ctx.n;
    let k_max = params.k_max();
    params.set_c(2.0 * params.k_ne() as f64);

    let mut log_u = vec![0.0; n * k_max];
    let mut ln_lambda = vec![0.0; n * CATS];
    for k in params.live_blocks() {
        refresh_log_u_column(ctx, params.lambda_block(k), k, k_max, &mut log_u, &mut ln_lambda);
    }
    let mut zeta = Responsibilities::new_zero(n, k_max);
    full_e_step(&params, &log_u, &mut zeta);
    let mut acc_pos = vec![0.0; n];
    let mut acc_neg = vec![0.0; n];

    let mut outcome = StartOutcome {
        best: None,
        trace: Vec::new(),
        per_k: BTreeMap::new(),
        hit_cap: false,
        degenerate: false,
        sweeps: 0,
        margin: f64::INFINITY,
    };
    let mut global_sweep = 0usize;

    'regimes: loop {
        let mut prev = f64::INFINITY;
        let mut current = f64::INFINITY;
        let mut regime_converged = false;
        for _ in 0..config.max_sweeps {
            let stepped = sweep_once(
                ctx,
                config.lambda_floor,
                &mut params,
                &mut zeta,
                &mut log_u,
                &mut ln_lambda,
                &mut acc_pos,
                &mut acc_neg,
            );
            if let Err(Error::DegenerateModel) = stepped {
                outcome.degenerate = true;
                break 'regimes;
            }
            current = cost_from_log_u(&params, &log_u);
            global_sweep += 1;
            outcome.sweeps += 1;
            let converged_now = prev - current < config.epsilon;
            outcome.trace.push(CostPoint {
                sweep: global_sweep,
                k_ne: params.k_ne(),
                cost: current,
                converged: converged_now,
            });
            if converged_now {
                regime_converged = true;
                break;
            }
            prev = current;
        }
        if !regime_converged {
            outcome.hit_cap = true;
        }

        let k_ne = params.k_ne();
        let sums = zeta.column_sums();
        let regime_margin = params
            .live_blocks()
            .iter()
            .map(|&k| sums[k] - k_ne as f64)
            .fold(f64::INFINITY, f64::min);
        outcome.margin = outcome.margin.min(regime_margin);
        outcome
            .per_k
            .entry(k_ne)
            .and_modify(|c| *c = c.min(current))
            .or_insert(current);
        if outcome.best.as_ref().map_or(true, |b| current < b.cost) {
            outcome.best = Some(BestModel {
                cost: current,
                params: params.clone(),
                partition: hard_partition(&zeta, config.sample_assignment, rng),
            });
        }

        if k_ne <= config.k_min {
            break;
        }
        // Forced annihilation: drop the lightest live block so the search
        // keeps moving toward k_min even when the clamp retires nothing.
        let victim = params
            .live_blocks()
            .into_iter()
            .min_by(|&a, &b| {
                params.phi()[a]
                    .partial_cmp(&params.phi()[b])
                    .unwrap()
                    .then(a.cmp(&b))
            })
            .expect("at least one live block");
        params.annihilate(victim);
        params.set_c(2.0 * params.k_ne() as f64);
        zeta.zero_columns_and_renormalize(&[victim]);
    }

    outcome
}

/// Fits the block model, sweeping the block space from `k_max` down to
/// `k_min` within each restart and returning the lowest-cost model across
/// all of them. Errors with [`Error::DegenerateModel`] only when no restart
/// managed to record any model.
pub fn fit(graph: &SignedGraph, config: &FitConfig) -> Result<FitResult> {
    let started = Instant::now();
    let n = graph.n();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 nodes to fit, got {n}"
        )));
    }
    let k_max = config.k_max.unwrap_or_else(|| default_k_max(n));
    config.validate(k_max)?;
    let ctx = GraphCtx::build(graph);

    let outcomes: Vec<StartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            let init = anchor_init(&ctx, k_max, config, &mut rng);
            run_start(&ctx, config, init, &mut rng)
        })
        .collect();

    merge_outcomes(outcomes, config.seed, started.elapsed())
}

/// Runs a single start from explicit initial parameters. Used for warm
/// starts and for checking symmetry properties of the updates.
pub fn fit_from(
    graph: &SignedGraph,
    config: &FitConfig,
    initial: ModelParams,
) -> Result<FitResult> {
    let started = Instant::now();
    let n = graph.n();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 nodes to fit, got {n}"
        )));
    }
    if initial.n() != n {
        return Err(Error::LengthMismatch {
            left: initial.n(),
            right: n,
        });
    }
    config.validate(initial.k_max())?;
    let ctx = GraphCtx::build(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let outcome = run_start(&ctx, config, initial, &mut rng);
    merge_outcomes(vec![outcome], config.seed, started.elapsed())
}

fn merge_outcomes(
    outcomes: Vec<StartOutcome>,
    seed: u64,
    wall_time: Duration,
) -> Result<FitResult> {
    let mut best_at: Option<usize> = None;
    for (r, o) in outcomes.iter().enumerate() {
        if let Some(b) = &o.best {
            let better = match best_at {
                None => true,
                Some(prev) => b.cost < outcomes[prev].best.as_ref().unwrap().cost,
            };
            if better {
                best_at = Some(r);
            }
        }
    }
    let best_at = best_at.ok_or(Error::DegenerateModel)?;

    let mut per_k_best: BTreeMap<usize, f64> = BTreeMap::new();
    for o in &outcomes {
        for (&k, &c) in &o.per_k {
            per_k_best
                .entry(k)
                .and_modify(|v| *v = v.min(c))
                .or_insert(c);
        }
    }
    let converged = outcomes.iter().all(|o| !o.hit_cap);
    let degenerate = outcomes.iter().any(|o| o.degenerate);
    let total_sweeps = outcomes.iter().map(|o| o.sweeps).sum();
    let resolution_margin = outcomes.iter().map(|o| o.margin).fold(f64::INFINITY, f64::min);
    let trace = outcomes[best_at].trace.clone();
    let best = outcomes
        .into_iter()
        .nth(best_at)
        .and_then(|o| o.best)
        .expect("validated above");

    Ok(FitResult {
        best_cost: best.cost,
        best_params: best.params,
        best_partition: best.partition,
        cost_trace: trace,
        per_k_best,
        seed_used: seed,
        wall_time,
        converged,
        degenerate,
        total_sweeps,
        resolution_margin,
    })
}
