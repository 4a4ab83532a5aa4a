//! The four harness commands and their on-disk record formats.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::eval::nmi;
use crate::graph::{
    load_edge_list_with_stats, load_partition_pairs, write_edge_list, write_partition, Partition,
};
use crate::learner::{fit, CostPoint, FitConfig, FitResult};
use crate::numeric::median;
use crate::synth::{generate_block_pair, generate_sg};

use super::config::{
    fit_seed, parse_generate_config, parse_suite_config, point_seed, Family, SweepDoc,
};

/// Self-describing record of one harness run: rerunning with the same
/// config, input digest, and seed reproduces the same metrics.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub tool_version: String,
    pub timestamp_ms: u64,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generation: Option<GenerationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<serde_json::Value>,
}

impl RunRecord {
    fn new(command: &str, seed: Option<u64>, config: serde_json::Value) -> Self {
        RunRecord {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
            seed,
            config,
            input_digest: None,
            generation: None,
            fit: None,
            metrics: None,
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("record serializes");
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Serialize)]
pub struct GenerationSummary {
    pub family: String,
    pub n: usize,
    pub edges: usize,
    pub positive_edges: usize,
    pub negative_edges: usize,
    pub k_true: usize,
    pub edge_file: String,
    pub truth_file: String,
}

/// Serialized view of a [`FitResult`]; `phi` lists the live blocks' prior
/// mass in ascending internal order.
#[derive(Debug, Serialize, Deserialize)]
pub struct FitSummary {
    pub k_found: usize,
    pub assignment: Vec<usize>,
    pub node_labels: Vec<String>,
    pub phi: Vec<f64>,
    pub best_cost: f64,
    pub cost_trace: Vec<CostPoint>,
    pub per_k_best: BTreeMap<usize, f64>,
    pub wall_time_ms: f64,
    pub seed: u64,
    pub converged: bool,
    pub degenerate: bool,
    pub total_sweeps: usize,
    pub resolution_margin: f64,
}

impl FitSummary {
    pub fn from_result(result: &FitResult, node_labels: Vec<String>) -> Self {
        let phi: Vec<f64> = result
            .best_params
            .live_blocks()
            .into_iter()
            .map(|k| result.best_params.phi()[k])
            .collect();
        FitSummary {
            k_found: result.k_found(),
            assignment: result.best_partition.assignment().to_vec(),
            node_labels,
            phi,
            best_cost: result.best_cost,
            cost_trace: result.cost_trace.clone(),
            per_k_best: result.per_k_best.clone(),
            wall_time_ms: result.wall_time.as_secs_f64() * 1e3,
            seed: result.seed_used,
            converged: result.converged,
            degenerate: result.degenerate,
            total_sweeps: result.total_sweeps,
            resolution_margin: result.resolution_margin,
        }
    }
}

fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn config_echo<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("config serializes")
}

/// `generate`: read a family config, generate the network, and write the
/// edge list, planted partition, and a manifest into `out_dir`.
pub fn cmd_generate(config_path: &Path, out_dir: &Path, seed: Option<u64>) -> Result<RunRecord> {
    let family = parse_generate_config(&read_to_string(config_path)?)?;
    let family = match seed {
        Some(s) => family.with_seed(s),
        None => family,
    };
    let (graph, truth) = match &family {
        Family::Sg(cfg) => generate_sg(cfg)?,
        Family::BlockPair(cfg) => generate_block_pair(cfg)?,
    };

    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let edge_path = out_dir.join("edges.txt");
    let truth_path = out_dir.join("truth.txt");
    write_edge_list(&graph, &edge_path)?;
    write_partition(&truth, graph.node_labels(), &truth_path)?;

    let (pos, neg) = graph.sign_counts();
    let mut record = RunRecord::new("generate", Some(family.seed()), config_echo(&family));
    record.input_digest = Some(sha256_hex(&edge_path)?);
    record.generation = Some(GenerationSummary {
        family: family.name().to_string(),
        n: graph.n(),
        edges: graph.edge_count(),
        positive_edges: pos,
        negative_edges: neg,
        k_true: truth.k(),
        edge_file: edge_path.display().to_string(),
        truth_file: truth_path.display().to_string(),
    });
    record.write_json(&out_dir.join("manifest.json"))?;
    Ok(record)
}

/// Per-invocation overrides for `fit`.
#[derive(Clone, Debug, Default)]
pub struct FitOptions {
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    pub epsilon: Option<f64>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub directed: bool,
    pub sample_assignment: bool,
}

impl FitOptions {
    fn to_config(&self) -> FitConfig {
        let defaults = FitConfig::default();
        FitConfig {
            k_min: self.k_min.unwrap_or(defaults.k_min),
            k_max: self.k_max,
            epsilon: self.epsilon.unwrap_or(defaults.epsilon),
            restarts: self.restarts.unwrap_or(defaults.restarts),
            seed: self.seed.unwrap_or(defaults.seed),
            sample_assignment: self.sample_assignment,
            ..defaults
        }
    }
}

/// `fit`: load an edge list, fit the block model, and write the result
/// record to `out_path`. Returns the record and the process exit code
/// (3 when the fit is degenerate or failed to converge; the record is still
/// written).
pub fn cmd_fit(graph_path: &Path, options: &FitOptions, out_path: &Path) -> Result<(RunRecord, i32)> {
    let (graph, stats) = load_edge_list_with_stats(graph_path, None, options.directed)?;
    if stats.self_loops_dropped > 0 {
        eprintln!(
            "warning: dropped {} self-loop line(s) from {}",
            stats.self_loops_dropped,
            graph_path.display()
        );
    }
    let config = options.to_config();
    let result = fit(&graph, &config)?;

    let labels: Vec<String> = (0..graph.n()).map(|i| graph.label_of(i)).collect();
    let mut record = RunRecord::new("fit", Some(config.seed), config_echo(&config));
    record.input_digest = Some(sha256_hex(graph_path)?);
    record.fit = Some(FitSummary::from_result(&result, labels));
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    record.write_json(out_path)?;
    let code = if result.degenerate || !result.converged {
        3
    } else {
        0
    };
    Ok((record, code))
}

#[derive(Deserialize)]
struct ResultFile {
    fit: FitSummary,
}

/// Metrics emitted by `eval`.
#[derive(Debug, Serialize)]
pub struct EvalMetrics {
    pub nmi: f64,
    pub k_true: usize,
    pub k_found: usize,
}

/// `eval`: score a fit record against a `node block` ground-truth file.
/// The node sets must match exactly.
pub fn cmd_eval(result_path: &Path, truth_path: &Path) -> Result<EvalMetrics> {
    let text = read_to_string(result_path)?;
    let parsed: ResultFile =
        serde_json::from_str(&text).map_err(|e| Error::MalformedResult {
            path: result_path.to_path_buf(),
            reason: e.to_string(),
        })?;
    let summary = parsed.fit;
    if summary.assignment.len() != summary.node_labels.len() {
        return Err(Error::MalformedResult {
            path: result_path.to_path_buf(),
            reason: "assignment and node_labels lengths differ".into(),
        });
    }

    let truth_pairs = load_partition_pairs(truth_path)?;
    let truth_map: std::collections::HashMap<&str, usize> = truth_pairs
        .iter()
        .map(|(label, block)| (label.as_str(), *block))
        .collect();
    if truth_map.len() != truth_pairs.len() {
        return Err(Error::NodeSetMismatch {
            detail: format!("{} lists a node twice", truth_path.display()),
        });
    }
    if truth_map.len() != summary.node_labels.len() {
        return Err(Error::NodeSetMismatch {
            detail: format!(
                "result has {} nodes, truth has {}",
                summary.node_labels.len(),
                truth_map.len()
            ),
        });
    }
    let mut truth_labels = Vec::with_capacity(summary.node_labels.len());
    for label in &summary.node_labels {
        match truth_map.get(label.as_str()) {
            Some(&block) => truth_labels.push(block),
            None => {
                return Err(Error::NodeSetMismatch {
                    detail: format!("node '{label}' missing from {}", truth_path.display()),
                })
            }
        }
    }

    let truth = Partition::from_labels(&truth_labels);
    let found = Partition::from_labels(&summary.assignment);
    Ok(EvalMetrics {
        nmi: nmi(&truth, &found)?,
        k_true: truth.k(),
        k_found: found.k(),
    })
}

/// One CSV row of a benchmark sweep. `nmi` and `k_found` stay empty when
/// the point failed; the error column then says why.
#[derive(Debug, Serialize, Deserialize)]
pub struct BenchRow {
    pub param_value: f64,
    pub seed: u64,
    pub nmi: Option<f64>,
    pub k_found: Option<usize>,
    pub wall_time_ms: f64,
    pub error: String,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub sweep: String,
    pub family: String,
    pub points: Vec<PointSummary>,
}

#[derive(Debug, Serialize)]
pub struct PointSummary {
    pub param_value: f64,
    pub runs: usize,
    pub failures: usize,
    pub median_nmi: Option<f64>,
    pub median_k_found: Option<f64>,
}

struct Job {
    param_value: f64,
    gen_seed: u64,
    family: Family,
    fit_config: FitConfig,
}

fn run_job(job: &Job) -> BenchRow {
    let started = std::time::Instant::now();
    let produced = match &job.family {
        Family::Sg(cfg) => generate_sg(cfg),
        Family::BlockPair(cfg) => generate_block_pair(cfg),
    };
    let outcome = produced.and_then(|(graph, truth)| {
        let result = fit(&graph, &job.fit_config)?;
        let score = nmi(&truth, &result.best_partition)?;
        Ok((score, result.k_found()))
    });
    let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok((score, k_found)) => BenchRow {
            param_value: job.param_value,
            seed: job.gen_seed,
            nmi: Some(score),
            k_found: Some(k_found),
            wall_time_ms,
            error: String::new(),
        },
        Err(e) => BenchRow {
            param_value: job.param_value,
            seed: job.gen_seed,
            nmi: None,
            k_found: None,
            wall_time_ms,
            error: e.to_string(),
        },
    }
}

fn write_sweep_csv(path: &Path, rows: &[BenchRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::InvalidInput(e.to_string()))?;
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    writer
        .flush()
        .map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Rows arrive grouped per grid point in order, `seeds_per_point` each.
fn summarize_sweep(name: &str, sweep: &SweepDoc, points: &[f64], rows: &[BenchRow]) -> SweepSummary {
    let per_point = rows.len() / points.len();
    let mut out = Vec::new();
    for (p_idx, &value) in points.iter().enumerate() {
        let group = &rows[p_idx * per_point..(p_idx + 1) * per_point];
        let ok: Vec<&BenchRow> = group.iter().filter(|r| r.error.is_empty()).collect();
        let nmis: Vec<f64> = ok.iter().filter_map(|r| r.nmi).collect();
        let ks: Vec<f64> = ok.iter().filter_map(|r| r.k_found.map(|k| k as f64)).collect();
        out.push(PointSummary {
            param_value: value,
            runs: group.len(),
            failures: group.len() - ok.len(),
            median_nmi: if nmis.is_empty() {
                None
            } else {
                Some(median(&nmis))
            },
            median_k_found: if ks.is_empty() { None } else { Some(median(&ks)) },
        });
    }
    SweepSummary {
        sweep: name.to_string(),
        family: sweep.family.clone(),
        points: out,
    }
}

/// `bench`: run generate-fit-eval over every sweep of the suite and write
/// one CSV per sweep plus `summary.json`. Grid points run in parallel on
/// `workers` threads (0 = one per core); rows land in grid order regardless.
pub fn cmd_bench(
    suite_path: &Path,
    out_dir: &Path,
    workers: Option<usize>,
    seed: Option<u64>,
) -> Result<RunRecord> {
    let doc = parse_suite_config(&read_to_string(suite_path)?)?;
    let base_seed = seed.unwrap_or(doc.suite.base_seed);
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut jobs: Vec<Job> = Vec::new();
    let mut sweep_layout: Vec<(String, Vec<f64>)> = Vec::new();
    for (sweep_idx, (name, sweep)) in doc.sweeps.iter().enumerate() {
        let points = sweep.points()?;
        for (point_idx, &value) in points.iter().enumerate() {
            for rep in 0..doc.suite.seeds_per_point {
                let gen_seed = point_seed(base_seed, sweep_idx, point_idx, rep);
                let family = sweep.family_at(value)?.with_seed(gen_seed);
                jobs.push(Job {
                    param_value: value,
                    gen_seed,
                    family,
                    fit_config: sweep.fit_config(fit_seed(gen_seed)),
                });
            }
        }
        sweep_layout.push((name.clone(), points));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let rows: Vec<BenchRow> = pool.install(|| jobs.par_iter().map(run_job).collect());

    let mut summaries = Vec::new();
    let mut cursor = 0usize;
    for (name, points) in &sweep_layout {
        let count = points.len() * doc.suite.seeds_per_point;
        let sweep_rows = &rows[cursor..cursor + count];
        cursor += count;
        let csv_path = out_dir.join(format!("{name}.csv"));
        write_sweep_csv(&csv_path, sweep_rows)?;
        summaries.push(summarize_sweep(name, &doc.sweeps[name], points, sweep_rows));
    }

    let mut record = RunRecord::new("bench", Some(base_seed), sweep_layout_echo(&doc));
    record.input_digest = Some(sha256_hex(suite_path)?);
    record.metrics = Some(serde_json::to_value(&summaries).expect("summaries serialize"));
    record.write_json(&out_dir.join("summary.json"))?;
    Ok(record)
}

fn sweep_layout_echo(doc: &super::config::SuiteDoc) -> serde_json::Value {
    serde_json::json!({
        "base_seed": doc.suite.base_seed,
        "seeds_per_point": doc.suite.seeds_per_point,
        "sweeps": doc.sweeps,
    })
}
