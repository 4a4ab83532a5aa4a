//! Command-line harness: `ssbm generate | fit | eval | bench`.
//!
//! Exit codes: 0 success, 1 validation error, 2 I/O error, 3 degenerate or
//! non-converged fit (the result file is still written). The `SSBM_SEED`
//! environment variable acts as a fallback for every `--seed` flag.

mod commands;
mod config;

pub use commands::{
    cmd_bench, cmd_eval, cmd_fit, cmd_generate, BenchRow, EvalMetrics, FitOptions, FitSummary,
    GenerationSummary, PointSummary, RunRecord, SweepSummary,
};
pub use config::{
    fit_seed, parse_generate_config, parse_suite_config, point_seed, splitmix64, BlockPairDoc,
    Family, GenerateDoc, SuiteDoc, SuiteMeta, SweepDoc,
};

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(
    name = "ssbm",
    version,
    about = "Block-structure discovery in signed networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic signed network with planted ground truth
    Generate {
        /// TOML config with an [sg] or [block_pair] table
        #[arg(long)]
        config: PathBuf,
        /// Output directory for edges.txt, truth.txt, manifest.json
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config file
        #[arg(long, env = "SSBM_SEED")]
        seed: Option<u64>,
    },
    /// Fit the block model to an edge-list file
    Fit {
        /// Edge list (`src dst sign` lines)
        graph: PathBuf,
        /// Output path of the JSON result record
        #[arg(long)]
        out: PathBuf,
        /// Lower bound of the block search space (default 1)
        #[arg(long)]
        k_min: Option<usize>,
        /// Upper bound of the block search space (default floor(sqrt(n)))
        #[arg(long)]
        k_max: Option<usize>,
        /// Convergence threshold on the cost decrease (default 1e-4)
        #[arg(long)]
        epsilon: Option<f64>,
        /// Number of random restarts (default 5)
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long, env = "SSBM_SEED")]
        seed: Option<u64>,
        /// Treat the edge list as directed instead of mirroring edges
        #[arg(long)]
        directed: bool,
        /// Sample the hard assignment from the posterior instead of argmax
        #[arg(long)]
        sample_assignment: bool,
    },
    /// Score a fit result against a ground-truth partition
    Eval {
        /// JSON record written by `fit`
        result: PathBuf,
        /// Ground-truth `node block` file
        truth: PathBuf,
        /// Optional path for the metrics JSON (also printed to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run generate-fit-eval sweeps and write CSV curves
    Bench {
        /// TOML suite config ([suite] plus [sweeps.*] tables)
        #[arg(long)]
        config: PathBuf,
        /// Output directory for per-sweep CSVs and summary.json
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for grid points (default: one per core)
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides the suite's base seed
        #[arg(long, env = "SSBM_SEED")]
        seed: Option<u64>,
    },
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => 2,
        Error::DegenerateModel => 3,
        _ => 1,
    }
}

/// Executes a parsed command, printing a short report to stdout and errors
/// to stderr. Returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Generate { config, out, seed } => {
            cmd_generate(&config, &out, seed).map(|record| {
                let g = record.generation.as_ref().expect("generate fills summary");
                println!(
                    "generated {} network: n={}, edges={} ({}+ / {}-), k_true={}, seed={} -> {}",
                    g.family,
                    g.n,
                    g.edges,
                    g.positive_edges,
                    g.negative_edges,
                    g.k_true,
                    record.seed.unwrap_or(0),
                    out.display()
                );
                0
            })
        }
        Command::Fit {
            graph,
            out,
            k_min,
            k_max,
            epsilon,
            restarts,
            seed,
            directed,
            sample_assignment,
        } => {
            let options = FitOptions {
                k_min,
                k_max,
                epsilon,
                restarts,
                seed,
                directed,
                sample_assignment,
            };
            cmd_fit(&graph, &options, &out).map(|(record, code)| {
                let f = record.fit.as_ref().expect("fit fills summary");
                println!(
                    "fit {}: k_found={}, cost={:.4}, sweeps={}, {:.1} ms -> {}",
                    graph.display(),
                    f.k_found,
                    f.best_cost,
                    f.total_sweeps,
                    f.wall_time_ms,
                    out.display()
                );
                if code == 3 {
                    eprintln!("warning: fit flagged degenerate or non-converged");
                }
                code
            })
        }
        Command::Eval { result, truth, out } => cmd_eval(&result, &truth).and_then(|metrics| {
            let text = serde_json::to_string_pretty(&metrics).expect("metrics serialize");
            println!("{text}");
            if let Some(path) = out {
                std::fs::write(&path, &text).map_err(|e| Error::io(&path, e))?;
            }
            Ok(0)
        }),
        Command::Bench {
            config,
            out,
            workers,
            seed,
        } => cmd_bench(&config, &out, workers, seed).map(|record| {
            println!(
                "bench complete: {} sweep(s) -> {}",
                record
                    .metrics
                    .as_ref()
                    .and_then(|m| m.as_array().map(|a| a.len()))
                    .unwrap_or(0),
                out.display()
            );
            0
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

/// Parses arguments and runs; the entry point used by the `ssbm` binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(err) => {
            // Help and version requests are not errors.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            code
        }
    }
}
