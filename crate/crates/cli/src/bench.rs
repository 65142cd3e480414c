use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use qreuse::generators::qaoa_u3r;
use qreuse::order::{compile_order, Strategy};

use crate::commands::DEFAULT_TIME_LIMIT_SECS;

pub const QAOA_U3R: &str = "qaoa-u3r";

#[derive(Args)]
pub struct BenchArgs {
    /// Benchmark family; only `qaoa-u3r` is available.
    #[arg(long, default_value = QAOA_U3R)]
    pub family: String,
    /// Comma-separated qubit counts.
    #[arg(long = "N", alias = "n", value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Comma-separated QAOA depths.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub p: Vec<usize>,
    /// Number of graph seeds per cell, starting from `--first-seed`.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub first_seed: u64,
    /// Comma-separated strategies.
    #[arg(long, value_delimiter = ',', default_value = "greedy-brute")]
    pub strategies: Vec<Strategy>,
    /// Also search the dual circuit and keep it when narrower.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub dual: bool,
    #[arg(long, default_value_t = DEFAULT_TIME_LIMIT_SECS)]
    pub time_limit: f64,
    /// Write CSV here instead of stdout; the JSON summary then goes to stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Also report the fraction of instances with width at most this.
    #[arg(long)]
    pub threshold: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub family: &'static str,
    #[serde(rename = "N")]
    pub n: usize,
    pub param: usize,
    pub seed: u64,
    pub strategy: String,
    pub via_dual: bool,
    pub width: usize,
    pub optimal: bool,
    pub elapsed_s: f64,
}

#[derive(Serialize)]
struct CellSummary {
    #[serde(rename = "N")]
    n: usize,
    p: usize,
    strategy: String,
    instances: usize,
    mean_width: f64,
    /// Standard error of the mean width.
    width_error: f64,
    mean_elapsed_s: f64,
    elapsed_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fraction_at_or_below_threshold: Option<f64>,
}

fn mean_and_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn run_instance(args: &BenchArgs, n: usize, p: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    let (_, circuit) = qaoa_u3r(n, p, seed)?;
    let limit = std::time::Duration::from_secs_f64(args.time_limit);
    args.strategies
        .iter()
        .map(|&strategy| {
            let r = compile_order(&circuit, strategy, args.dual, Some(limit))?;
            Ok(BenchRecord {
                family: QAOA_U3R,
                n,
                param: p,
                seed,
                strategy: strategy.to_string(),
                via_dual: r.via_dual,
                width: r.width(),
                optimal: r.optimal,
                elapsed_s: r.elapsed.as_secs_f64(),
            })
        })
        .collect()
}

pub fn run(args: BenchArgs) -> Result<u8> {
    if args.family != QAOA_U3R {
        bail!("unknown bench family {:?}; available: {QAOA_U3R}", args.family);
    }
    if !(args.time_limit > 0.0 && args.time_limit.is_finite()) {
        bail!("--time-limit must be a positive number of seconds");
    }
    let mut grid = Vec::new();
    for &n in &args.sizes {
        for &p in &args.p {
            for seed in args.first_seed..args.first_seed + args.seeds {
                grid.push((n, p, seed));
            }
        }
    }

    let sink: Box<dyn Write> = match &args.csv {
        Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    let mut records = Vec::new();
    // Instances run in parallel a chunk at a time; each finished chunk is
    // written in grid order and flushed, so an interrupted run keeps its rows.
    let chunk = 4 * rayon::current_num_threads();
    for cells in grid.chunks(chunk) {
        let rows: Vec<Vec<BenchRecord>> = cells
            .par_iter()
            .map(|&(n, p, seed)| run_instance(&args, n, p, seed))
            .collect::<Result<_>>()?;
        for row in rows.into_iter().flatten() {
            writer.serialize(&row)?;
            records.push(row);
        }
        writer.flush()?;
    }

    let mut cells: BTreeMap<(usize, usize, String), Vec<&BenchRecord>> = BTreeMap::new();
    for r in &records {
        cells.entry((r.n, r.param, r.strategy.clone())).or_default().push(r);
    }
    let summary: Vec<CellSummary> = cells
        .into_iter()
        .map(|((n, p, strategy), rs)| {
            let widths: Vec<f64> = rs.iter().map(|r| r.width as f64).collect();
            let times: Vec<f64> = rs.iter().map(|r| r.elapsed_s).collect();
            let (mean_width, width_error) = mean_and_error(&widths);
            let (mean_elapsed_s, elapsed_error) = mean_and_error(&times);
            CellSummary {
                n,
                p,
                strategy,
                instances: rs.len(),
                mean_width,
                width_error,
                mean_elapsed_s,
                elapsed_error,
                fraction_at_or_below_threshold: args
                    .threshold
                    .map(|t| rs.iter().filter(|r| r.width <= t).count() as f64 / rs.len() as f64),
            }
        })
        .collect();
    for s in &summary {
        eprintln!(
            "N={} p={} {}: width {:.2} ± {:.2}, time {:.4} s ± {:.4} ({} instances)",
            s.n, s.p, s.strategy, s.mean_width, s.width_error, s.mean_elapsed_s, s.elapsed_error, s.instances
        );
    }
    if args.csv.is_some() {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    }
    Ok(0)
}
