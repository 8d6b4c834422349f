//! The experiment driver: sampled validation views, every strategy from the
//! same starting view, new-node counts at each checkpoint budget.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::learning::Model;
use crate::sampler::{bfs_sample, stream_rng};
use crate::strategy::Strategy;

pub const THREADS_ENV: &str = "PROBE_LAB_THREADS";
pub const CSV_HEADER: &str = "dataset,strategy,sample_id,budget,new_nodes,seed,wall_time";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub strategies: Vec<Strategy>,
    /// Checkpoint budgets, strictly increasing.
    pub budgets: Vec<usize>,
    pub validation_samples: usize,
    pub validation_frac: f64,
    pub seed: u64,
    /// Worker pool width; `None` reads [`THREADS_ENV`], then falls back to
    /// the rayon default.
    pub threads: Option<usize>,
    /// Fill the `wall_time` column. Off by default so that output is
    /// byte-reproducible.
    pub record_wall_time: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            strategies: Vec::new(),
            budgets: vec![1, 100, 200, 300],
            validation_samples: 50,
            validation_frac: 0.05,
            seed: 0,
            threads: None,
            record_wall_time: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.strategies.is_empty() {
            return Err(Error::InvalidConfig("no strategies given".into()));
        }
        if self.budgets.is_empty() || self.budgets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("budgets must be non-empty and strictly increasing".into()));
        }
        if self.validation_samples == 0 {
            return Err(Error::InvalidConfig("validation_samples must be at least 1".into()));
        }
        if !(self.validation_frac > 0.0 && self.validation_frac <= 1.0) {
            return Err(Error::InvalidConfig(format!("validation_frac {} outside (0, 1]", self.validation_frac)));
        }
        Ok(())
    }
}

/// A named ground-truth network.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graph: Arc<Graph>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub dataset: String,
    pub strategy: Strategy,
    pub sample_id: usize,
    pub budget: usize,
    pub new_nodes: usize,
    pub seed: u64,
    /// Seconds spent in the run that produced this row.
    pub wall_time: Option<f64>,
}

/// Runs every strategy on `validation_samples` BFS views of each dataset.
///
/// Prefix-consistent strategies run once to the largest budget and are read
/// off at each checkpoint; the path planners run once per budget.
pub fn run_experiment(datasets: &[Dataset], config: &ExperimentConfig, models: &[Model]) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let mut chosen_models = Vec::with_capacity(config.strategies.len());
    for &s in &config.strategies {
        let model = match s.required_model() {
            Some(kind) => Some(
                models
                    .iter()
                    .find(|m| m.kind == kind)
                    .ok_or_else(|| Error::InvalidConfig(format!("{s} needs a {kind} model but none was given")))?,
            ),
            None => None,
        };
        chosen_models.push(model);
    }

    let jobs: Vec<(usize, usize)> = (0..datasets.len())
        .flat_map(|d| (0..config.validation_samples).map(move |s| (d, s)))
        .collect();
    let work = || -> Result<Vec<Vec<ResultRow>>> {
        jobs.par_iter()
            .map(|&(d, s)| run_sample(&datasets[d], d, s, config, &chosen_models))
            .collect()
    };
    let per_job = match pool_width(config.threads) {
        Some(width) => rayon::ThreadPoolBuilder::new()
            .num_threads(width)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    Ok(per_job.into_iter().flatten().collect())
}

fn pool_width(configured: Option<usize>) -> Option<usize> {
    configured
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()))
        .filter(|&w| w > 0)
}

/// Stream index of `(dataset, sample)`: one independent stream per pair.
fn stream_index(dataset_idx: usize, sample_id: usize) -> u64 {
    ((dataset_idx as u64) << 32) | sample_id as u64
}

fn run_sample(
    dataset: &Dataset,
    dataset_idx: usize,
    sample_id: usize,
    config: &ExperimentConfig,
    models: &[Option<&Model>],
) -> Result<Vec<ResultRow>> {
    let n = dataset.graph.node_count();
    let target = ((config.validation_frac * n as f64).round() as usize).clamp(1, n);
    let mut rng = stream_rng(config.seed, stream_index(dataset_idx, sample_id));
    let sample = bfs_sample(&dataset.graph, target, &mut rng)?;
    let sample_seed = rng.next_u64();
    let base = sample.view;
    let checksum = base.checksum();
    log::info!(
        "{} sample {sample_id}: bfs seed {}, {} observed, {} gray, view checksum {checksum:016x}",
        dataset.name,
        sample.seed,
        base.observed_node_count(),
        base.gray_count()
    );

    let max_budget = *config.budgets.last().expect("validated");
    let mut rows = Vec::with_capacity(config.strategies.len() * config.budgets.len());
    for (&strategy, model) in config.strategies.iter().zip(models) {
        let run = |k: usize| -> Result<(crate::view::ProbeTrace, f64)> {
            let mut view = base.clone();
            if view.checksum() != checksum {
                return Err(Error::Invariant(format!("{strategy} did not start from the shared view")));
            }
            let mut strategy_rng = ChaCha8Rng::seed_from_u64(sample_seed);
            let start = Instant::now();
            let trace = strategy.run(&mut view, k, &mut strategy_rng, *model)?;
            let elapsed = start.elapsed().as_secs_f64();
            if trace.len() > k || view.probes_used() != trace.len() {
                return Err(Error::Invariant(format!("{strategy} exceeded budget {k}")));
            }
            Ok((trace, elapsed))
        };
        let mut push = |budget: usize, new_nodes: usize, elapsed: f64| {
            rows.push(ResultRow {
                dataset: dataset.name.clone(),
                strategy,
                sample_id,
                budget,
                new_nodes,
                seed: sample_seed,
                wall_time: config.record_wall_time.then_some(elapsed),
            });
        };
        if strategy.is_prefix_consistent() {
            let (trace, elapsed) = run(max_budget)?;
            for &b in &config.budgets {
                push(b, trace.new_nodes_within(b), elapsed);
            }
        } else {
            for &b in &config.budgets {
                let (trace, elapsed) = run(b)?;
                push(b, trace.total_new, elapsed);
            }
        }
    }
    Ok(rows)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let wall = r.wall_time.map(|t| format!("{t:.6}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(&r.dataset),
            r.strategy,
            r.sample_id,
            r.budget,
            r.new_nodes,
            r.seed,
            wall
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Mean new nodes per (dataset, strategy, budget), keyed in row order.
pub fn summarize(rows: &[ResultRow]) -> Vec<(String, Strategy, Vec<(usize, f64)>)> {
    let mut order: Vec<(String, Strategy)> = Vec::new();
    let mut sums: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    for r in rows {
        let key = (r.dataset.clone(), r.strategy);
        let idx = order.iter().position(|k| *k == key).unwrap_or_else(|| {
            order.push(key);
            order.len() - 1
        });
        let e = sums.entry((idx, r.budget)).or_insert((0.0, 0));
        e.0 += r.new_nodes as f64;
        e.1 += 1;
    }
    order
        .into_iter()
        .enumerate()
        .map(|(idx, (dataset, strategy))| {
            let means = sums
                .range((idx, 0)..=(idx, usize::MAX))
                .map(|(&(_, b), &(sum, count))| (b, sum / count as f64))
                .collect();
            (dataset, strategy, means)
        })
        .collect()
}

/// Markdown table of per-strategy means.
pub fn summary_markdown(rows: &[ResultRow]) -> String {
    let summary = summarize(rows);
    let mut budgets: Vec<usize> = summary.iter().flat_map(|(_, _, m)| m.iter().map(|(b, _)| *b)).collect();
    budgets.sort_unstable();
    budgets.dedup();
    let samples = rows.iter().map(|r| (r.dataset.as_str(), r.sample_id)).collect::<std::collections::BTreeSet<_>>().len();

    let mut out = String::new();
    writeln!(out, "Mean new nodes over {samples} sampled views (seeds derived from the experiment seed).").unwrap();
    writeln!(out, "Means depend on the sampled views and are not comparable with figures measured on other samples.")
        .unwrap();
    writeln!(out).unwrap();
    write!(out, "| dataset | strategy |").unwrap();
    for b in &budgets {
        write!(out, " k={b} |").unwrap();
    }
    writeln!(out).unwrap();
    write!(out, "|---|---|").unwrap();
    for _ in &budgets {
        write!(out, "---:|").unwrap();
    }
    writeln!(out).unwrap();
    for (dataset, strategy, means) in summary {
        write!(out, "| {dataset} | {strategy} |").unwrap();
        for b in &budgets {
            match means.iter().find(|(mb, _)| mb == b) {
                Some((_, m)) => write!(out, " {m:.2} |").unwrap(),
                None => write!(out, " |").unwrap(),
            }
        }
        writeln!(out).unwrap();
    }
    out
}
