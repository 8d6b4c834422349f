//! Probing strategies by name: metric baselines, random, the topology-aware
//! planners, and learned models.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::centrality::Metric;
use crate::error::{Error, Result};
use crate::features::ObservedGraph;
use crate::learning::{argmax_by_key, model_prober, Model, ModelKind};
use crate::planner::{batch_greedy, naive_greedy, tada_heuristic, tada_probe};
use crate::view::{IncompleteView, ProbeTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Metric(Metric),
    Rand,
    Tada,
    TadaH,
    GreedyBatch,
    Naive,
    LinReg,
    LogReg,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::Metric(m) => m.label(),
            Strategy::Rand => "RAND",
            Strategy::Tada => "TADA",
            Strategy::TadaH => "TADA-H",
            Strategy::GreedyBatch => "GREEDY-BATCH",
            Strategy::Naive => "NAIVE",
            Strategy::LinReg => "LINREG",
            Strategy::LogReg => "LOGREG",
        }
    }

    /// Model kind a learned strategy requires.
    pub fn required_model(self) -> Option<ModelKind> {
        match self {
            Strategy::LinReg => Some(ModelKind::Linear),
            Strategy::LogReg => Some(ModelKind::Logistic),
            _ => None,
        }
    }

    /// Whether the trace for budget `k` is a prefix of the trace for any
    /// larger budget. Path planners plan against the remaining budget, so a
    /// larger budget can change their earliest choices.
    pub fn is_prefix_consistent(self) -> bool {
        !matches!(self, Strategy::Tada | Strategy::TadaH)
    }

    /// Whether the strategy reads the ground-truth graph (label oracles and
    /// references) rather than only the observed snapshot.
    pub fn uses_ground_truth(self) -> bool {
        matches!(self, Strategy::Tada | Strategy::TadaH | Strategy::GreedyBatch | Strategy::Naive)
    }

    /// Runs the strategy for budget `k` on `view`.
    pub fn run<R: Rng + ?Sized>(self, view: &mut IncompleteView, k: usize, rng: &mut R, model: Option<&Model>) -> Result<ProbeTrace> {
        if k == 0 {
            return Ok(ProbeTrace::new());
        }
        match self {
            Strategy::Metric(m) => metric_prober(view, m, k),
            Strategy::Rand => rand_prober(view, k, rng),
            Strategy::Tada => tada_probe(view, k),
            Strategy::TadaH => tada_heuristic(view, k),
            Strategy::GreedyBatch => {
                let batch = batch_greedy(view, k);
                let mut trace = ProbeTrace::new();
                for u in batch {
                    let new_nodes = view.probe(u)?;
                    trace.push(u, new_nodes);
                }
                Ok(trace)
            }
            Strategy::Naive => naive_greedy(view, k),
            Strategy::LinReg | Strategy::LogReg => {
                let needed = self.required_model().expect("learned strategy");
                let model = model.ok_or_else(|| Error::InvalidConfig(format!("{self} needs a {needed} model")))?;
                if model.kind != needed {
                    return Err(Error::InvalidConfig(format!("{self} needs a {needed} model, got {}", model.kind)));
                }
                model_prober(view, model, k)
            }
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(m) = s.parse::<Metric>() {
            return Ok(Strategy::Metric(m));
        }
        [
            Strategy::Rand,
            Strategy::Tada,
            Strategy::TadaH,
            Strategy::GreedyBatch,
            Strategy::Naive,
            Strategy::LinReg,
            Strategy::LogReg,
        ]
        .into_iter()
        .find(|st| st.label().eq_ignore_ascii_case(s))
        .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

/// Parses a comma-separated strategy list.
pub fn parse_strategies(list: &str) -> Result<Vec<Strategy>> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// Each step probes the gray node with the highest `metric` on the observed
/// graph, recomputed after every probe. Ties go to the smaller id.
pub fn metric_prober(view: &mut IncompleteView, metric: Metric, k: usize) -> Result<ProbeTrace> {
    let mut trace = ProbeTrace::new();
    for _ in 0..k {
        let observed = ObservedGraph::from_view(view);
        let scores = metric.compute(&observed.graph)?;
        let best = argmax_by_key(observed.gray_locals().into_iter().map(|l| (observed.underlying(l), scores[l])));
        let Some(u) = best else {
            break;
        };
        let new_nodes = view.probe(u)?;
        trace.push(u, new_nodes);
    }
    Ok(trace)
}

/// Each step probes a uniformly random gray node.
pub fn rand_prober<R: Rng + ?Sized>(view: &mut IncompleteView, k: usize, rng: &mut R) -> Result<ProbeTrace> {
    let mut trace = ProbeTrace::new();
    for _ in 0..k {
        let grays = view.gray_nodes();
        if grays.is_empty() {
            break;
        }
        let u = grays[rng.random_range(0..grays.len())];
        let new_nodes = view.probe(u)?;
        trace.push(u, new_nodes);
    }
    Ok(trace)
}
