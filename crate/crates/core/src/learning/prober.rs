use crate::error::Result;
use crate::features::{gray_feature_table, FeatureVector, ObservedGraph};
use crate::graph::NodeId;
use crate::view::{IncompleteView, ProbeTrace};

use super::model::{Model, ModelKind};

/// Candidate pool for round-robin pairwise scoring.
pub const DEFAULT_LOGISTIC_POOL: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProberOptions {
    /// With more grays than this, a logistic model only compares the
    /// highest observed-degree ones.
    pub logistic_pool: usize,
}

impl Default for ProberOptions {
    fn default() -> Self {
        ProberOptions { logistic_pool: DEFAULT_LOGISTIC_POOL }
    }
}

pub fn model_prober(view: &mut IncompleteView, model: &Model, k: usize) -> Result<ProbeTrace> {
    model_prober_with(view, model, k, ProberOptions::default())
}

/// Probes up to `k` gray nodes, each chosen by `model` from features of the
/// observed snapshot. Stops early only if no gray node is left.
pub fn model_prober_with(view: &mut IncompleteView, model: &Model, k: usize, options: ProberOptions) -> Result<ProbeTrace> {
    let mask = model.feature_mask();
    let mut trace = ProbeTrace::new();
    for _ in 0..k {
        let observed = ObservedGraph::from_view(view);
        let table = gray_feature_table(&observed, mask)?;
        let Some(node) = choose(&observed, &table, model, options) else {
            break;
        };
        let new_nodes = view.probe(node)?;
        trace.push(node, new_nodes);
    }
    Ok(trace)
}

fn choose(observed: &ObservedGraph, table: &[(NodeId, FeatureVector)], model: &Model, options: ProberOptions) -> Option<NodeId> {
    if table.len() <= 1 {
        return table.first().map(|(u, _)| *u);
    }
    match model.kind {
        ModelKind::Linear => argmax_by_key(table.iter().map(|(u, x)| (*u, model.score(x)))),
        ModelKind::Logistic => {
            let mut pool: Vec<&(NodeId, FeatureVector)> = table.iter().collect();
            if pool.len() > options.logistic_pool {
                let degree = |u: NodeId| observed.graph.degree(observed.local(u).expect("gray is observed"));
                pool.sort_by(|a, b| degree(b.0).cmp(&degree(a.0)).then(a.0.cmp(&b.0)));
                pool.truncate(options.logistic_pool);
                pool.sort_by_key(|e| e.0);
            }
            let wins = pool.iter().map(|(u, x)| {
                let count = pool
                    .iter()
                    .filter(|(v, y)| v != u && model.pair_probability(x, y) >= 0.5)
                    .count();
                (*u, count as f64)
            });
            argmax_by_key(wins)
        }
    }
}

/// Largest score; ties go to the smaller node id. Input is in ascending id
/// order, so the first maximum wins.
pub(crate) fn argmax_by_key(items: impl Iterator<Item = (NodeId, f64)>) -> Option<NodeId> {
    let mut best: Option<(NodeId, f64)> = None;
    for (u, s) in items {
        match best {
            Some((bu, bs)) if s < bs || (s == bs && bu < u) => {}
            _ => best = Some((u, s)),
        }
    }
    best.map(|(u, _)| u)
}
