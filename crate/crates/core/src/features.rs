//! Learning features computed on the observed graph `G'` only.

use std::fmt;

use crate::centrality::{self, Metric};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::view::IncompleteView;

pub const FEATURE_COUNT: usize = 11;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] =
    ["bc", "cc", "eig", "pr", "katz", "clc", "deg", "bnum", "gnum", "bdeg", "bedg"];

/// Per-node metrics in feature order (indices 0..7).
const NODE_METRICS: [Metric; 7] = [
    Metric::Betweenness,
    Metric::Closeness,
    Metric::Eigenvector,
    Metric::PageRank,
    Metric::Katz,
    Metric::Clustering,
    Metric::Degree,
];

/// What a local strategy is allowed to see: `G' = (V^f ∪ V^p, E')` with
/// local ids (ascending in the underlying id) and the black/gray split.
#[derive(Debug, Clone)]
pub struct ObservedGraph {
    pub graph: Graph,
    to_underlying: Vec<NodeId>,
    black: Vec<bool>,
}

impl ObservedGraph {
    pub fn from_view(view: &IncompleteView) -> Self {
        let n = view.graph().node_count();
        let mut local = vec![usize::MAX; n];
        let mut to_underlying = Vec::with_capacity(view.observed_node_count());
        let mut black = Vec::with_capacity(view.observed_node_count());
        for u in 0..n {
            if !view.is_white(u) {
                local[u] = to_underlying.len();
                to_underlying.push(u);
                black.push(view.is_black(u));
            }
        }
        let edges = view.observed_edges().map(|(u, v)| (local[u], local[v]));
        let graph = Graph::from_edges(to_underlying.len(), edges);
        ObservedGraph { graph, to_underlying, black }
    }

    pub fn node_count(&self) -> usize {
        self.to_underlying.len()
    }

    pub fn underlying(&self, local: usize) -> NodeId {
        self.to_underlying[local]
    }

    pub fn local(&self, underlying: NodeId) -> Option<usize> {
        self.to_underlying.binary_search(&underlying).ok()
    }

    pub fn is_black(&self, local: usize) -> bool {
        self.black[local]
    }

    /// Local ids of gray nodes, ascending (hence ascending underlying id).
    pub fn gray_locals(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&i| !self.black[i]).collect()
    }

    pub fn globals(&self) -> GlobalFeatures {
        let mut g = GlobalFeatures::default();
        for i in 0..self.node_count() {
            if self.black[i] {
                g.bnum += 1.0;
                g.bdeg += self.graph.degree(i) as f64;
                g.bedg += self.graph.neighbors(i).iter().filter(|&&j| j > i && self.black[j]).count() as f64;
            } else {
                g.gnum += 1.0;
            }
        }
        g
    }
}

/// View-global features shared by every candidate.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GlobalFeatures {
    pub bnum: f64,
    pub gnum: f64,
    pub bdeg: f64,
    pub bedg: f64,
}

/// The eleven features of one gray candidate, in [`FEATURE_NAMES`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector(pub [f64; FEATURE_COUNT]);

impl FeatureVector {
    pub fn values(&self) -> &[f64; FEATURE_COUNT] {
        &self.0
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES.iter().position(|&n| n == name).map(|i| self.0[i])
    }

    pub fn bc(&self) -> f64 {
        self.0[0]
    }
    pub fn cc(&self) -> f64 {
        self.0[1]
    }
    pub fn eig(&self) -> f64 {
        self.0[2]
    }
    pub fn pr(&self) -> f64 {
        self.0[3]
    }
    pub fn katz(&self) -> f64 {
        self.0[4]
    }
    pub fn clc(&self) -> f64 {
        self.0[5]
    }
    pub fn deg(&self) -> f64 {
        self.0[6]
    }
    pub fn bnum(&self) -> f64 {
        self.0[7]
    }
    pub fn gnum(&self) -> f64 {
        self.0[8]
    }
    pub fn bdeg(&self) -> f64 {
        self.0[9]
    }
    pub fn bedg(&self) -> f64 {
        self.0[10]
    }
}

impl fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, v)) in FEATURE_NAMES.iter().zip(self.0.iter()).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{name}={v}")?;
        }
        Ok(())
    }
}

/// Which features to compute; skipped ones are left at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureMask(pub [bool; FEATURE_COUNT]);

impl FeatureMask {
    pub const ALL: FeatureMask = FeatureMask([true; FEATURE_COUNT]);
}

impl Default for FeatureMask {
    fn default() -> Self {
        Self::ALL
    }
}

/// Features for every gray node of a snapshot, keyed by underlying id
/// (ascending).
pub fn gray_feature_table(observed: &ObservedGraph, mask: FeatureMask) -> Result<Vec<(NodeId, FeatureVector)>> {
    let g = &observed.graph;
    let mut columns: Vec<Option<Vec<f64>>> = vec![None; NODE_METRICS.len()];
    // Eigenvector and Katz share one eigen solve.
    let need_eig = mask.0[2] || mask.0[4];
    let eigen = if need_eig { Some(centrality::dominant_eigen(g)?) } else { None };
    for (idx, metric) in NODE_METRICS.iter().enumerate() {
        if !mask.0[idx] {
            continue;
        }
        let column = match metric {
            Metric::Eigenvector => eigen.as_ref().map(|(_, v)| v.clone()).expect("eigen solved"),
            Metric::Katz => {
                let lambda = eigen.as_ref().map(|(l, _)| *l).expect("eigen solved");
                centrality::katz_with_alpha(g, centrality::katz_alpha(lambda))?
            }
            other => other.compute(g)?,
        };
        columns[idx] = Some(column);
    }
    let globals = observed.globals();
    let global_values = [globals.bnum, globals.gnum, globals.bdeg, globals.bedg];

    Ok(observed
        .gray_locals()
        .into_iter()
        .map(|local| {
            let mut values = [0.0; FEATURE_COUNT];
            for (idx, column) in columns.iter().enumerate() {
                if let Some(col) = column {
                    values[idx] = col[local];
                }
            }
            for (k, v) in global_values.iter().enumerate() {
                if mask.0[7 + k] {
                    values[7 + k] = *v;
                }
            }
            (observed.underlying(local), FeatureVector(values))
        })
        .collect())
}

/// Features of gray node `u` in the current view.
pub fn feature_vector(view: &IncompleteView, u: NodeId) -> Result<FeatureVector> {
    view.graph().check_node(u)?;
    if !view.is_gray(u) {
        return Err(Error::NotGray { node: u, color: view.color(u) });
    }
    let observed = ObservedGraph::from_view(view);
    let table = gray_feature_table(&observed, FeatureMask::ALL)?;
    let (_, fv) = table.into_iter().find(|(node, _)| *node == u).expect("gray node is in the table");
    Ok(fv)
}
