use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::view::IncompleteView;

use super::RootedView;

/// Limits for [`exact_optimal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConfig {
    /// Graphs up to this many nodes are searched for any budget.
    pub max_nodes: usize,
    /// Larger graphs are still searched when the budget is at most this.
    pub max_budget_large: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig { max_nodes: 20, max_budget_large: 5 }
    }
}

impl ExactConfig {
    pub const ENV_MAX_NODES: &'static str = "PROBE_LAB_EXACT_MAX_NODES";

    /// Defaults, with `max_nodes` overridable through the environment.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(v) = std::env::var(Self::ENV_MAX_NODES).ok().and_then(|s| s.parse().ok()) {
            cfg.max_nodes = v;
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub opt_value: usize,
    /// Every feasible set of at most `k` nodes reaching `opt_value`, each sorted.
    pub opt_sets: Vec<Vec<NodeId>>,
    /// Smallest radius (max root distance of a member) over `opt_sets`.
    pub radius_min: usize,
}

/// A set is probe-feasible iff each connected component of the subgraph it
/// induces contains a Gray node, i.e. it is connected to the collapsed root.
pub fn is_feasible_set(view: &IncompleteView, set: &[NodeId]) -> bool {
    let g = view.graph();
    if set.iter().any(|&u| u >= g.node_count() || view.is_black(u)) {
        return false;
    }
    let mut reached: Vec<NodeId> = set.iter().copied().filter(|&u| view.is_gray(u)).collect();
    let mut in_set = vec![false; g.node_count()];
    for &u in set {
        in_set[u] = true;
    }
    let mut seen = vec![false; g.node_count()];
    for &u in &reached {
        seen[u] = true;
    }
    let mut i = 0;
    while i < reached.len() {
        let u = reached[i];
        i += 1;
        for &v in g.neighbors(u) {
            if in_set[v] && !seen[v] {
                seen[v] = true;
                reached.push(v);
            }
        }
    }
    let mut distinct = set.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    reached.len() == distinct.len()
}

/// Exhaustive optimum over probe-feasible sets of at most `k` nodes.
///
/// Enumerates every set connected to the collapsed root exactly once (each
/// branch fixes which frontier nodes are excluded), keeping white-coverage
/// counters incrementally.
pub fn exact_optimal(view: &IncompleteView, k: usize, config: &ExactConfig) -> Result<ExactResult> {
    let g = view.graph();
    let n = g.node_count();
    if n > config.max_nodes && k > config.max_budget_large {
        return Err(Error::SizeCap { nodes: n, budget: k, max_nodes: config.max_nodes });
    }
    let rooted = RootedView::new(view);
    let mut search = Search {
        view,
        k,
        cover: vec![0; n],
        value: 0,
        set: Vec::new(),
        blocked: vec![false; n],
        best_value: 0,
        best_sets: Vec::new(),
    };
    let frontier = view.gray_nodes();
    for &u in &frontier {
        search.blocked[u] = true;
    }
    search.recurse(&frontier);

    let opt_sets: Vec<Vec<NodeId>> = search
        .best_sets
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s
        })
        .collect();
    let radius_min = opt_sets
        .iter()
        .map(|s| s.iter().map(|&u| rooted.distance[u]).max().unwrap_or(0))
        .min()
        .unwrap_or(0);
    Ok(ExactResult { opt_value: search.best_value, opt_sets, radius_min })
}

struct Search<'a> {
    view: &'a IncompleteView,
    k: usize,
    cover: Vec<u32>,
    value: usize,
    set: Vec<NodeId>,
    /// Nodes already in the set, on the frontier, or excluded on this branch.
    blocked: Vec<bool>,
    best_value: usize,
    best_sets: Vec<Vec<NodeId>>,
}

impl Search<'_> {
    fn record(&mut self) {
        if self.value > self.best_value {
            self.best_value = self.value;
            self.best_sets.clear();
        }
        if self.value == self.best_value {
            self.best_sets.push(self.set.clone());
        }
    }

    fn add(&mut self, v: NodeId) {
        self.set.push(v);
        for &w in self.view.graph().neighbors(v) {
            if self.view.is_white(w) {
                self.cover[w] += 1;
                if self.cover[w] == 1 {
                    self.value += 1;
                }
            }
        }
    }

    fn remove(&mut self, v: NodeId) {
        self.set.pop();
        for &w in self.view.graph().neighbors(v) {
            if self.view.is_white(w) {
                self.cover[w] -= 1;
                if self.cover[w] == 0 {
                    self.value -= 1;
                }
            }
        }
    }

    fn recurse(&mut self, frontier: &[NodeId]) {
        self.record();
        if self.set.len() == self.k {
            return;
        }
        for (i, &v) in frontier.iter().enumerate() {
            self.add(v);
            let mut next: Vec<NodeId> = frontier[i + 1..].to_vec();
            let mut opened = Vec::new();
            for &w in self.view.graph().neighbors(v) {
                if !self.blocked[w] && !self.view.is_black(w) {
                    self.blocked[w] = true;
                    opened.push(w);
                    next.push(w);
                }
            }
            self.recurse(&next);
            for w in opened {
                self.blocked[w] = false;
            }
            self.remove(v);
        }
    }
}
