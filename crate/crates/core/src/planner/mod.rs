//! Topology-aware planners. These read the ground-truth graph behind a view
//! and serve as label oracles and upper-bound references.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::graph::NodeId;
use crate::view::IncompleteView;

mod batch;
mod exact;
mod heuristic;
mod ilp;
mod tada;

pub use batch::{batch_coverage, batch_greedy, naive_greedy};
pub use exact::{exact_optimal, is_feasible_set, ExactConfig, ExactResult};
pub use heuristic::{heuristic_choice, tada_heuristic};
pub use ilp::{assignment_for_set, export_ilp, ilp_dimensions, parse_lp, IlpDimensions, LpConstraint, LpProblem, LpSense, RelOp};
pub use tada::tada_probe;

pub(crate) const UNREACHABLE: usize = usize::MAX;

/// Multi-source BFS from all Black nodes (the collapsed root).
#[derive(Debug, Clone)]
pub struct RootedView {
    /// Hop count from the root; `0` on Black nodes, [`usize::MAX`] if unreachable.
    pub distance: Vec<usize>,
    /// Predecessor on a shortest path; `None` on Black and unreachable nodes.
    pub parent: Vec<Option<NodeId>>,
}

impl RootedView {
    pub fn new(view: &IncompleteView) -> Self {
        Self::bounded(view, usize::MAX)
    }

    /// BFS that stops expanding beyond `max_depth`.
    pub fn bounded(view: &IncompleteView, max_depth: usize) -> Self {
        let g = view.graph();
        let n = g.node_count();
        let mut distance = vec![UNREACHABLE; n];
        let mut parent = vec![None; n];
        let mut queue = VecDeque::new();
        for u in 0..n {
            if view.is_black(u) {
                distance[u] = 0;
                queue.push_back(u);
            }
        }
        while let Some(u) = queue.pop_front() {
            if distance[u] >= max_depth {
                continue;
            }
            for &v in g.neighbors(u) {
                if distance[v] == UNREACHABLE {
                    distance[v] = distance[u] + 1;
                    parent[v] = if view.is_black(u) { None } else { Some(u) };
                    queue.push_back(v);
                }
            }
        }
        RootedView { distance, parent }
    }

    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.distance[v] != UNREACHABLE
    }

    /// Probe sequence from the root to `v` (root excluded, `v` included).
    pub fn path_to(&self, v: NodeId) -> Vec<NodeId> {
        let mut path = Vec::with_capacity(self.distance[v]);
        let mut cur = Some(v);
        while let Some(u) = cur {
            if self.distance[u] == 0 {
                break;
            }
            path.push(u);
            cur = self.parent[u];
        }
        path.reverse();
        path
    }
}

/// A path of probes ending at `target`, scored by `benefit / nodes.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidatePath {
    pub target: NodeId,
    pub nodes: Vec<NodeId>,
    pub benefit: usize,
}

impl CandidatePath {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ratio(&self) -> f64 {
        self.benefit as f64 / self.nodes.len() as f64
    }

    pub fn score(&self) -> PathScore {
        PathScore { benefit: self.benefit, length: self.nodes.len(), target: self.target }
    }
}

/// Exact ordering key for candidate paths: higher ratio first, then shorter
/// path, then smaller target id. `Greater` means preferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathScore {
    pub benefit: usize,
    pub length: usize,
    pub target: NodeId,
}

impl PathScore {
    pub fn compare_ratio(&self, other: &Self) -> Ordering {
        let lhs = self.benefit as u128 * other.length as u128;
        let rhs = other.benefit as u128 * self.length as u128;
        lhs.cmp(&rhs)
    }
}

impl Ord for PathScore {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare_ratio(other)
            .then_with(|| other.length.cmp(&self.length))
            .then_with(|| other.target.cmp(&self.target))
    }
}

impl PartialOrd for PathScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Highest-ratio target by ending-node benefit `|O(v) \ V'| / |P(v)|` among
/// non-Black nodes within `budget` hops. Returns `None` when nothing within
/// reach has positive benefit.
pub(crate) fn best_endpoint(view: &IncompleteView, rooted: &RootedView, budget: usize) -> Option<PathScore> {
    let n = view.graph().node_count();
    (0..n)
        .filter(|&v| !view.is_black(v) && rooted.is_reachable(v) && rooted.distance[v] <= budget)
        .map(|v| PathScore { benefit: view.white_neighbor_count(v), length: rooted.distance[v], target: v })
        .filter(|s| s.benefit > 0)
        .max()
}
