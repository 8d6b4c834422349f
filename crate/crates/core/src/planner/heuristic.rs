use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::view::{IncompleteView, ProbeTrace};

use super::{best_endpoint, CandidatePath, PathScore, RootedView};

/// Variant of [`tada_probe`](super::tada_probe) that credits every node
/// discovered along a path, not only at its end.
///
/// Each round runs a best-first search from the collapsed root keyed by the
/// benefit ratio `Δ(u) / d(u)`. Relaxing `u -> v` proposes
/// `(d(u) + 1, Δ(u) + new nodes of v given u's path)`; the proposal is kept
/// only if it raises `v`'s ratio and `v` is not already on `u`'s path. The
/// best settled path (compared against the ending-node choice of
/// `tada_probe` scored by its full on-path benefit) is then probed.
pub fn tada_heuristic(view: &mut IncompleteView, k: usize) -> Result<ProbeTrace> {
    if k < 1 {
        return Err(Error::InvalidConfig("budget k must be at least 1".into()));
    }
    let mut trace = ProbeTrace::new();
    let mut used = 0;
    let mut search = PathSearch::new(view.graph().node_count());
    while used < k {
        let remaining = k - used;
        let Some(path) = select_path(view, remaining, &mut search) else {
            break;
        };
        for &node in &path.nodes {
            let new_nodes = view.probe(node)?;
            trace.push(node, new_nodes);
        }
        used += path.len();
    }
    Ok(trace)
}

/// The path the heuristic would probe next with `budget` probes left.
pub fn heuristic_choice(view: &IncompleteView, budget: usize) -> Option<CandidatePath> {
    let mut search = PathSearch::new(view.graph().node_count());
    select_path(view, budget, &mut search)
}

fn select_path(view: &IncompleteView, budget: usize, search: &mut PathSearch) -> Option<CandidatePath> {
    let searched = search.run(view, budget);

    let rooted = RootedView::bounded(view, budget);
    let endpoint = best_endpoint(view, &rooted, budget).map(|s| {
        let nodes = rooted.path_to(s.target);
        let benefit = view.evaluate_sequence(&nodes).expect("shortest path is probe-feasible").total_new;
        CandidatePath { target: s.target, nodes, benefit }
    });

    match (searched, endpoint) {
        (Some(a), Some(b)) => Some(if a.score() >= b.score() { a } else { b }),
        (a, b) => a.or(b),
    }
}

/// Reusable buffers for the best-first ratio search.
struct PathSearch {
    dist: Vec<usize>,
    benefit: Vec<usize>,
    pred: Vec<Option<NodeId>>,
    settled: Vec<bool>,
    touched: Vec<NodeId>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl PathSearch {
    fn new(n: usize) -> Self {
        PathSearch {
            dist: vec![0; n],
            benefit: vec![0; n],
            pred: vec![None; n],
            settled: vec![false; n],
            touched: Vec::new(),
            stamp: vec![0; n],
            epoch: 0,
        }
    }

    fn reset(&mut self) {
        for &u in &self.touched {
            self.dist[u] = 0;
            self.benefit[u] = 0;
            self.pred[u] = None;
            self.settled[u] = false;
        }
        self.touched.clear();
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    fn score(&self, v: NodeId) -> PathScore {
        PathScore { benefit: self.benefit[v], length: self.dist[v], target: v }
    }

    fn path(&self, v: NodeId) -> Vec<NodeId> {
        let mut nodes = vec![v];
        let mut cur = self.pred[v];
        while let Some(u) = cur {
            nodes.push(u);
            cur = self.pred[u];
        }
        nodes.reverse();
        nodes
    }

    fn run(&mut self, view: &IncompleteView, budget: usize) -> Option<CandidatePath> {
        self.reset();
        let g = view.graph();
        let mut heap = BinaryHeap::new();
        for v in view.gray_nodes() {
            self.dist[v] = 1;
            self.benefit[v] = view.white_neighbor_count(v);
            self.touched.push(v);
            heap.push(self.score(v));
        }

        let mut best: Option<PathScore> = None;
        while let Some(entry) = heap.pop() {
            let u = entry.target;
            if self.settled[u] || entry != self.score(u) {
                continue;
            }
            self.settled[u] = true;
            if entry.benefit > 0 && best.is_none_or(|b| entry > b) {
                best = Some(entry);
            }
            if self.dist[u] >= budget {
                continue;
            }

            // Mark u's path and everything it observes.
            let epoch = self.next_epoch();
            let on_path_epoch = epoch;
            let mut path_nodes = Vec::with_capacity(self.dist[u]);
            let mut cur = Some(u);
            while let Some(p) = cur {
                path_nodes.push(p);
                cur = self.pred[p];
            }
            for &p in &path_nodes {
                self.stamp[p] = on_path_epoch;
            }
            let seen_epoch = self.next_epoch();
            for &p in &path_nodes {
                for &w in g.neighbors(p) {
                    if self.stamp[w] != on_path_epoch {
                        self.stamp[w] = seen_epoch;
                    }
                }
            }

            for &v in g.neighbors(u) {
                if view.is_black(v) || self.settled[v] || self.stamp[v] == on_path_epoch {
                    continue;
                }
                let gain = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| view.is_white(w) && self.stamp[w] != seen_epoch && self.stamp[w] != on_path_epoch)
                    .count();
                let proposal = PathScore { benefit: self.benefit[u] + gain, length: self.dist[u] + 1, target: v };
                let fresh = self.dist[v] == 0;
                if fresh || proposal.compare_ratio(&self.score(v)).is_gt() {
                    if fresh {
                        self.touched.push(v);
                    }
                    self.dist[v] = proposal.length;
                    self.benefit[v] = proposal.benefit;
                    self.pred[v] = Some(u);
                    heap.push(proposal);
                }
            }
        }

        best.map(|s| CandidatePath { target: s.target, nodes: self.path(s.target), benefit: s.benefit })
    }
}
