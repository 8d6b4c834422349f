//! Randomized self-checks on small instances: planner guarantees against the
//! exact oracle, batch greedy against enumeration, and probe invariants.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::planner::{batch_coverage, batch_greedy, exact_optimal, tada_heuristic, tada_probe, ExactConfig};
use crate::sampler::stream_rng;
use crate::view::IncompleteView;

/// Erdős–Rényi graph on `n` nodes, redrawn until connected.
pub fn random_connected_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges);
        if is_connected(&g) {
            return g;
        }
    }
}

fn is_connected(g: &Graph) -> bool {
    let n = g.node_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

/// A small random instance: connected graph, 1-2 black seeds, budget.
#[derive(Debug, Clone)]
pub struct SmallInstance {
    pub view: IncompleteView,
    pub k: usize,
    pub p: f64,
}

impl SmallInstance {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let n = rng.random_range(5..=14);
        let p = if rng.random_bool(0.5) { 0.2 } else { 0.4 };
        let graph = Arc::new(random_connected_graph(n, p, rng));
        let mut nodes: Vec<NodeId> = (0..n).collect();
        nodes.shuffle(rng);
        let seeds = &nodes[..rng.random_range(1..=2)];
        let view = IncompleteView::new(graph, seeds).expect("seeds in range");
        SmallInstance { view, k: rng.random_range(1..=4), p }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub instances: usize,
    pub probe_steps: usize,
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs all checks on `instances` random instances drawn from `seed`.
pub fn run_verify(instances: usize, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport { instances, ..Default::default() };
    let config = ExactConfig::default();
    for i in 0..instances {
        let mut rng = stream_rng(seed, i as u64);
        let inst = SmallInstance::random(&mut rng);
        let (view, k) = (&inst.view, inst.k);
        let tag = |what: &str| format!("instance {i} (n={}, k={k}): {what}", view.graph().node_count());

        let exact = exact_optimal(view, k, &config)?;
        let bound = |total: usize| total * (exact.radius_min + 1) >= exact.opt_value;
        let tada = tada_probe(&mut view.clone(), k)?.total_new;
        if !bound(tada) {
            report.violations.push(tag(&format!("tada {tada} < {}/({}+1)", exact.opt_value, exact.radius_min)));
        }
        let heur = tada_heuristic(&mut view.clone(), k)?.total_new;
        if !bound(heur) {
            report.violations.push(tag(&format!("heuristic {heur} < {}/({}+1)", exact.opt_value, exact.radius_min)));
        }

        let greedy = batch_coverage(view, &batch_greedy(view, k));
        let best = best_batch(view, k);
        if (greedy as f64) < (1.0 - (-1.0f64).exp()) * best as f64 - 1e-9 {
            report.violations.push(tag(&format!("batch greedy {greedy} below (1-1/e) of {best}")));
        }

        let mut walk = view.clone();
        for _ in 0..view.graph().node_count() {
            let grays = walk.gray_nodes();
            let Some(&u) = grays.get(rng.random_range(0..grays.len().max(1))) else {
                break;
            };
            walk.probe(u)?;
            report.probe_steps += 1;
            if let Err(e) = walk.check_invariants() {
                report.violations.push(tag(&format!("probe invariants: {e}")));
                break;
            }
        }
    }
    Ok(report)
}

/// Best coverage over all gray subsets of size `min(k, |grays|)`.
pub fn best_batch(view: &IncompleteView, k: usize) -> usize {
    let grays = view.gray_nodes();
    let size = k.min(grays.len());
    let mut best = 0;
    let mut chosen = Vec::with_capacity(size);
    fn rec(view: &IncompleteView, grays: &[NodeId], start: usize, size: usize, chosen: &mut Vec<NodeId>, best: &mut usize) {
        if chosen.len() == size {
            *best = (*best).max(batch_coverage(view, chosen));
            return;
        }
        for i in start..grays.len() {
            chosen.push(grays[i]);
            rec(view, grays, i + 1, size, chosen, best);
            chosen.pop();
        }
    }
    rec(view, &grays, 0, size, &mut chosen, &mut best);
    best
}
