use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::view::{IncompleteView, ProbeTrace};

/// Number of White nodes adjacent to at least one node of `set`.
pub fn batch_coverage(view: &IncompleteView, set: &[NodeId]) -> usize {
    let g = view.graph();
    let mut covered = vec![false; g.node_count()];
    let mut total = 0;
    for &u in set {
        for &w in g.neighbors(u) {
            if view.is_white(w) && !covered[w] {
                covered[w] = true;
                total += 1;
            }
        }
    }
    total
}

/// Non-adaptive max-coverage greedy: up to `k` of the current Gray nodes,
/// each adding the most not-yet-covered White neighbors (ties to the smaller
/// id). Picks with zero marginal gain are kept so the batch has
/// `min(k, grays)` nodes.
pub fn batch_greedy(view: &IncompleteView, k: usize) -> Vec<NodeId> {
    let g = view.graph();
    let mut candidates = view.gray_nodes();
    let mut covered = vec![false; g.node_count()];
    let mut chosen = Vec::with_capacity(k.min(candidates.len()));
    while chosen.len() < k && !candidates.is_empty() {
        let gain = |u: NodeId| g.neighbors(u).iter().filter(|&&w| view.is_white(w) && !covered[w]).count();
        let (idx, _) = candidates
            .iter()
            .enumerate()
            .map(|(i, &u)| (i, gain(u)))
            .fold((0, None::<usize>), |best, (i, gu)| match best.1 {
                Some(b) if b >= gu => best,
                _ => (i, Some(gu)),
            });
        let u = candidates.remove(idx);
        for &w in g.neighbors(u) {
            if view.is_white(w) {
                covered[w] = true;
            }
        }
        chosen.push(u);
    }
    chosen
}

/// Adaptive one-step greedy: repeatedly probes the Gray node with the most
/// White neighbors (ties to the smaller id). Stops early once no Gray node
/// has a White neighbor.
pub fn naive_greedy(view: &mut IncompleteView, k: usize) -> Result<ProbeTrace> {
    if k < 1 {
        return Err(Error::InvalidConfig("budget k must be at least 1".into()));
    }
    let mut trace = ProbeTrace::new();
    for _ in 0..k {
        let best = view
            .gray_nodes()
            .into_iter()
            .map(|u| (view.white_neighbor_count(u), u))
            .filter(|&(gain, _)| gain > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let Some((_, u)) = best else {
            break;
        };
        let new_nodes = view.probe(u)?;
        trace.push(u, new_nodes);
    }
    Ok(trace)
}
