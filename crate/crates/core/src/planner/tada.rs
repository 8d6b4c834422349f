use crate::error::{Error, Result};
use crate::view::{IncompleteView, ProbeTrace};

use super::{best_endpoint, RootedView};

/// Greedy path selection by ending-node benefit ratio.
///
/// Each round collapses the Black nodes into a root, picks the target `v`
/// (any non-Black node within the remaining budget) maximizing
/// `|O(v) \ V'| / |P(v)|`, and probes the whole shortest path to it. Stops
/// when the budget is spent or no reachable target has positive benefit.
pub fn tada_probe(view: &mut IncompleteView, k: usize) -> Result<ProbeTrace> {
    if k < 1 {
        return Err(Error::InvalidConfig("budget k must be at least 1".into()));
    }
    let mut trace = ProbeTrace::new();
    let mut used = 0;
    while used < k {
        let remaining = k - used;
        let rooted = RootedView::bounded(view, remaining);
        let Some(best) = best_endpoint(view, &rooted, remaining) else {
            break;
        };
        for node in rooted.path_to(best.target) {
            let new_nodes = view.probe(node)?;
            trace.push(node, new_nodes);
        }
        used += best.length;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::Graph;
    use crate::sampler::gen_hardness;

    /// b=0; g1=1 with leaves w1=3, w2=4; g2=2 - w3=5; w3 - w4..w8 = 6..=10.
    pub(crate) fn two_probe_example() -> IncompleteView {
        let mut edges = vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)];
        edges.extend((6..=10).map(|w| (5, w)));
        IncompleteView::new(Arc::new(Graph::from_edges(11, edges)), &[0]).unwrap()
    }

    #[test]
    fn picks_the_deep_path() {
        let mut v = two_probe_example();
        let trace = tada_probe(&mut v, 2).unwrap();
        assert_eq!(trace.nodes(), vec![2, 5]);
        assert_eq!(trace.total_new, 6);
    }

    #[test]
    fn hardness_k1() {
        let h = gen_hardness(10, 7, 4, 1).unwrap();
        let mut v = h.view.clone();
        let trace = tada_probe(&mut v, 1).unwrap();
        assert_eq!(trace.nodes(), vec![h.g_star]);
        assert_eq!(trace.total_new, 7);
    }

    #[test]
    fn fully_observed_gives_empty_trace() {
        let g = Arc::new(Graph::from_edges(3, [(0, 1), (1, 2)]));
        let mut v = IncompleteView::new(g, &[0, 1, 2]).unwrap();
        assert!(tada_probe(&mut v, 3).unwrap().is_empty());
    }

    #[test]
    fn zero_budget_is_an_error() {
        let mut v = two_probe_example();
        assert!(tada_probe(&mut v, 0).is_err());
    }
}
