//! Observation state over a ground-truth graph.
//!
//! Every node is Black (probed, all incident edges known), Gray (adjacent to a
//! Black node but not probed) or White (unseen). The observed edge set is not
//! stored: it is exactly the set of ground-truth edges with at least one Black
//! endpoint, so it is derived from the colors on demand and only its size is
//! tracked incrementally.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeColor {
    Black,
    Gray,
    White,
}

/// One executed probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeStep {
    pub node: NodeId,
    /// Nodes that turned White -> Gray because of this probe.
    pub new_nodes: usize,
}

/// Ordered record of executed probes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProbeTrace {
    pub steps: Vec<ProbeStep>,
    pub total_new: usize,
}

impl ProbeTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: NodeId, new_nodes: usize) {
        self.steps.push(ProbeStep { node, new_nodes });
        self.total_new += new_nodes;
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        self.steps.iter().map(|s| s.node).collect()
    }

    /// Newly observed nodes after the first `budget` probes of the trace.
    pub fn new_nodes_within(&self, budget: usize) -> usize {
        self.steps.iter().take(budget).map(|s| s.new_nodes).sum()
    }

    pub fn extend(&mut self, other: &ProbeTrace) {
        for step in &other.steps {
            self.push(step.node, step.new_nodes);
        }
    }
}

/// Mutable incomplete view `G'` of a shared ground-truth graph.
#[derive(Debug, Clone)]
pub struct IncompleteView {
    graph: Arc<Graph>,
    color: Vec<NodeColor>,
    black_count: usize,
    gray_count: usize,
    observed_edges: usize,
    probes_used: usize,
    initially_observed: usize,
}

impl IncompleteView {
    /// Seeds become Black, their neighbors Gray, everything else White.
    pub fn new(graph: Arc<Graph>, seeds: &[NodeId]) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::EmptySeedSet);
        }
        for &s in seeds {
            graph.check_node(s)?;
        }
        let n = graph.node_count();
        let mut view = IncompleteView {
            color: vec![NodeColor::White; n],
            graph,
            black_count: 0,
            gray_count: 0,
            observed_edges: 0,
            probes_used: 0,
            initially_observed: 0,
        };
        for &s in seeds {
            if view.color[s] != NodeColor::Black {
                view.blacken(s);
            }
        }
        view.initially_observed = view.observed_node_count();
        Ok(view)
    }

    /// A view with nothing observed yet; the only way forward is
    /// [`IncompleteView::reveal_seed`].
    pub(crate) fn unobserved(graph: Arc<Graph>) -> Self {
        let n = graph.node_count();
        IncompleteView {
            color: vec![NodeColor::White; n],
            graph,
            black_count: 0,
            gray_count: 0,
            observed_edges: 0,
            probes_used: 0,
            initially_observed: 0,
        }
    }

    /// Marks `u` Black without counting it as a probe (used to bootstrap
    /// sampled views from nothing).
    pub(crate) fn reveal_seed(&mut self, u: NodeId) -> usize {
        debug_assert_ne!(self.color[u], NodeColor::Black);
        let newly = self.blacken(u);
        if self.probes_used == 0 {
            self.initially_observed = self.observed_node_count();
        }
        newly
    }

    /// Re-bases the view so that the current state counts as "initial".
    pub fn rebase(&mut self) {
        self.probes_used = 0;
        self.initially_observed = self.observed_node_count();
    }

    fn blacken(&mut self, u: NodeId) -> usize {
        match self.color[u] {
            NodeColor::Gray => self.gray_count -= 1,
            NodeColor::White => {}
            NodeColor::Black => unreachable!("node {u} already black"),
        }
        self.color[u] = NodeColor::Black;
        self.black_count += 1;
        let mut newly = 0;
        let graph = Arc::clone(&self.graph);
        for &v in graph.neighbors(u) {
            match self.color[v] {
                NodeColor::Black => {}
                NodeColor::Gray => self.observed_edges += 1,
                NodeColor::White => {
                    self.color[v] = NodeColor::Gray;
                    self.gray_count += 1;
                    self.observed_edges += 1;
                    newly += 1;
                }
            }
        }
        newly
    }

    /// Probes a Gray node: it turns Black and its White neighbors turn Gray.
    /// Returns the number of White -> Gray transitions.
    pub fn probe(&mut self, u: NodeId) -> Result<usize> {
        self.graph.check_node(u)?;
        let color = self.color[u];
        if color != NodeColor::Gray {
            return Err(Error::NotGray { node: u, color });
        }
        self.probes_used += 1;
        Ok(self.blacken(u))
    }

    /// Runs `seq` on a scratch copy and reports what it would discover.
    pub fn evaluate_sequence(&self, seq: &[NodeId]) -> Result<ProbeTrace> {
        let mut scratch = self.clone();
        let mut trace = ProbeTrace::new();
        for (position, &node) in seq.iter().enumerate() {
            self.graph.check_node(node)?;
            let color = scratch.color[node];
            if color != NodeColor::Gray {
                return Err(Error::InfeasibleSequence { position, node, color });
            }
            let new_nodes = scratch.probe(node)?;
            trace.push(node, new_nodes);
        }
        Ok(trace)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn color(&self, u: NodeId) -> NodeColor {
        self.color[u]
    }

    pub fn colors(&self) -> &[NodeColor] {
        &self.color
    }

    pub fn is_gray(&self, u: NodeId) -> bool {
        self.color[u] == NodeColor::Gray
    }

    pub fn is_black(&self, u: NodeId) -> bool {
        self.color[u] == NodeColor::Black
    }

    pub fn is_white(&self, u: NodeId) -> bool {
        self.color[u] == NodeColor::White
    }

    /// Gray nodes in ascending id order.
    pub fn gray_nodes(&self) -> Vec<NodeId> {
        self.nodes_with(NodeColor::Gray)
    }

    pub fn black_nodes(&self) -> Vec<NodeId> {
        self.nodes_with(NodeColor::Black)
    }

    pub fn white_nodes(&self) -> Vec<NodeId> {
        self.nodes_with(NodeColor::White)
    }

    fn nodes_with(&self, color: NodeColor) -> Vec<NodeId> {
        self.color.iter().enumerate().filter(|(_, &c)| c == color).map(|(u, _)| u).collect()
    }

    pub fn black_count(&self) -> usize {
        self.black_count
    }

    pub fn gray_count(&self) -> usize {
        self.gray_count
    }

    pub fn white_count(&self) -> usize {
        self.color.len() - self.black_count - self.gray_count
    }

    /// `|V'| = |V^f| + |V^p|`.
    pub fn observed_node_count(&self) -> usize {
        self.black_count + self.gray_count
    }

    pub fn observed_edge_count(&self) -> usize {
        self.observed_edges
    }

    pub fn probes_used(&self) -> usize {
        self.probes_used
    }

    pub fn initially_observed(&self) -> usize {
        self.initially_observed
    }

    /// Growth of `|V'|` since construction (or the last [`rebase`](Self::rebase)).
    pub fn new_nodes(&self) -> usize {
        self.observed_node_count() - self.initially_observed
    }

    /// Observed edges `(u, v)`, `u < v`, recomputed from the visibility law.
    pub fn observed_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.graph.edges().filter(move |&(u, v)| self.is_black(u) || self.is_black(v))
    }

    /// Ground-truth count of White neighbors, `|O(u) \ V'|`.
    pub fn white_neighbor_count(&self, u: NodeId) -> usize {
        self.graph.neighbors(u).iter().filter(|&&v| self.is_white(v)).count()
    }

    /// FNV-1a digest of the coloring; equal views have equal checksums.
    pub fn checksum(&self) -> u64 {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for &c in &self.color {
            let byte = match c {
                NodeColor::Black => 1u8,
                NodeColor::Gray => 2,
                NodeColor::White => 3,
            };
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
        hash
    }

    /// Full recomputation of the partition and edge-visibility laws.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.graph.node_count();
        if self.color.len() != n {
            return Err(Error::Invariant("color table length differs from node count".into()));
        }
        let blacks = self.color.iter().filter(|&&c| c == NodeColor::Black).count();
        let grays = self.color.iter().filter(|&&c| c == NodeColor::Gray).count();
        if blacks != self.black_count || grays != self.gray_count {
            return Err(Error::Invariant(format!(
                "color counters ({}, {}) disagree with table ({blacks}, {grays})",
                self.black_count, self.gray_count
            )));
        }
        for u in 0..n {
            let has_black_neighbor = self.graph.neighbors(u).iter().any(|&v| self.is_black(v));
            match self.color[u] {
                NodeColor::Gray if !has_black_neighbor => {
                    return Err(Error::Invariant(format!("gray node {u} has no black neighbor")));
                }
                NodeColor::White if has_black_neighbor => {
                    return Err(Error::Invariant(format!("white node {u} has a black neighbor")));
                }
                _ => {}
            }
        }
        let recomputed = self.observed_edges().count();
        if recomputed != self.observed_edges {
            return Err(Error::Invariant(format!(
                "observed edge counter {} differs from recomputed {recomputed}",
                self.observed_edges
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn view(n: usize, edges: &[(usize, usize)], seeds: &[usize]) -> IncompleteView {
        IncompleteView::new(Arc::new(Graph::from_edges(n, edges.iter().copied())), seeds).unwrap()
    }

    #[test]
    fn triangle_seed() {
        let v = view(3, &[(0, 1), (1, 2), (2, 0)], &[0]);
        assert_eq!(v.colors(), &[NodeColor::Black, NodeColor::Gray, NodeColor::Gray]);
        assert_eq!(v.observed_edge_count(), 2);
        v.check_invariants().unwrap();
    }

    #[test]
    fn path_seed() {
        let v = view(4, &[(0, 1), (1, 2), (2, 3)], &[0]);
        assert_eq!(v.gray_nodes(), vec![1]);
        assert_eq!(v.white_nodes(), vec![2, 3]);
        assert_eq!(v.initially_observed(), 2);
    }

    #[test]
    fn all_seeds_fully_observed() {
        let v = view(3, &[(0, 1), (1, 2), (2, 0)], &[0, 1, 2]);
        assert_eq!(v.black_count(), 3);
        assert_eq!(v.observed_edge_count(), 3);
        v.check_invariants().unwrap();
    }

    #[test]
    fn empty_seed_set() {
        let g = Arc::new(Graph::from_edges(2, [(0, 1)]));
        assert!(matches!(IncompleteView::new(g.clone(), &[]), Err(Error::EmptySeedSet)));
        assert!(matches!(IncompleteView::new(g, &[5]), Err(Error::NodeOutOfRange { .. })));
    }

    #[test]
    fn star_center_probe() {
        // 0 black, 1 center gray, 2..=5 leaves.
        let v0 = view(6, &[(0, 1), (1, 2), (1, 3), (1, 4), (1, 5)], &[0]);
        let mut v = v0.clone();
        assert_eq!(v.probe(1).unwrap(), 4);
        assert_eq!(v.probes_used(), 1);
        assert_eq!(v.new_nodes(), 4);
        v.check_invariants().unwrap();
    }

    #[test]
    fn probe_without_discovery() {
        // 0 black; 1, 2 gray and adjacent to each other only.
        let mut v = view(3, &[(0, 1), (0, 2), (1, 2)], &[0]);
        assert_eq!(v.probe(1).unwrap(), 0);
        assert_eq!(v.observed_edge_count(), 3);
        v.check_invariants().unwrap();
    }

    #[test]
    fn chain_probe_discovers_one() {
        // b1(0) - g1(1) - w1(2) - w2(3)
        let mut v = view(4, &[(0, 1), (1, 2), (2, 3)], &[0]);
        assert_eq!(v.probe(1).unwrap(), 1);
        assert_eq!(v.color(2), NodeColor::Gray);
        assert_eq!(v.color(3), NodeColor::White);
    }

    #[test]
    fn probing_non_gray_is_an_error() {
        let mut v = view(4, &[(0, 1), (1, 2), (2, 3)], &[0]);
        assert!(matches!(v.probe(0), Err(Error::NotGray { color: NodeColor::Black, .. })));
        assert!(matches!(v.probe(3), Err(Error::NotGray { color: NodeColor::White, .. })));
        assert_eq!(v.probes_used(), 0);
    }

    #[test]
    fn evaluate_sequence_leaves_input_untouched() {
        let v = view(4, &[(0, 1), (1, 2), (2, 3)], &[0]);
        let before = v.checksum();
        assert_eq!(v.evaluate_sequence(&[]).unwrap().total_new, 0);
        let trace = v.evaluate_sequence(&[1, 2]).unwrap();
        assert_eq!(trace.total_new, 2);
        assert_eq!(v.checksum(), before);
        match v.evaluate_sequence(&[1, 3]) {
            Err(Error::InfeasibleSequence { position, node, .. }) => assert_eq!((position, node), (1, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
