//! Immutable undirected ground-truth topology.
//!
//! Node ids are dense `0..n`. When a graph is loaded from an edge list the
//! original labels are kept in a side table so results can be reported in the
//! caller's id space.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Simple undirected graph with sorted, deduplicated adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    labels: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph over `node_count` nodes. Self-loops and duplicate edges
    /// are dropped, direction is ignored.
    ///
    /// Panics if an endpoint is `>= node_count`.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            assert!(u < node_count && v < node_count, "edge ({u}, {v}) outside 0..{node_count}");
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Graph { adjacency, labels: (0..node_count as u64).collect(), edge_count: edge_count / 2 }
    }

    /// Like [`Graph::from_edges`] but validates endpoints instead of panicking.
    pub fn try_from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        for &(u, v) in &edges {
            let bad = u.max(v);
            if bad >= node_count {
                return Err(Error::NodeOutOfRange { node: bad, node_count });
            }
        }
        Ok(Self::from_edges(node_count, edges))
    }

    /// Parses a SNAP-style edge list: one `u v` pair per line, `#` comments.
    /// Ids are remapped to `0..n` in order of first appearance.
    pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut remap: HashMap<u64, NodeId> = HashMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut intern = |label: u64| -> NodeId {
            *remap.entry(label).or_insert_with(|| {
                labels.push(label);
                labels.len() - 1
            })
        };

        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let mut next_id = || -> Result<u64> {
                let token = tokens.next().ok_or_else(|| Error::parse(line_no, "expected two node ids"))?;
                token
                    .parse::<u64>()
                    .map_err(|_| Error::parse(line_no, format!("`{token}` is not a non-negative integer node id")))
            };
            let u = next_id()?;
            let v = next_id()?;
            if tokens.next().is_some() {
                return Err(Error::parse(line_no, "expected exactly two node ids"));
            }
            let u = intern(u);
            let v = intern(v);
            edges.push((u, v));
        }

        if labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut graph = Graph::from_edges(labels.len(), edges);
        graph.labels = labels;
        Ok(graph)
    }

    pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<Self> {
        let file = File::open(path.as_ref())?;
        Self::load_edge_list(BufReader::new(file))
    }

    /// Writes one `label(u) label(v)` line per edge (`u < v` in dense ids).
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# nodes {} edges {}", self.node_count(), self.edge_count)?;
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Original label of a dense id (identity unless loaded from a file).
    pub fn label(&self, u: NodeId) -> u64 {
        self.labels[u]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense id for an original label, if present.
    pub fn node_for_label(&self, label: u64) -> Option<NodeId> {
        // Identity labels are the common case for generated graphs.
        if (label as usize) < self.labels.len() && self.labels[label as usize] == label {
            return Some(label as usize);
        }
        self.labels.iter().position(|&l| l == label)
    }

    pub fn check_node(&self, u: NodeId) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: u, node_count: self.node_count() })
        }
    }
}
