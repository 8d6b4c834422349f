//! Node centralities on an (observed) graph.
//!
//! All scores are raw (unstandardized). Iterative measures return
//! [`Error::NonConvergence`] with the last residual when they hit their cap.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub const PAGERANK_DAMPING: f64 = 0.85;
pub const PAGERANK_TOLERANCE: f64 = 1e-9;
pub const PAGERANK_MAX_ITER: usize = 200;
pub const KATZ_MAX_ALPHA: f64 = 0.1;
pub const KATZ_SPECTRAL_FRACTION: f64 = 0.85;
pub const POWER_TOLERANCE: f64 = 1e-8;
pub const POWER_MAX_ITER: usize = 1000;

/// Centrality used by the metric baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Degree,
    Betweenness,
    Closeness,
    PageRank,
    Clustering,
    Eigenvector,
    Katz,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Degree,
        Metric::Betweenness,
        Metric::Closeness,
        Metric::PageRank,
        Metric::Clustering,
        Metric::Eigenvector,
        Metric::Katz,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Metric::Degree => "DEG",
            Metric::Betweenness => "BC",
            Metric::Closeness => "CC",
            Metric::PageRank => "PR",
            Metric::Clustering => "CLC",
            Metric::Eigenvector => "EIG",
            Metric::Katz => "KATZ",
        }
    }

    pub fn compute(self, g: &Graph) -> Result<Vec<f64>> {
        match self {
            Metric::Degree => Ok(degree(g)),
            Metric::Betweenness => Ok(betweenness(g)),
            Metric::Closeness => Ok(closeness(g)),
            Metric::PageRank => pagerank(g),
            Metric::Clustering => Ok(clustering(g)),
            Metric::Eigenvector => eigenvector(g),
            Metric::Katz => katz(g),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

pub fn degree(g: &Graph) -> Vec<f64> {
    (0..g.node_count()).map(|u| g.degree(u) as f64).collect()
}

/// Unnormalized shortest-path betweenness, each unordered pair counted once
/// (Brandes accumulation).
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut score = vec![0.0; n];
    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        stack.clear();
        for v in 0..n {
            preds[v].clear();
            sigma[v] = 0.0;
            dist[v] = usize::MAX;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    for b in &mut score {
        *b /= 2.0;
    }
    score
}

/// Closeness with within-component scaling:
/// `((r - 1) / Σ d(u, v)) * ((r - 1) / (n - 1))` over the `r` nodes
/// reachable from `u` (itself included); 0 for isolated nodes.
pub fn closeness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (u, slot) in out.iter_mut().enumerate() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[u] = 0;
        queue.push_back(u);
        let mut reached = 0usize;
        let mut total = 0usize;
        while let Some(v) = queue.pop_front() {
            reached += 1;
            total += dist[v];
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if total > 0 {
            let r1 = (reached - 1) as f64;
            *slot = (r1 / total as f64) * (r1 / (n - 1) as f64);
        }
    }
    out
}

/// Local clustering coefficient: closed triples over `C(deg, 2)`.
pub fn clustering(g: &Graph) -> Vec<f64> {
    (0..g.node_count())
        .map(|u| {
            let nbrs = g.neighbors(u);
            let d = nbrs.len();
            if d < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if g.has_edge(a, b) {
                        links += 1;
                    }
                }
            }
            links as f64 / (d * (d - 1) / 2) as f64
        })
        .collect()
}

/// PageRank with uniform teleport; dangling mass is spread uniformly.
pub fn pagerank(g: &Graph) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let uniform = 1.0 / n as f64;
    let mut rank = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..PAGERANK_MAX_ITER {
        let dangling: f64 = (0..n).filter(|&u| g.degree(u) == 0).map(|u| rank[u]).sum();
        let base = (1.0 - PAGERANK_DAMPING) * uniform + PAGERANK_DAMPING * dangling * uniform;
        next.iter_mut().for_each(|x| *x = base);
        for u in 0..n {
            let d = g.degree(u);
            if d > 0 {
                let share = PAGERANK_DAMPING * rank[u] / d as f64;
                for &v in g.neighbors(u) {
                    next[v] += share;
                }
            }
        }
        residual = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < PAGERANK_TOLERANCE {
            let total: f64 = rank.iter().sum();
            rank.iter_mut().for_each(|x| *x /= total);
            return Ok(rank);
        }
    }
    Err(Error::NonConvergence { metric: "pagerank", iterations: PAGERANK_MAX_ITER, residual })
}

/// Connected components as sorted node lists, ordered by smallest member.
pub fn components(g: &Graph) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Largest adjacency eigenvalue together with the eigenvector centrality.
///
/// Each component is solved by power iteration on `A + I` (the shift keeps
/// bipartite components from oscillating). The centrality vector is the
/// projection of the all-ones vector onto the dominant eigenspace, i.e. the
/// limit of global power iteration from a uniform start, L2-normalized.
pub fn dominant_eigen(g: &Graph) -> Result<(f64, Vec<f64>)> {
    let n = g.node_count();
    if n == 0 {
        return Ok((0.0, Vec::new()));
    }
    let mut per_component = Vec::new();
    for comp in components(g) {
        let (lambda, vector) = component_power_iteration(g, &comp)?;
        per_component.push((comp, lambda, vector));
    }
    let lambda_max = per_component.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let tie = 1e-9 * lambda_max.max(1.0);
    let mut out = vec![0.0; n];
    for (comp, lambda, vector) in &per_component {
        if lambda_max - lambda > tie {
            continue;
        }
        let weight: f64 = vector.iter().sum();
        for (&u, &x) in comp.iter().zip(vector) {
            out[u] = weight * x;
        }
    }
    let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
    out.iter_mut().for_each(|x| *x /= norm);
    Ok((lambda_max, out))
}

/// Unit principal eigenvector (non-negative) of one component.
fn component_power_iteration(g: &Graph, comp: &[NodeId]) -> Result<(f64, Vec<f64>)> {
    let size = comp.len();
    if size == 1 {
        return Ok((0.0, vec![1.0]));
    }
    let local = |u: NodeId| comp.binary_search(&u).expect("neighbor inside component");
    let adjacency: Vec<Vec<usize>> = comp.iter().map(|&u| g.neighbors(u).iter().map(|&v| local(v)).collect()).collect();
    let mut x = vec![1.0 / (size as f64).sqrt(); size];
    let mut y = vec![0.0; size];
    let mut residual = f64::INFINITY;
    for _ in 0..POWER_MAX_ITER {
        for i in 0..size {
            y[i] = x[i] + adjacency[i].iter().map(|&j| x[j]).sum::<f64>();
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.iter_mut().for_each(|v| *v /= norm);
        residual = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        std::mem::swap(&mut x, &mut y);
        if residual < POWER_TOLERANCE {
            let lambda: f64 =
                (0..size).map(|i| x[i] * adjacency[i].iter().map(|&j| x[j]).sum::<f64>()).sum();
            return Ok((lambda, x));
        }
    }
    Err(Error::NonConvergence { metric: "eigenvector", iterations: POWER_MAX_ITER, residual })
}

pub fn eigenvector(g: &Graph) -> Result<Vec<f64>> {
    dominant_eigen(g).map(|(_, v)| v)
}

/// Katz attenuation `min(0.1, 0.85 / λ_max)`.
pub fn katz_alpha(lambda_max: f64) -> f64 {
    if lambda_max > 0.0 {
        KATZ_MAX_ALPHA.min(KATZ_SPECTRAL_FRACTION / lambda_max)
    } else {
        KATZ_MAX_ALPHA
    }
}

/// Katz centrality `x = α A x + 1`.
pub fn katz(g: &Graph) -> Result<Vec<f64>> {
    let (lambda_max, _) = dominant_eigen(g)?;
    katz_with_alpha(g, katz_alpha(lambda_max))
}

pub fn katz_with_alpha(g: &Graph, alpha: f64) -> Result<Vec<f64>> {
    let n = g.node_count();
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..PAGERANK_MAX_ITER {
        for u in 0..n {
            next[u] = 1.0 + alpha * g.neighbors(u).iter().map(|&v| x[v]).sum::<f64>();
        }
        let scale = next.iter().map(|v| v.abs()).fold(1.0, f64::max);
        residual = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
        std::mem::swap(&mut x, &mut next);
        if residual < PAGERANK_TOLERANCE {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence { metric: "katz", iterations: PAGERANK_MAX_ITER, residual })
}
