//! Shared generators and brute-force reference implementations for the
//! integration tests. Nothing here calls into the code under test except
//! for graph construction.
#![allow(dead_code)]

use std::collections::VecDeque;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::Rng;

use probe_lab::{Graph, IncompleteView, NodeId};

pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

pub fn connected(g: &Graph) -> bool {
    g.node_count() == 0 || bfs(g, 0).iter().all(|&d| d != usize::MAX)
}

pub fn connected_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let g = gnp(n, p, rng);
        if connected(&g) {
            return g;
        }
    }
}

/// The instance family of the guarantee suites: connected G(n, p) with
/// n ≤ 14, p ∈ {0.2, 0.4}, 1-2 random Black seeds, k ∈ 1..=4.
pub fn guarantee_instance<R: Rng>(rng: &mut R) -> (IncompleteView, usize) {
    let n = rng.random_range(4..=14);
    let p = if rng.random_bool(0.5) { 0.2 } else { 0.4 };
    let g = Arc::new(connected_gnp(n, p, rng));
    let mut nodes: Vec<NodeId> = (0..n).collect();
    nodes.shuffle(rng);
    let seeds = nodes[..rng.random_range(1..=2)].to_vec();
    (IncompleteView::new(g, &seeds).unwrap(), rng.random_range(1..=4))
}

pub fn bfs(g: &Graph, s: NodeId) -> Vec<usize> {
    let mut d = vec![usize::MAX; g.node_count()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in g.neighbors(u) {
            if d[v] == usize::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

/// All shortest s-t paths, listed explicitly.
pub fn all_shortest_paths(g: &Graph, s: NodeId, t: NodeId) -> Vec<Vec<NodeId>> {
    let ds = bfs(g, s);
    if ds[t] == usize::MAX {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut path = vec![s];
    fn extend(g: &Graph, ds: &[usize], t: NodeId, path: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        for &v in g.neighbors(u) {
            if ds[v] == ds[u] + 1 && ds[v] <= ds[t] {
                path.push(v);
                extend(g, ds, t, path, out);
                path.pop();
            }
        }
    }
    extend(g, &ds, t, &mut path, &mut out);
    out
}

/// Betweenness by enumerating every shortest path of every unordered pair.
pub fn brute_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in (s + 1)..n {
            let paths = all_shortest_paths(g, s, t);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                bc[v] += through / total;
            }
        }
    }
    bc
}

/// Closeness scaled by the reachable fraction: with `r` other nodes
/// reachable from `u`, `(r / Σ d) * (r / (n - 1))`.
pub fn brute_closeness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .map(|u| {
            let d = bfs(g, u);
            let reach: Vec<usize> = d.iter().copied().filter(|&x| x != usize::MAX && x > 0).collect();
            if reach.is_empty() || n < 2 {
                return 0.0;
            }
            let r = reach.len() as f64;
            let sum: usize = reach.iter().sum();
            (r / sum as f64) * (r / (n - 1) as f64)
        })
        .collect()
}

/// Clustering by counting triangles through each node among all triples.
pub fn brute_clustering(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .map(|u| {
            let mut triples = 0usize;
            let mut closed = 0usize;
            for a in 0..n {
                for b in (a + 1)..n {
                    if a != u && b != u && g.has_edge(u, a) && g.has_edge(u, b) {
                        triples += 1;
                        if g.has_edge(a, b) {
                            closed += 1;
                        }
                    }
                }
            }
            if triples == 0 {
                0.0
            } else {
                closed as f64 / triples as f64
            }
        })
        .collect()
}

pub fn adjacency(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 })
}

/// PageRank as the solution of `(I - d Pᵀ) r = (1 - d)/n · 1`, dangling rows
/// of `P` uniform.
pub fn dense_pagerank(g: &Graph, d: f64) -> Vec<f64> {
    let n = g.node_count();
    let mut p = DMatrix::<f64>::zeros(n, n);
    for u in 0..n {
        let deg = g.degree(u);
        for v in 0..n {
            p[(u, v)] = if deg == 0 { 1.0 / n as f64 } else if g.has_edge(u, v) { 1.0 / deg as f64 } else { 0.0 };
        }
    }
    let m = DMatrix::<f64>::identity(n, n) - p.transpose() * d;
    let b = DVector::from_element(n, (1.0 - d) / n as f64);
    m.lu().solve(&b).unwrap().iter().copied().collect()
}

/// Largest eigenvalue of `A` and the normalized projection of the all-ones
/// vector onto its eigenspace.
pub fn dense_eigen(g: &Graph) -> (f64, Vec<f64>) {
    let n = g.node_count();
    let eig = SymmetricEigen::new(adjacency(g));
    let lambda = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tie = 1e-9 * lambda.max(1.0);
    let ones = DVector::from_element(n, 1.0);
    let mut proj = DVector::zeros(n);
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if lambda - l <= tie {
            let v = eig.eigenvectors.column(i);
            proj += v * v.dot(&ones);
        }
    }
    let norm = proj.norm();
    (lambda, proj.iter().map(|x| x / norm).collect())
}

/// Katz scores solving `(I - α A) x = 1`.
pub fn dense_katz(g: &Graph, alpha: f64) -> Vec<f64> {
    let n = g.node_count();
    let m = DMatrix::<f64>::identity(n, n) - adjacency(g) * alpha;
    m.lu().solve(&DVector::from_element(n, 1.0)).unwrap().iter().copied().collect()
}

/// Growth model: each new node links to `links` earlier nodes, picked by
/// degree with probability `pref` and uniformly otherwise.
pub fn p2p_like<R: Rng>(n: usize, links: usize, pref: f64, rng: &mut R) -> Graph {
    let mut edges = std::collections::BTreeSet::new();
    let mut endpoints: Vec<NodeId> = Vec::new();
    for v in 1..n {
        let mut chosen = Vec::new();
        for _ in 0..links.min(v) {
            let u = if !endpoints.is_empty() && rng.random_bool(pref) {
                endpoints[rng.random_range(0..endpoints.len())]
            } else {
                rng.random_range(0..v)
            };
            if !chosen.contains(&u) {
                chosen.push(u);
            }
        }
        for u in chosen {
            edges.insert((u.min(v), u.max(v)));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    Graph::from_edges(n, edges)
}

pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
