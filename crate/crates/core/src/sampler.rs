//! Scenario generation: BFS-probe samples of a reference graph, the sample
//! size distribution, and the adversarial hardness family.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::view::IncompleteView;

/// Size distribution for sampled incomplete views.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub min_frac: f64,
    pub max_frac: f64,
    pub power_exponent: f64,
    pub sample_count: usize,
    pub rng_seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { min_frac: 0.005, max_frac: 0.10, power_exponent: -0.25, sample_count: 100, rng_seed: 0 }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_frac > 0.0 && self.min_frac <= self.max_frac && self.max_frac <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < min_frac <= max_frac <= 1, got {} and {}",
                self.min_frac, self.max_frac
            )));
        }
        if self.sample_count == 0 {
            return Err(Error::InvalidConfig("sample_count must be at least 1".into()));
        }
        if !self.power_exponent.is_finite() {
            return Err(Error::InvalidConfig("power exponent must be finite".into()));
        }
        Ok(())
    }

    /// Inclusive size range `[ceil(min_frac n), floor(max_frac n)]`.
    pub fn size_range(&self, n: usize) -> Result<(usize, usize)> {
        // Fractions like 0.005 * 1000 land a hair above the integer.
        let low = ((self.min_frac * n as f64) - 1e-9).ceil().max(1.0) as usize;
        let high = ((self.max_frac * n as f64) + 1e-9).floor() as usize;
        if low > high {
            return Err(Error::EmptySizeRange { low, high });
        }
        Ok((low, high))
    }
}

/// Independent deterministic stream for work item `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `sample_count` sizes with `p(s) ∝ s^power_exponent` on the
/// configured range.
pub fn draw_sizes<R: Rng + ?Sized>(config: &SampleConfig, n: usize, rng: &mut R) -> Result<Vec<usize>> {
    config.validate()?;
    let (low, high) = config.size_range(n)?;
    let weights: Vec<f64> = (low..=high).map(|s| (s as f64).powf(config.power_exponent)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok((0..config.sample_count).map(|_| low + dist.sample(rng)).collect())
}

/// Outcome of a BFS-probe sample.
#[derive(Debug, Clone)]
pub struct BfsSample {
    pub view: IncompleteView,
    pub seed: NodeId,
    /// The seed's component ran out before reaching the target size.
    pub exhausted: bool,
}

/// BFS-probe sample from a uniformly random seed.
pub fn bfs_sample<R: Rng + ?Sized>(graph: &Arc<Graph>, target_size: usize, rng: &mut R) -> Result<BfsSample> {
    if graph.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let seed = rng.random_range(0..graph.node_count());
    bfs_sample_from(graph, seed, target_size)
}

/// Simulates probing in BFS order from `seed` until `|V^f ∪ V^p|` reaches
/// `target_size`. Probed nodes are Black, the frontier is Gray. The returned
/// view is re-based so that its probe counter starts at zero.
pub fn bfs_sample_from(graph: &Arc<Graph>, seed: NodeId, target_size: usize) -> Result<BfsSample> {
    graph.check_node(seed)?;
    if target_size == 0 || target_size > graph.node_count() {
        return Err(Error::InvalidConfig(format!(
            "target size {target_size} outside 1..={}",
            graph.node_count()
        )));
    }
    let mut view = IncompleteView::unobserved(Arc::clone(graph));
    let mut queue: VecDeque<NodeId> = VecDeque::new();

    let enqueue_whites = |view: &IncompleteView, u: NodeId, queue: &mut VecDeque<NodeId>| {
        queue.extend(graph.neighbors(u).iter().copied().filter(|&v| view.is_white(v)));
    };

    enqueue_whites(&view, seed, &mut queue);
    view.reveal_seed(seed);
    let mut exhausted = false;
    while view.observed_node_count() < target_size {
        let Some(u) = queue.pop_front() else {
            exhausted = true;
            break;
        };
        enqueue_whites(&view, u, &mut queue);
        view.probe(u)?;
    }
    if exhausted {
        log::warn!(
            "bfs sample from {seed}: component exhausted at {} observed nodes (target {target_size})",
            view.observed_node_count()
        );
    }
    view.rebase();
    Ok(BfsSample { view, seed, exhausted })
}

/// Member of the adversarial family: one Black hub, `n` Gray nodes, and a
/// hidden region reachable only through `g_star`.
#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub graph: Arc<Graph>,
    pub view: IncompleteView,
    /// Node id (not index) of the distinguished gray node.
    pub g_star: NodeId,
    pub n: usize,
    pub m: usize,
    pub layers: u8,
}

impl HardnessInstance {
    pub const HUB: NodeId = 0;

    /// Node id of the `i`-th gray node.
    pub fn gray(&self, i: usize) -> NodeId {
        1 + i
    }
}

/// Builds the hardness instance. Node layout: hub `0`, grays `1..=n`, then
/// hidden nodes. With two layers every gray `g_i` gets a private hidden child
/// `n + 1 + i`, and only the child of `g_star` leads to the `m` bottom nodes.
pub fn gen_hardness(n: usize, m: usize, g_star: usize, layers: u8) -> Result<HardnessInstance> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidConfig("hardness instance needs n >= 1 and m >= 1".into()));
    }
    if g_star >= n {
        return Err(Error::InvalidConfig(format!("g_star index {g_star} out of range 0..{n}")));
    }
    let mut edges: Vec<(NodeId, NodeId)> = (0..n).map(|i| (0, 1 + i)).collect();
    let star = 1 + g_star;
    let node_count = match layers {
        1 => {
            edges.extend((0..m).map(|j| (star, n + 1 + j)));
            n + m + 1
        }
        2 => {
            edges.extend((0..n).map(|i| (1 + i, n + 1 + i)));
            let gate = n + 1 + g_star;
            edges.extend((0..m).map(|j| (gate, 2 * n + 1 + j)));
            2 * n + m + 1
        }
        other => return Err(Error::InvalidConfig(format!("layers must be 1 or 2, got {other}"))),
    };
    let graph = Arc::new(Graph::from_edges(node_count, edges));
    let view = IncompleteView::new(Arc::clone(&graph), &[HardnessInstance::HUB])?;
    Ok(HardnessInstance { graph, view, g_star: star, n, m, layers })
}
