use std::sync::Arc;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::features::{gray_feature_table, FeatureMask, FeatureVector, ObservedGraph};
use crate::graph::{Graph, NodeId};
use crate::sampler::{bfs_sample, draw_sizes, stream_rng, SampleConfig};

use super::label::{label_benefit_with, LabelOracle};

pub const DEFAULT_PAIR_CAP: usize = 2000;

/// One gray candidate of one sampled view with its `h`-step label.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSample {
    pub features: FeatureVector,
    pub label: f64,
    pub sample_id: usize,
    pub node: NodeId,
}

/// Ordered pair `(u, v)` of grays from the same sample; `label` is 1 iff
/// `label(u) >= label(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSample {
    pub u: FeatureVector,
    pub v: FeatureVector,
    pub label: u8,
    pub sample_id: usize,
}

impl PairSample {
    /// The 22 raw inputs, `u`'s features first.
    pub fn concatenated(&self) -> [f64; 22] {
        std::array::from_fn(|i| if i < 11 { self.u.0[i] } else { self.v.0[i - 11] })
    }
}

#[derive(Debug, Clone, Default)]
pub struct TrainingSet {
    pub points: Vec<TrainingSample>,
    pub pairs: Vec<PairSample>,
    pub samples: usize,
    pub exhausted_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetOptions {
    pub horizon: usize,
    pub oracle: LabelOracle,
    /// Maximum pairs drawn per sample.
    pub pair_cap: usize,
    /// Skip pair generation entirely (linear training only needs points).
    pub pairs: bool,
}

impl DatasetOptions {
    pub fn new(horizon: usize) -> Self {
        DatasetOptions { horizon, oracle: LabelOracle::Heuristic, pair_cap: DEFAULT_PAIR_CAP, pairs: true }
    }
}

/// Samples `config.sample_count` BFS views of `reference` and labels every
/// gray candidate. Sample `i` draws from its own RNG stream, so the result
/// does not depend on the thread count.
pub fn build_training_set(reference: &Arc<Graph>, config: &SampleConfig, options: DatasetOptions) -> Result<TrainingSet> {
    config.validate()?;
    if options.horizon == 0 {
        return Err(Error::InvalidConfig("horizon h must be at least 1".into()));
    }
    let sizes = draw_sizes(config, reference.node_count(), &mut stream_rng(config.rng_seed, 0))?;
    let per_sample: Vec<SampleOutput> = sizes
        .par_iter()
        .enumerate()
        .map(|(i, &size)| build_one(reference, config.rng_seed, i, size, options))
        .collect::<Result<_>>()?;

    let mut set = TrainingSet { samples: per_sample.len(), ..TrainingSet::default() };
    for out in per_sample {
        set.points.extend(out.points);
        set.pairs.extend(out.pairs);
        set.exhausted_samples += usize::from(out.exhausted);
    }
    Ok(set)
}

struct SampleOutput {
    points: Vec<TrainingSample>,
    pairs: Vec<PairSample>,
    exhausted: bool,
}

fn build_one(reference: &Arc<Graph>, seed: u64, sample_id: usize, size: usize, options: DatasetOptions) -> Result<SampleOutput> {
    let mut rng = stream_rng(seed, 1 + sample_id as u64);
    let sample = bfs_sample(reference, size, &mut rng)?;
    let view = &sample.view;
    let observed = ObservedGraph::from_view(view);
    let table = gray_feature_table(&observed, FeatureMask::ALL)?;
    let mut points = Vec::with_capacity(table.len());
    for (node, features) in table {
        let label = label_benefit_with(view, node, options.horizon, options.oracle)?;
        points.push(TrainingSample { features, label: label as f64, sample_id, node });
    }

    let mut pairs = Vec::new();
    let g = points.len();
    if options.pairs && g >= 2 {
        let total = g * (g - 1) / 2;
        let chosen: Vec<usize> = if total <= options.pair_cap {
            (0..total).collect()
        } else {
            let mut picked = index::sample(&mut rng, total, options.pair_cap).into_vec();
            picked.sort_unstable();
            picked
        };
        for idx in chosen {
            let (a, b) = unrank_pair(idx, g);
            // Random orientation keeps both classes and both input halves balanced.
            let (a, b) = if rng.random::<bool>() { (a, b) } else { (b, a) };
            let (pa, pb) = (&points[a], &points[b]);
            pairs.push(PairSample {
                u: pa.features,
                v: pb.features,
                label: u8::from(pa.label >= pb.label),
                sample_id,
            });
        }
    }
    Ok(SampleOutput { points, pairs, exhausted: sample.exhausted })
}

/// The `idx`-th pair `(a, b)`, `a < b`, in row-major order over `0..g`.
fn unrank_pair(mut idx: usize, g: usize) -> (usize, usize) {
    let mut a = 0;
    loop {
        let row = g - 1 - a;
        if idx < row {
            return (a, a + 1 + idx);
        }
        idx -= row;
        a += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> Arc<Graph> {
        let id = |x: usize, y: usize| y * w + x;
        let mut edges = Vec::new();
        for y in 0..h {
            for x in 0..w {
                if x + 1 < w {
                    edges.push((id(x, y), id(x + 1, y)));
                }
                if y + 1 < h {
                    edges.push((id(x, y), id(x, y + 1)));
                }
            }
        }
        Arc::new(Graph::from_edges(w * h, edges))
    }

    #[test]
    fn unrank_covers_all_pairs() {
        let g = 6;
        let pairs: Vec<_> = (0..15).map(|i| unrank_pair(i, g)).collect();
        let expected: Vec<_> = (0..g).flat_map(|a| (a + 1..g).map(move |b| (a, b))).collect();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn one_point_per_gray_and_capped_pairs() {
        let graph = grid(12, 12);
        let config = SampleConfig { min_frac: 0.1, max_frac: 0.3, sample_count: 6, rng_seed: 7, ..Default::default() };
        let mut options = DatasetOptions::new(2);
        options.pair_cap = 10;
        let set = build_training_set(&graph, &config, options).unwrap();
        assert_eq!(set.samples, 6);
        for sid in 0..6 {
            let g = set.points.iter().filter(|p| p.sample_id == sid).count();
            let pairs = set.pairs.iter().filter(|p| p.sample_id == sid).count();
            assert_eq!(pairs, (g * g.saturating_sub(1) / 2).min(10));
        }
        assert!(set.points.iter().all(|p| p.label >= 0.0 && p.features.0.iter().all(|v| v.is_finite())));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let graph = grid(8, 8);
        let config = SampleConfig { min_frac: 0.1, max_frac: 0.3, sample_count: 4, rng_seed: 3, ..Default::default() };
        let a = build_training_set(&graph, &config, DatasetOptions::new(1)).unwrap();
        let b = build_training_set(&graph, &config, DatasetOptions::new(1)).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.pairs, b.pairs);
    }
}
