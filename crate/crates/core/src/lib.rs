//! Adaptive probing of incomplete networks.
//!
//! A ground-truth [`Graph`] is explored through an [`IncompleteView`]: Black
//! nodes are probed, Gray nodes are visible probe targets, White nodes are
//! hidden. Strategies spend a probe budget to reveal as many new nodes as
//! possible. The crate provides the topology-aware planners (which read the
//! ground truth and serve as label oracles), centrality baselines that see
//! only the observed graph, and linear / pairwise-logistic models trained on
//! sampled views of a reference network.

pub mod centrality;
pub mod error;
pub mod experiment;
pub mod features;
pub mod graph;
pub mod io;
pub mod learning;
pub mod planner;
pub mod sampler;
pub mod strategy;
pub mod verify;
pub mod view;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
pub use strategy::Strategy;
pub use view::{IncompleteView, NodeColor, ProbeStep, ProbeTrace};
