//! Learning-to-probe: h-step labels on sampled views of a reference
//! network, linear and pairwise-logistic scorers, and a prober driven by a
//! trained model.

mod dataset;
mod label;
mod linear;
mod logistic;
mod model;
mod prober;

pub use dataset::{build_training_set, DatasetOptions, PairSample, TrainingSample, TrainingSet, DEFAULT_PAIR_CAP};
pub use label::{label_benefit, label_benefit_with, LabelOracle};
pub use linear::{train_linear, RIDGE_LAMBDA};
pub use logistic::{
    train_logistic, train_logistic_traced, LogisticReport, LOGISTIC_GRADIENT_TOLERANCE, LOGISTIC_MAX_EPOCHS,
    LOGISTIC_STEP,
};
pub use model::{Model, ModelKind, Standardizer};
pub use prober::{model_prober, model_prober_with, ProberOptions, DEFAULT_LOGISTIC_POOL};
pub(crate) use prober::argmax_by_key;
