use crate::error::{Error, Result};
use crate::features::FEATURE_COUNT;

use super::dataset::PairSample;
use super::model::{pair_logit_standardized, sigmoid, Model, ModelKind, Standardizer};

pub const LOGISTIC_STEP: f64 = 0.1;
pub const LOGISTIC_MAX_EPOCHS: usize = 5000;
pub const LOGISTIC_GRADIENT_TOLERANCE: f64 = 1e-6;

/// Per-epoch diagnostics of logistic training.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticReport {
    /// Mean log loss before each update, then after the last one.
    pub losses: Vec<f64>,
    pub epochs: usize,
    pub gradient_norm: f64,
    pub accuracy: f64,
}

pub fn train_logistic(pairs: &[PairSample], horizon: usize) -> Result<Model> {
    train_logistic_traced(pairs, horizon).map(|(m, _)| m)
}

/// Full-batch gradient descent on the mean log loss from zero weights. Both
/// halves of a pair share one standardizer, fitted on all pair members.
pub fn train_logistic_traced(pairs: &[PairSample], horizon: usize) -> Result<(Model, LogisticReport)> {
    let positives = pairs.iter().filter(|p| p.label == 1).count();
    if positives == 0 || positives == pairs.len() {
        return Err(Error::Training("logistic training needs both pair classes".into()));
    }
    let standardizer = Standardizer::fit(pairs.iter().flat_map(|p| [&p.u.0, &p.v.0]));
    let data: Vec<([f64; FEATURE_COUNT], [f64; FEATURE_COUNT], f64)> = pairs
        .iter()
        .map(|p| (standardizer.apply(&p.u.0), standardizer.apply(&p.v.0), f64::from(p.label)))
        .collect();
    let dim = 1 + 2 * FEATURE_COUNT;
    let n = data.len() as f64;
    let mut w = vec![0.0; dim];
    let mut losses = Vec::new();
    let mut grad = vec![0.0; dim];
    let mut epochs = 0;
    let mut gradient_norm;

    loop {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut loss = 0.0;
        for (zu, zv, y) in &data {
            let t = pair_logit_standardized(&w, zu, zv);
            loss += log1p_exp(t) - y * t;
            let r = sigmoid(t) - y;
            grad[0] += r;
            for i in 0..FEATURE_COUNT {
                grad[1 + i] += r * zu[i];
                grad[1 + FEATURE_COUNT + i] += r * zv[i];
            }
        }
        losses.push(loss / n);
        grad.iter_mut().for_each(|g| *g /= n);
        gradient_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gradient_norm < LOGISTIC_GRADIENT_TOLERANCE || epochs == LOGISTIC_MAX_EPOCHS {
            break;
        }
        for (wi, gi) in w.iter_mut().zip(&grad) {
            *wi -= LOGISTIC_STEP * gi;
        }
        epochs += 1;
    }
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::Training("logistic weights diverged".into()));
    }
    let correct = data
        .iter()
        .filter(|(zu, zv, y)| (pair_logit_standardized(&w, zu, zv) >= 0.0) == (*y == 1.0))
        .count();
    let report = LogisticReport { losses, epochs, gradient_norm, accuracy: correct as f64 / n };
    Ok((Model::new(ModelKind::Logistic, horizon, standardizer, w)?, report))
}

/// `ln(1 + e^t)` without overflow.
fn log1p_exp(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}
