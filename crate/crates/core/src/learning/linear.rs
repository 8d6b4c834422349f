use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::features::FEATURE_COUNT;

use super::dataset::TrainingSample;
use super::model::{Model, ModelKind, Standardizer};

pub const RIDGE_LAMBDA: f64 = 1e-6;

/// Ridge least squares on z-scored features, solved in closed form. The
/// intercept is not penalized.
pub fn train_linear(samples: &[TrainingSample], horizon: usize) -> Result<Model> {
    let p = 1 + FEATURE_COUNT;
    if samples.len() < p {
        return Err(Error::Training(format!("linear model needs at least {p} samples, got {}", samples.len())));
    }
    let standardizer = Standardizer::fit(samples.iter().map(|s| &s.features.0));
    let mut gram = DMatrix::<f64>::zeros(p, p);
    let mut rhs = DVector::<f64>::zeros(p);
    let mut row = vec![0.0; p];
    for s in samples {
        row[0] = 1.0;
        row[1..].copy_from_slice(&standardizer.apply(&s.features.0));
        for i in 0..p {
            rhs[i] += row[i] * s.label;
            for j in 0..p {
                gram[(i, j)] += row[i] * row[j];
            }
        }
    }
    for i in 1..p {
        gram[(i, i)] += RIDGE_LAMBDA;
    }
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Training("normal equations are singular even with ridge".into()))?;
    let w = chol.solve(&rhs);
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::Training("non-finite solution".into()));
    }
    Model::new(ModelKind::Linear, horizon, standardizer, w.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureVector;

    fn sample(features: [f64; 11], label: f64) -> TrainingSample {
        TrainingSample { features: FeatureVector(features), label, sample_id: 0, node: 0 }
    }

    fn synthetic(count: usize) -> Vec<TrainingSample> {
        (0..count)
            .map(|i| {
                let x = i as f64;
                let mut f = [0.0; 11];
                f[0] = (x * 0.37).sin();
                f[1] = (x * 1.3).cos() * 2.0;
                f[6] = (i % 7) as f64 + 1.0;
                f[7] = 5.0;
                f[10] = (x * 0.11).sin() + 0.5 * (x * 0.71).cos();
                sample(f, 2.0 * f[6] + 1.0)
            })
            .collect()
    }

    #[test]
    fn constant_labels_give_intercept_only() {
        let data: Vec<_> = synthetic(30).into_iter().map(|s| sample(s.features.0, 3.0)).collect();
        let m = train_linear(&data, 1).unwrap();
        assert!((m.weights[0] - 3.0).abs() < 1e-9);
        assert!(m.weights[1..].iter().all(|w| w.abs() < 1e-6));
    }

    #[test]
    fn recovers_degree_relation() {
        let data = synthetic(40);
        let m = train_linear(&data, 1).unwrap();
        for s in &data {
            assert!((m.score(&s.features) - s.label).abs() < 1e-6);
        }
    }

    #[test]
    fn duplication_does_not_move_predictions() {
        let data = synthetic(25);
        let doubled: Vec<_> = data.iter().chain(data.iter()).cloned().collect();
        let a = train_linear(&data, 1).unwrap();
        let b = train_linear(&doubled, 1).unwrap();
        for s in &data {
            assert!((a.score(&s.features) - b.score(&s.features)).abs() < 1e-6);
        }
    }

    #[test]
    fn too_few_samples() {
        assert!(train_linear(&synthetic(5), 1).is_err());
    }
}
