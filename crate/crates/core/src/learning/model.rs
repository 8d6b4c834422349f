use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::features::{FeatureMask, FeatureVector, FEATURE_COUNT, FEATURE_NAMES};

const MAGIC: &str = "probe-lab-model 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Linear,
    Logistic,
}

impl ModelKind {
    /// Intercept plus one weight per feature (per half for pairs).
    pub fn weight_count(self) -> usize {
        match self {
            ModelKind::Linear => 1 + FEATURE_COUNT,
            ModelKind::Logistic => 1 + 2 * FEATURE_COUNT,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Linear => "linear",
            ModelKind::Logistic => "logistic",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "linreg" => Ok(ModelKind::Linear),
            "logistic" | "logreg" => Ok(ModelKind::Logistic),
            _ => Err(Error::InvalidConfig(format!("unknown model kind `{s}`"))),
        }
    }
}

/// Per-feature z-score parameters. Constant features get deviation 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Standardizer {
    pub means: [f64; FEATURE_COUNT],
    pub devs: [f64; FEATURE_COUNT],
}

impl Standardizer {
    pub fn identity() -> Self {
        Standardizer { means: [0.0; FEATURE_COUNT], devs: [1.0; FEATURE_COUNT] }
    }

    /// Population mean and standard deviation of each column.
    pub fn fit<'a>(rows: impl IntoIterator<Item = &'a [f64; FEATURE_COUNT]>) -> Self {
        let mut count = 0usize;
        let mut means = [0.0; FEATURE_COUNT];
        let mut m2 = [0.0; FEATURE_COUNT];
        for row in rows {
            count += 1;
            for i in 0..FEATURE_COUNT {
                let delta = row[i] - means[i];
                means[i] += delta / count as f64;
                m2[i] += delta * (row[i] - means[i]);
            }
        }
        let mut devs = [1.0; FEATURE_COUNT];
        if count > 0 {
            for i in 0..FEATURE_COUNT {
                let sd = (m2[i] / count as f64).sqrt();
                // Relative threshold: values that only differ by rounding are constant.
                if sd > 1e-12 * means[i].abs().max(1.0) {
                    devs[i] = sd;
                }
            }
        }
        Standardizer { means, devs }
    }

    pub fn apply(&self, raw: &[f64; FEATURE_COUNT]) -> [f64; FEATURE_COUNT] {
        std::array::from_fn(|i| (raw[i] - self.means[i]) / self.devs[i])
    }
}

/// A trained scorer together with its standardization and label horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub kind: ModelKind,
    pub horizon: usize,
    pub standardizer: Standardizer,
    /// `[intercept, w_1 .. w_11]` (linear) or
    /// `[intercept, w_u_1 .. w_u_11, w_v_1 .. w_v_11]` (logistic).
    pub weights: Vec<f64>,
}

impl Model {
    pub fn new(kind: ModelKind, horizon: usize, standardizer: Standardizer, weights: Vec<f64>) -> Result<Self> {
        let model = Model { kind, horizon, standardizer, weights };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::ModelFormat("horizon must be at least 1".into()));
        }
        if self.weights.len() != self.kind.weight_count() {
            return Err(Error::ModelFormat(format!(
                "{} model needs {} weights, got {}",
                self.kind,
                self.kind.weight_count(),
                self.weights.len()
            )));
        }
        if self.standardizer.devs.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(Error::ModelFormat("deviations must be positive and finite".into()));
        }
        let finite = self.weights.iter().chain(self.standardizer.means.iter()).all(|w| w.is_finite());
        if !finite {
            return Err(Error::ModelFormat("non-finite parameter".into()));
        }
        Ok(())
    }

    /// Linear model over raw features: `intercept + Σ w_i x_i` (no scaling).
    pub fn linear_raw(horizon: usize, intercept: f64, weights: [f64; FEATURE_COUNT]) -> Self {
        let mut w = vec![intercept];
        w.extend_from_slice(&weights);
        Model { kind: ModelKind::Linear, horizon, standardizer: Standardizer::identity(), weights: w }
    }

    /// Features whose weights are all zero need not be computed.
    pub fn feature_mask(&self) -> FeatureMask {
        FeatureMask(std::array::from_fn(|i| match self.kind {
            ModelKind::Linear => self.weights[1 + i] != 0.0,
            ModelKind::Logistic => self.weights[1 + i] != 0.0 || self.weights[1 + FEATURE_COUNT + i] != 0.0,
        }))
    }

    /// Predicted gain of a candidate (linear models).
    pub fn score(&self, x: &FeatureVector) -> f64 {
        let z = self.standardizer.apply(&x.0);
        let w = &self.weights;
        w[0] + z.iter().zip(&w[1..=FEATURE_COUNT]).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Logit of "u's gain is at least v's" (logistic models).
    pub fn pair_logit(&self, u: &FeatureVector, v: &FeatureVector) -> f64 {
        let zu = self.standardizer.apply(&u.0);
        let zv = self.standardizer.apply(&v.0);
        pair_logit_standardized(&self.weights, &zu, &zv)
    }

    pub fn pair_probability(&self, u: &FeatureVector, v: &FeatureVector) -> f64 {
        sigmoid(self.pair_logit(u, v))
    }

    pub fn to_text(&self) -> String {
        let join = |values: &[f64]| values.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        writeln!(out, "{MAGIC}").unwrap();
        writeln!(out, "kind {}", self.kind).unwrap();
        writeln!(out, "horizon {}", self.horizon).unwrap();
        writeln!(out, "features {}", FEATURE_NAMES.join(" ")).unwrap();
        writeln!(out, "means {}", join(&self.standardizer.means)).unwrap();
        writeln!(out, "devs {}", join(&self.standardizer.devs)).unwrap();
        writeln!(out, "weights {}", join(&self.weights)).unwrap();
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some(MAGIC) {
            return Err(Error::ModelFormat(format!("missing `{MAGIC}` header")));
        }
        let mut field = |key: &str| -> Result<Vec<String>> {
            let line = lines.next().ok_or_else(|| Error::ModelFormat(format!("missing `{key}` line")))?;
            let mut tokens = line.split_whitespace();
            if tokens.next() != Some(key) {
                return Err(Error::ModelFormat(format!("expected `{key}`, found `{line}`")));
            }
            Ok(tokens.map(str::to_string).collect())
        };
        let single = |v: Vec<String>, key: &str| -> Result<String> {
            match <[String; 1]>::try_from(v) {
                Ok([s]) => Ok(s),
                Err(_) => Err(Error::ModelFormat(format!("`{key}` takes one value"))),
            }
        };
        let floats = |v: Vec<String>, key: &str| -> Result<Vec<f64>> {
            v.iter()
                .map(|s| s.parse::<f64>().map_err(|_| Error::ModelFormat(format!("bad number `{s}` in `{key}`"))))
                .collect()
        };
        let kind: ModelKind = single(field("kind")?, "kind")?.parse()?;
        let horizon: usize = single(field("horizon")?, "horizon")?
            .parse()
            .map_err(|_| Error::ModelFormat("bad horizon".into()))?;
        let names = field("features")?;
        if names != FEATURE_NAMES {
            return Err(Error::ModelFormat(format!("unexpected feature list {names:?}")));
        }
        let array = |v: Vec<f64>, key: &str| -> Result<[f64; FEATURE_COUNT]> {
            <[f64; FEATURE_COUNT]>::try_from(v)
                .map_err(|_| Error::ModelFormat(format!("`{key}` needs {FEATURE_COUNT} values")))
        };
        let means = array(floats(field("means")?, "means")?, "means")?;
        let devs = array(floats(field("devs")?, "devs")?, "devs")?;
        let weights = floats(field("weights")?, "weights")?;
        if lines.next().is_some() {
            return Err(Error::ModelFormat("trailing content".into()));
        }
        Model::new(kind, horizon, Standardizer { means, devs }, weights)
    }
}

pub(crate) fn pair_logit_standardized(w: &[f64], zu: &[f64; FEATURE_COUNT], zv: &[f64; FEATURE_COUNT]) -> f64 {
    let (wu, wv) = w[1..].split_at(FEATURE_COUNT);
    w[0] + zu.iter().zip(wu).map(|(a, b)| a * b).sum::<f64>() + zv.iter().zip(wv).map(|(a, b)| a * b).sum::<f64>()
}

pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}
