use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::planner::{exact_optimal, tada_heuristic, tada_probe, ExactConfig};
use crate::view::IncompleteView;

/// Planner used to continue after the first probe when labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelOracle {
    #[default]
    Heuristic,
    Tada,
    Exact,
}

impl fmt::Display for LabelOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelOracle::Heuristic => "heuristic",
            LabelOracle::Tada => "tada",
            LabelOracle::Exact => "exact",
        })
    }
}

impl FromStr for LabelOracle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "heuristic" | "tada-h" => Ok(LabelOracle::Heuristic),
            "tada" => Ok(LabelOracle::Tada),
            "exact" => Ok(LabelOracle::Exact),
            _ => Err(Error::InvalidConfig(format!("unknown label oracle `{s}`"))),
        }
    }
}

/// `h`-step benefit of probing gray `u`: probe it, continue with the
/// heuristic planner for `h - 1` probes, count every newly observed node.
pub fn label_benefit(view: &IncompleteView, u: NodeId, h: usize) -> Result<usize> {
    label_benefit_with(view, u, h, LabelOracle::Heuristic)
}

pub fn label_benefit_with(view: &IncompleteView, u: NodeId, h: usize, oracle: LabelOracle) -> Result<usize> {
    if h == 0 {
        return Err(Error::InvalidConfig("horizon h must be at least 1".into()));
    }
    let mut scratch = view.clone();
    let first = scratch.probe(u)?;
    if h == 1 {
        return Ok(first);
    }
    let rest = match oracle {
        LabelOracle::Heuristic => tada_heuristic(&mut scratch, h - 1)?.total_new,
        LabelOracle::Tada => tada_probe(&mut scratch, h - 1)?.total_new,
        LabelOracle::Exact => exact_optimal(&scratch, h - 1, &ExactConfig::from_env())?.opt_value,
    };
    Ok(first + rest)
}
