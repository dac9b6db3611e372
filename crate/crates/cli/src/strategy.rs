use std::fmt;
use std::str::FromStr;

use qqm::chsh::{lhv_optimum, CLASSICAL_BOUND, PR_BOX_VALUE, TSIRELSON_BOUND};
use qqm::nlbox::{complex_quantum_box, ideal_pr_box, noisy_box, quaternionic_box};
use qqm::BoxBehavior;

/// Which box backs an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Best deterministic local strategy.
    Classical,
    /// Optimal complex-quantum CHSH measurements.
    Complex,
    /// Time-ordered `R_i` / `R_j` protocol.
    Quaternionic,
    /// Abstract PR box.
    Ideal,
    /// PR box whose `y` is flipped with probability `1 - p`.
    Noisy(f64),
}

impl Strategy {
    pub fn behavior(self) -> BoxBehavior {
        match self {
            Strategy::Classical => {
                let (_, best) = lhv_optimum::<f64>();
                qqm::nlbox::classical_box(best.alice, best.bob)
            }
            Strategy::Complex => complex_quantum_box(),
            Strategy::Quaternionic => quaternionic_box(),
            Strategy::Ideal => ideal_pr_box(),
            Strategy::Noisy(p) => noisy_box(&ideal_pr_box(), p).expect("range checked on parse"),
        }
    }

    /// CHSH value the strategy is known to reach.
    pub fn expected_chsh(self) -> f64 {
        match self {
            Strategy::Classical => CLASSICAL_BOUND,
            Strategy::Complex => TSIRELSON_BOUND,
            Strategy::Quaternionic | Strategy::Ideal => PR_BOX_VALUE,
            Strategy::Noisy(p) => p,
        }
    }

    /// Boxes that satisfy `x ⊕ y = ab` with certainty.
    pub fn is_perfect(self) -> bool {
        matches!(
            self,
            Strategy::Quaternionic | Strategy::Ideal | Strategy::Noisy(1.0)
        )
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Classical => f.write_str("classical"),
            Strategy::Complex => f.write_str("complex"),
            Strategy::Quaternionic => f.write_str("quaternionic"),
            Strategy::Ideal => f.write_str("ideal"),
            Strategy::Noisy(p) => write!(f, "noisy:{p}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classical" => Ok(Strategy::Classical),
            "complex" => Ok(Strategy::Complex),
            "quaternionic" => Ok(Strategy::Quaternionic),
            "ideal" => Ok(Strategy::Ideal),
            _ => {
                let p = s
                    .strip_prefix("noisy:")
                    .ok_or_else(|| {
                        format!(
                            "unknown strategy {s:?}; expected classical, complex, quaternionic, ideal or noisy:<p>"
                        )
                    })?
                    .parse::<f64>()
                    .map_err(|e| format!("bad noise parameter: {e}"))?;
                if (0.5..=1.0).contains(&p) {
                    Ok(Strategy::Noisy(p))
                } else {
                    Err(format!("noise parameter {p} outside [0.5, 1]"))
                }
            }
        }
    }
}
