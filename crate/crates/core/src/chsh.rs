//! The CHSH game: win when `x ⊕ y = ab`, inputs uniform.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::nlbox::{cell_index, classical_box, BitMap, BoxBehavior, ClassicalBox, INPUTS};
use crate::scalar::Real;

/// Best winning probability of any local hidden variable strategy.
pub const CLASSICAL_BOUND: f64 = 0.75;

/// `cos²(π/8) = (2 + √2)/4`, the complex quantum maximum (Cirel'son bound).
pub const TSIRELSON_BOUND: f64 = 0.853_553_390_593_273_8;

/// Box fidelity above which every boolean function has trivial
/// probabilistic communication complexity (Brassard et al., quoted as ≈ 0.906).
/// Documented only; the threshold protocol is not implemented.
pub const BRASSARD_THRESHOLD: f64 = 0.906;

/// Winning probability of a perfect PR box.
pub const PR_BOX_VALUE: f64 = 1.0;

/// `cos²(π/8)` in the working scalar type.
pub fn tsirelson_bound<T: Real>() -> T {
    T::FRAC_PI_8().cos().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameResult<T> {
    /// Mean of `per_cell`.
    pub win_probability: T,
    /// `P(x ⊕ y = ab | a, b)` indexed by [`cell_index`].
    pub per_cell: [T; 4],
}

impl<T: Real> GameResult<T> {
    pub fn from_cells(per_cell: [T; 4]) -> Self {
        let sum = per_cell.iter().fold(T::zero(), |s, p| s + *p);
        Self {
            win_probability: sum / T::lit(4.0),
            per_cell,
        }
    }

    #[inline]
    pub fn cell(&self, a: bool, b: bool) -> T {
        self.per_cell[cell_index(a, b)]
    }
}

impl<T: Real> Serialize for GameResult<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let per_cell: std::collections::BTreeMap<String, f64> = INPUTS
            .iter()
            .map(|&(a, b)| {
                (
                    format!("{},{}", u8::from(a), u8::from(b)),
                    self.cell(a, b).to_f64().unwrap_or(f64::NAN),
                )
            })
            .collect();
        let mut s = serializer.serialize_struct("GameResult", 2)?;
        s.serialize_field("win_probability", &self.win_probability.to_f64())?;
        s.serialize_field("per_cell", &per_cell)?;
        s.end()
    }
}

/// Aligned text table, one row per input pair plus the average.
impl<T: Real> fmt::Display for GameResult<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3} {:>3}  {:>12}", "a", "b", "P[win]")?;
        for (a, b) in INPUTS {
            writeln!(
                f,
                "{:>3} {:>3}  {:>12.10}",
                u8::from(a),
                u8::from(b),
                self.cell(a, b)
            )?;
        }
        write!(f, "{:>7}  {:>12.10}", "mean", self.win_probability)
    }
}

/// Exact winning probability under uniform inputs.
pub fn chsh_value<T: Real>(behavior: &BoxBehavior<T>) -> GameResult<T> {
    let mut per_cell = [T::zero(); 4];
    for (a, b) in INPUTS {
        per_cell[cell_index(a, b)] = behavior.win_probability(a, b);
    }
    GameResult::from_cells(per_cell)
}

/// Best deterministic local strategy, found by enumerating all 16 pairs of
/// bit maps. Shared randomness only mixes deterministic strategies and the
/// winning probability is linear in the mixture, so it cannot do better.
/// Ties resolve to the first pair in [`BitMap::ALL`] order.
pub fn lhv_optimum<T: Real>() -> (GameResult<T>, ClassicalBox) {
    let mut best: Option<(GameResult<T>, ClassicalBox)> = None;
    for alice in BitMap::ALL {
        for bob in BitMap::ALL {
            let result = chsh_value(&classical_box::<T>(alice, bob));
            if best
                .as_ref()
                .is_none_or(|(b, _)| result.win_probability > b.win_probability)
            {
                best = Some((result, ClassicalBox { alice, bob }));
            }
        }
    }
    best.expect("sixteen strategies")
}
