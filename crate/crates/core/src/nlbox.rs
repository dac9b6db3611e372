//! Bipartite input/output boxes and their exact behaviours.
//!
//! A box takes one bit from each party (`a` for Alice, `b` for Bob) and
//! returns one bit to each (`x`, `y`). Behaviours are stored as exact joint
//! distributions; sampling sits on top of them.
//!
//! Measurement outcomes are encoded as `+ ↦ 0`, `− ↦ 1`.

use std::collections::BTreeMap;

use num_traits::One;
use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qlinalg::QMatrix;
use crate::qsystem::{self, gates, Distribution, Register, ScheduledOp, Tick};
use crate::quaternion::Quaternion;
use crate::scalar::Real;

/// Index of the `(a, b)` input cell, `2a + b`.
#[inline]
pub fn cell_index(a: bool, b: bool) -> usize {
    (usize::from(a) << 1) | usize::from(b)
}

/// Index of the `(x, y)` outcome within a cell, `2x + y`.
#[inline]
pub fn outcome_index(x: bool, y: bool) -> usize {
    (usize::from(x) << 1) | usize::from(y)
}

/// All four `(a, b)` input pairs in cell order.
pub const INPUTS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

/// A device answering `(a, b)` with an exact joint distribution over `(x, y)`.
pub trait NonLocalBox<T: Real> {
    /// `[P(00), P(01), P(10), P(11)]` indexed by [`outcome_index`].
    fn joint(&self, a: bool, b: bool) -> [T; 4];

    /// Tabulates all four cells and validates the result.
    fn behavior(&self) -> Result<BoxBehavior<T>> {
        let mut cells = [[T::zero(); 4]; 4];
        for (a, b) in INPUTS {
            cells[cell_index(a, b)] = self.joint(a, b);
        }
        BoxBehavior::new(cells)
    }
}

/// Exact behaviour table: `cells[2a + b][2x + y] = P(x, y | a, b)`.
///
/// Construction checks that every cell is a distribution and that the box is
/// non-signalling: Alice's marginal does not depend on `b`, Bob's does not
/// depend on `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBehavior<T> {
    cells: [[T; 4]; 4],
}

impl<T: Real> BoxBehavior<T> {
    pub fn new(cells: [[T; 4]; 4]) -> Result<Self> {
        let tol = T::validation_tolerance();
        for (idx, cell) in cells.iter().enumerate() {
            if cell.iter().any(|p| !p.is_finite() || *p < -tol) {
                return Err(Error::InvalidBehavior(format!(
                    "cell {} has a negative probability",
                    cell_label(idx)
                )));
            }
            let total = cell.iter().fold(T::zero(), |s, p| s + *p);
            if (total - T::one()).abs() > tol {
                return Err(Error::InvalidBehavior(format!(
                    "cell {} sums to {total}",
                    cell_label(idx)
                )));
            }
        }
        let behavior = Self { cells };
        let deviation = behavior.signalling_deviation();
        if deviation > tol {
            return Err(Error::InvalidBehavior(format!("signalling by {deviation}")));
        }
        Ok(behavior)
    }

    #[inline]
    pub fn cells(&self) -> &[[T; 4]; 4] {
        &self.cells
    }

    #[inline]
    pub fn prob(&self, a: bool, b: bool, x: bool, y: bool) -> T {
        self.cells[cell_index(a, b)][outcome_index(x, y)]
    }

    /// `P(x ⊕ y = ab | a, b)`.
    pub fn win_probability(&self, a: bool, b: bool) -> T {
        let target = a & b;
        [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .filter(|(x, y)| (x ^ y) == target)
            .fold(T::zero(), |s, (x, y)| s + self.prob(a, b, x, y))
    }

    /// `P(x = 1 | a, b)`.
    pub fn alice_marginal(&self, a: bool, b: bool) -> T {
        self.prob(a, b, true, false) + self.prob(a, b, true, true)
    }

    /// `P(y = 1 | a, b)`.
    pub fn bob_marginal(&self, a: bool, b: bool) -> T {
        self.prob(a, b, false, true) + self.prob(a, b, true, true)
    }

    /// Largest change in one party's marginal caused by flipping the other
    /// party's input.
    pub fn signalling_deviation(&self) -> T {
        let mut worst = T::zero();
        for fixed in [false, true] {
            let alice =
                (self.alice_marginal(fixed, false) - self.alice_marginal(fixed, true)).abs();
            let bob = (self.bob_marginal(false, fixed) - self.bob_marginal(true, fixed)).abs();
            worst = worst.max(alice).max(bob);
        }
        worst
    }

    pub fn is_non_signalling(&self, tol: T) -> bool {
        self.signalling_deviation() <= tol
    }

    /// Draws `(x, y)` for inputs `(a, b)`.
    pub fn sample<R: Rng + ?Sized>(&self, a: bool, b: bool, rng: &mut R) -> (bool, bool) {
        let dist = Distribution::new(2, self.cells[cell_index(a, b)].to_vec())
            .expect("cells validated at construction");
        let xy = dist.sample(rng);
        (xy & 2 != 0, xy & 1 != 0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.cells
            .iter()
            .flatten()
            .zip(other.cells.iter().flatten())
            .fold(T::zero(), |m, (p, q)| m.max((*p - *q).abs()))
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// JSON object keyed `"a,b"`, each value a list of `{"x", "y", "p"}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("behavior serializes")
    }
}

impl BoxBehavior<f64> {
    /// Inverse of [`BoxBehavior::to_json`]. Outcomes missing from a cell
    /// have probability zero.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: BTreeMap<String, Vec<OutcomeEntry>> = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidBehavior(e.to_string()))?;
        let mut cells = [[0.0; 4]; 4];
        let mut seen = [false; 4];
        for (key, outcomes) in raw {
            let idx = parse_cell_label(&key)
                .ok_or_else(|| Error::InvalidBehavior(format!("bad cell key {key:?}")))?;
            seen[idx] = true;
            for o in outcomes {
                if o.x > 1 || o.y > 1 {
                    return Err(Error::InvalidBehavior("outputs must be bits".into()));
                }
                cells[idx][outcome_index(o.x == 1, o.y == 1)] += o.p;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidBehavior(format!(
                "missing cell {}",
                cell_label(missing)
            )));
        }
        Self::new(cells)
    }
}

impl<T: Real> NonLocalBox<T> for BoxBehavior<T> {
    fn joint(&self, a: bool, b: bool) -> [T; 4] {
        self.cells[cell_index(a, b)]
    }

    fn behavior(&self) -> Result<BoxBehavior<T>> {
        Ok(self.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct OutcomeEntry {
    x: u8,
    y: u8,
    p: f64,
}

impl<T: Real> Serialize for BoxBehavior<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        for (idx, cell) in self.cells.iter().enumerate() {
            let outcomes: Vec<OutcomeEntry> = cell
                .iter()
                .enumerate()
                .map(|(xy, p)| OutcomeEntry {
                    x: (xy >> 1) as u8,
                    y: (xy & 1) as u8,
                    p: p.to_f64().unwrap_or(f64::NAN),
                })
                .collect();
            map.serialize_entry(&cell_label(idx), &outcomes)?;
        }
        map.end()
    }
}

fn cell_label(idx: usize) -> String {
    format!("{},{}", idx >> 1, idx & 1)
}

fn parse_cell_label(key: &str) -> Option<usize> {
    match key.trim() {
        "0,0" => Some(0),
        "0,1" => Some(1),
        "1,0" => Some(2),
        "1,1" => Some(3),
        _ => None,
    }
}

/// Popescu–Rohrlich box: `x` uniform, `y = x ⊕ ab`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdealBox;

impl<T: Real> NonLocalBox<T> for IdealBox {
    fn joint(&self, a: bool, b: bool) -> [T; 4] {
        let half = T::lit(0.5);
        let mut out = [T::zero(); 4];
        for x in [false, true] {
            out[outcome_index(x, x ^ (a & b))] = half;
        }
        out
    }
}

pub fn ideal_pr_box<T: Real>() -> BoxBehavior<T> {
    IdealBox.behavior().expect("ideal box is a valid behavior")
}

/// The five synchronised time tags `t₁ < … < t₅` of the quaternionic
/// protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    times: [Tick; 5],
}

impl Schedule {
    pub fn new(times: [u64; 5]) -> Result<Self> {
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedSchedule);
        }
        Ok(Self {
            times: times.map(Tick),
        })
    }

    /// Ticks `1, 2, 3, 4, 5`.
    pub fn standard() -> Self {
        Self::new([1, 2, 3, 4, 5]).expect("increasing")
    }

    #[inline]
    pub fn times(&self) -> [Tick; 5] {
        self.times
    }

    /// Alice applies `R_i` at `t₁` on input 0 and at `t₃` on input 1.
    #[inline]
    pub fn alice_time(&self, a: bool) -> Tick {
        if a {
            self.times[2]
        } else {
            self.times[0]
        }
    }

    /// Bob applies `R_j` at `t₄` on input 0 and at `t₂` on input 1.
    #[inline]
    pub fn bob_time(&self, b: bool) -> Tick {
        if b {
            self.times[1]
        } else {
            self.times[3]
        }
    }

    /// Both parties measure at `t₅`.
    #[inline]
    pub fn measurement_time(&self) -> Tick {
        self.times[4]
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Self::standard()
    }
}

/// Perfect PR box built from non-commuting local operations.
///
/// The parties share `(|00⟩ + k|11⟩)/√2`. Alice's `R_i` precedes Bob's `R_j`
/// unless `a = b = 1`, so the state before measurement is `|φ₊⟩` in three
/// cells and `|φ₋⟩` in the fourth. Measuring both halves in the `+/−` basis
/// then gives equal bits on `|φ₊⟩` and opposite bits on `|φ₋⟩`.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuaternionicBox {
    pub schedule: Schedule,
}

impl QuaternionicBox {
    pub fn new(schedule: Schedule) -> Self {
        Self { schedule }
    }

    /// The shared entangled state `(|00⟩ + k|11⟩)/√2`.
    pub fn shared_state<T: Real>() -> Register<T> {
        qsystem::bell_phi(Quaternion::k()).expect("k has unit norm")
    }

    /// Alice's and Bob's scheduled gates for inputs `(a, b)`.
    pub fn operations<T: Real>(&self, a: bool, b: bool) -> [ScheduledOp<T>; 2] {
        [
            ScheduledOp::new(self.schedule.alice_time(a), 0, gates::r_i()).expect("R_i unitary"),
            ScheduledOp::new(self.schedule.bob_time(b), 1, gates::r_j()).expect("R_j unitary"),
        ]
    }

    /// State reached just before the measurements at `t₅`.
    pub fn pre_measurement_state<T: Real>(&self, a: bool, b: bool) -> Register<T> {
        qsystem::run_schedule(&Self::shared_state(), &self.operations(a, b))
            .expect("schedule has distinct tags")
    }
}

impl<T: Real> NonLocalBox<T> for QuaternionicBox {
    fn joint(&self, a: bool, b: bool) -> [T; 4] {
        let state = self.pre_measurement_state(a, b);
        let dist = qsystem::measure_product_basis(&state, &[gates::hadamard(), gates::hadamard()])
            .expect("real Hadamard basis change");
        [dist.prob(0), dist.prob(1), dist.prob(2), dist.prob(3)]
    }
}

pub fn quaternionic_box<T: Real>() -> BoxBehavior<T> {
    QuaternionicBox::default()
        .behavior()
        .expect("quaternionic box is a valid behavior")
}

/// Deterministic local response `bit → bit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BitMap {
    Zero,
    One,
    Identity,
    Not,
}

impl BitMap {
    pub const ALL: [BitMap; 4] = [BitMap::Zero, BitMap::One, BitMap::Identity, BitMap::Not];

    #[inline]
    pub fn apply(self, bit: bool) -> bool {
        match self {
            BitMap::Zero => false,
            BitMap::One => true,
            BitMap::Identity => bit,
            BitMap::Not => !bit,
        }
    }
}

/// Deterministic local strategy `x = f_a(a)`, `y = f_b(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalBox {
    pub alice: BitMap,
    pub bob: BitMap,
}

impl<T: Real> NonLocalBox<T> for ClassicalBox {
    fn joint(&self, a: bool, b: bool) -> [T; 4] {
        let mut out = [T::zero(); 4];
        out[outcome_index(self.alice.apply(a), self.bob.apply(b))] = T::one();
        out
    }
}

pub fn classical_box<T: Real>(alice: BitMap, bob: BitMap) -> BoxBehavior<T> {
    ClassicalBox { alice, bob }
        .behavior()
        .expect("deterministic local boxes are non-signalling")
}

/// Optimal complex-quantum CHSH strategy on `|φ₊⟩`.
///
/// Alice measures at angle `0` or `π/4`, Bob at `π/8` or `−π/8`, each through
/// a real rotation followed by a computational readout. Real gates commute
/// with every amplitude, so no time tags are needed.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexQuantumBox;

impl ComplexQuantumBox {
    pub fn alice_angle<T: Real>(a: bool) -> T {
        if a {
            T::FRAC_PI_4()
        } else {
            T::zero()
        }
    }

    pub fn bob_angle<T: Real>(b: bool) -> T {
        if b {
            -T::FRAC_PI_8()
        } else {
            T::FRAC_PI_8()
        }
    }

    pub fn basis_changes<T: Real>(a: bool, b: bool) -> [QMatrix<T>; 2] {
        [
            gates::rotation(Self::alice_angle(a)),
            gates::rotation(Self::bob_angle(b)),
        ]
    }
}

impl<T: Real> NonLocalBox<T> for ComplexQuantumBox {
    fn joint(&self, a: bool, b: bool) -> [T; 4] {
        let shared = qsystem::bell_phi(Quaternion::one()).expect("unit phase");
        let dist = qsystem::measure_product_basis(&shared, &Self::basis_changes(a, b))
            .expect("real rotations");
        [dist.prob(0), dist.prob(1), dist.prob(2), dist.prob(3)]
    }
}

pub fn complex_quantum_box<T: Real>() -> BoxBehavior<T> {
    ComplexQuantumBox
        .behavior()
        .expect("quantum box is a valid behavior")
}

/// With probability `p` the inner box answers faithfully, otherwise Bob's
/// bit is flipped.
#[derive(Debug, Clone)]
pub struct NoisyBox<B, T> {
    inner: B,
    fidelity: T,
}

impl<B, T: Real> NoisyBox<B, T> {
    pub fn new(inner: B, fidelity: T) -> Result<Self> {
        if !(fidelity >= T::lit(0.5) && fidelity <= T::one()) {
            return Err(Error::NoiseOutOfRange(
                fidelity.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self { inner, fidelity })
    }

    #[inline]
    pub fn fidelity(&self) -> T {
        self.fidelity
    }
}

impl<B: NonLocalBox<T>, T: Real> NonLocalBox<T> for NoisyBox<B, T> {
    fn joint(&self, a: bool, b: bool) -> [T; 4] {
        let clean = self.inner.joint(a, b);
        let p = self.fidelity;
        let mut out = [T::zero(); 4];
        for x in [false, true] {
            for y in [false, true] {
                out[outcome_index(x, y)] =
                    p * clean[outcome_index(x, y)] + (T::one() - p) * clean[outcome_index(x, !y)];
            }
        }
        out
    }
}

/// Cell-wise mixture of `inner` with its `y`-flipped version.
pub fn noisy_box<T: Real>(inner: &BoxBehavior<T>, fidelity: T) -> Result<BoxBehavior<T>> {
    NoisyBox::new(inner, fidelity)?.behavior()
}

impl<T: Real, B: NonLocalBox<T> + ?Sized> NonLocalBox<T> for &B {
    fn joint(&self, a: bool, b: bool) -> [T; 4] {
        (**self).joint(a, b)
    }
}
