//! Multi-qubit quaternionic registers driven by time-ordered local operations.
//!
//! Local gates on different parties do not commute once their entries leave
//! the complex subalgebra, so there is no order-free joint operation such as
//! `R_i ⊗ R_j`. Experiments are therefore described as a set of
//! [`ScheduledOp`]s with pairwise distinct time tags and executed in tag order
//! by [`run_schedule`].

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlinalg::{QMatrix, QVector};
use crate::quaternion::Quaternion;
use crate::scalar::Real;

/// Standard single-qubit gates.
pub mod gates {
    use super::*;

    /// `diag(1, i)`.
    pub fn r_i<T: Real>() -> QMatrix<T> {
        QMatrix::diag(&[Quaternion::one(), Quaternion::i()])
    }

    /// `diag(1, j)`.
    pub fn r_j<T: Real>() -> QMatrix<T> {
        QMatrix::diag(&[Quaternion::one(), Quaternion::j()])
    }

    /// `diag(1, k)`.
    pub fn r_k<T: Real>() -> QMatrix<T> {
        QMatrix::diag(&[Quaternion::one(), Quaternion::k()])
    }

    /// Real Hadamard; maps `|+⟩ ↦ |0⟩` and `|−⟩ ↦ |1⟩`.
    pub fn hadamard<T: Real>() -> QMatrix<T> {
        let s = T::FRAC_1_SQRT_2();
        QMatrix::from_reals(2, 2, &[s, s, s, -s]).expect("2x2")
    }

    /// Real rotation `[[cos θ, sin θ], [−sin θ, cos θ]]`.
    pub fn rotation<T: Real>(theta: T) -> QMatrix<T> {
        let (s, c) = theta.sin_cos();
        QMatrix::from_reals(2, 2, &[c, s, -s, c]).expect("2x2")
    }
}

/// Totally ordered time tag. Only the relative order of tags is meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Tick(pub u64);

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledOp<T> {
    time: Tick,
    party: usize,
    gate: QMatrix<T>,
}

impl<T: Real> ScheduledOp<T> {
    /// Rejects gates that are not 2x2 unitaries.
    pub fn new(time: Tick, party: usize, gate: QMatrix<T>) -> Result<Self> {
        check_qubit_gate(&gate)?;
        Ok(Self { time, party, gate })
    }

    #[inline]
    pub fn time(&self) -> Tick {
        self.time
    }

    #[inline]
    pub fn party(&self) -> usize {
        self.party
    }

    #[inline]
    pub fn gate(&self) -> &QMatrix<T> {
        &self.gate
    }
}

/// An `n`-qubit state. Amplitude index bits are read most-significant first,
/// so party 0 owns the highest bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Register<T> {
    n_parties: usize,
    state: QVector<T>,
}

impl<T: Real> Register<T> {
    pub fn new(n_parties: usize, state: QVector<T>) -> Result<Self> {
        let expected = dim_for(n_parties);
        if state.dim() != expected {
            return Err(Error::RegisterSize {
                n_parties,
                expected,
                found: state.dim(),
            });
        }
        if !state.is_normalized(T::validation_tolerance()) {
            return Err(Error::NotNormalized {
                norm_sqr: state.norm_sqr().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { n_parties, state })
    }

    /// `|bits⟩` where `bits` is read with party 0 as the highest bit.
    pub fn basis_state(n_parties: usize, bits: usize) -> Self {
        Self {
            n_parties,
            state: QVector::basis(dim_for(n_parties), bits),
        }
    }

    #[inline]
    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    #[inline]
    pub fn state(&self) -> &QVector<T> {
        &self.state
    }

    #[inline]
    pub fn amplitude(&self, bits: usize) -> Quaternion<T> {
        self.state.amps()[bits]
    }

    pub fn inner(&self, other: &Self) -> Result<Quaternion<T>> {
        self.state.inner(&other.state)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.n_parties == other.n_parties && self.state.approx_eq(&other.state, tol)
    }

    /// Bit-string label of a basis index, party 0 first.
    pub fn label(&self, bits: usize) -> String {
        bit_label(bits, self.n_parties)
    }

    /// Amplitudes with their basis labels, for JSON state dumps.
    pub fn dump(&self) -> Vec<AmplitudeEntry> {
        self.state
            .amps()
            .iter()
            .enumerate()
            .map(|(idx, a)| AmplitudeEntry {
                basis: self.label(idx),
                amplitude: a.to_array().map(|c| c.to_f64().unwrap_or(f64::NAN)),
            })
            .collect()
    }

    fn bit_mask(&self, party: usize) -> Result<usize> {
        if party >= self.n_parties {
            return Err(Error::PartyOutOfRange {
                party,
                n_parties: self.n_parties,
            });
        }
        Ok(1 << (self.n_parties - 1 - party))
    }
}

/// One row of a state dump: `{"basis": "01", "amplitude": [w, x, y, z]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeEntry {
    pub basis: String,
    pub amplitude: [f64; 4],
}

/// Applies a 2x2 unitary to one party: along that party's bit,
/// `a'[..x..] = Σ_{x'} gate[x][x'] · a[..x'..]` with the gate entry on the left.
pub fn apply_local<T: Real>(
    reg: &Register<T>,
    party: usize,
    gate: &QMatrix<T>,
) -> Result<Register<T>> {
    check_qubit_gate(gate)?;
    let mask = reg.bit_mask(party)?;
    let amps = reg.state.amps();
    let mut out = amps.to_vec();
    let (g00, g01, g10, g11) = (
        gate.get(0, 0),
        gate.get(0, 1),
        gate.get(1, 0),
        gate.get(1, 1),
    );
    for i0 in (0..amps.len()).filter(|i| i & mask == 0) {
        let i1 = i0 | mask;
        out[i0] = g00 * amps[i0] + g01 * amps[i1];
        out[i1] = g10 * amps[i0] + g11 * amps[i1];
    }
    Ok(Register {
        n_parties: reg.n_parties,
        state: QVector::new(out)?,
    })
}

/// Applies `ops` in ascending time order. Duplicate time tags are rejected:
/// the outcome depends on the order, so simultaneity has no meaning here.
pub fn run_schedule<T: Real>(reg: &Register<T>, ops: &[ScheduledOp<T>]) -> Result<Register<T>> {
    let mut ordered: Vec<&ScheduledOp<T>> = ops.iter().collect();
    ordered.sort_by_key(|op| op.time);
    if let Some(w) = ordered.windows(2).find(|w| w[0].time == w[1].time) {
        return Err(Error::DuplicateTime(w[0].time.0));
    }
    ordered
        .into_iter()
        .try_fold(reg.clone(), |r, op| apply_local(&r, op.party, &op.gate))
}

/// Exact outcome probabilities after a local basis change on every party.
///
/// `bases[p]` maps party `p`'s measurement basis onto the computational one.
/// The changes are applied without time tags, which is only sound for real
/// matrices (they commute with every quaternion); anything else is rejected
/// and must go through [`run_schedule`] first.
pub fn measure_product_basis<T: Real>(
    reg: &Register<T>,
    bases: &[QMatrix<T>],
) -> Result<Distribution<T>> {
    if bases.len() != reg.n_parties {
        return Err(Error::DimensionMismatch {
            expected: reg.n_parties,
            found: bases.len(),
        });
    }
    let mut rotated = reg.clone();
    for (party, basis) in bases.iter().enumerate() {
        check_qubit_gate(basis)?;
        if !basis.is_real(T::complex_tolerance()) {
            return Err(Error::NonRealBasisChange { party });
        }
        rotated = apply_local(&rotated, party, basis)?;
    }
    Ok(computational_distribution(&rotated))
}

/// Norm-squared rule in the computational basis.
pub fn computational_distribution<T: Real>(reg: &Register<T>) -> Distribution<T> {
    Distribution {
        n_bits: reg.n_parties,
        probs: reg.state.amps().iter().map(|a| a.norm_sqr()).collect(),
    }
}

/// `(|00⟩ + phase |11⟩)/√2`; `phase` must have unit norm.
pub fn bell_phi<T: Real>(phase: Quaternion<T>) -> Result<Register<T>> {
    let norm = phase.norm();
    if (norm - T::one()).abs() > T::validation_tolerance() {
        return Err(Error::NonUnitPhase {
            norm: norm.to_f64().unwrap_or(f64::NAN),
        });
    }
    let s = T::FRAC_1_SQRT_2();
    let amps = vec![
        Quaternion::real(s),
        Quaternion::zero(),
        Quaternion::zero(),
        phase.scale(s),
    ];
    Register::new(2, QVector::new(amps)?)
}

/// Exact distribution over `n_bits`-bit outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    n_bits: usize,
    probs: Vec<T>,
}

impl<T: Real> Distribution<T> {
    /// Checks length, non-negativity and normalization.
    pub fn new(n_bits: usize, probs: Vec<T>) -> Result<Self> {
        if probs.len() != dim_for(n_bits) {
            return Err(Error::MalformedDistribution(format!(
                "{} probabilities for {n_bits} bits",
                probs.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < T::zero()) {
            return Err(Error::MalformedDistribution(
                "negative or non-finite probability".into(),
            ));
        }
        let total = probs.iter().fold(T::zero(), |a, b| a + *b);
        if (total - T::one()).abs() > T::validation_tolerance() {
            return Err(Error::MalformedDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { n_bits, probs })
    }

    /// Point mass on one outcome.
    pub fn point(n_bits: usize, outcome: usize) -> Self {
        let mut probs = vec![T::zero(); dim_for(n_bits)];
        probs[outcome] = T::one();
        Self { n_bits, probs }
    }

    #[inline]
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    #[inline]
    pub fn prob(&self, outcome: usize) -> T {
        self.probs[outcome]
    }

    #[inline]
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn total(&self) -> T {
        self.probs.iter().fold(T::zero(), |a, b| a + *b)
    }

    pub fn label(&self, outcome: usize) -> String {
        bit_label(outcome, self.n_bits)
    }

    /// Draws one outcome by inverting the cumulative distribution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = T::lit(rng.gen::<f64>()) * self.total();
        let mut acc = T::zero();
        let mut last_positive = 0;
        for (idx, p) in self.probs.iter().enumerate() {
            if *p > T::zero() {
                last_positive = idx;
                acc = acc + *p;
                if u < acc {
                    return idx;
                }
            }
        }
        last_positive
    }
}

/// Validates `dist` and draws one outcome; deterministic for a seeded `rng`.
pub fn sample<T: Real, R: Rng + ?Sized>(dist: &Distribution<T>, rng: &mut R) -> Result<usize> {
    let checked = Distribution::new(dist.n_bits, dist.probs.clone())?;
    Ok(checked.sample(rng))
}

fn check_qubit_gate<T: Real>(gate: &QMatrix<T>) -> Result<()> {
    if gate.rows() != 2 || gate.cols() != 2 {
        return Err(Error::NotQubitGate {
            rows: gate.rows(),
            cols: gate.cols(),
        });
    }
    let deviation = gate.unitarity_deviation()?;
    if deviation > T::validation_tolerance() {
        return Err(Error::NotUnitary {
            deviation: deviation.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

#[inline]
fn dim_for(n_bits: usize) -> usize {
    1usize << n_bits
}

fn bit_label(bits: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|b| if bits >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}
