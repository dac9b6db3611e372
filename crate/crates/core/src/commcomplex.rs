//! One-bit distributed evaluation of boolean functions with non-local boxes.
//!
//! Alice holds `x` (`n_alice` bits), Bob holds `y` (`n_bob` bits) and Alice
//! must output `f(x, y)`. Writing `f` in algebraic normal form,
//!
//! ```text
//! f(x, y) = ⊕_m  A_m(x) · B_m(y)
//! ```
//!
//! every mixed monomial is split across one box: Alice feeds `A_m(x)`, Bob
//! feeds `B_m(y)`, and the outputs satisfy `u_m ⊕ v_m = A_m(x) B_m(y)`.
//! Monomials that involve only one party are evaluated locally. Bob then
//! sends the single bit `⊕ v_m ⊕ (Bob-only terms)` and Alice XORs it with
//! `⊕ u_m ⊕ (Alice-only terms)`. Alice never sends anything.
//!
//! Bit conventions: inputs are integers whose bit `i` is `x_i`; the truth
//! table is indexed by `(x << n_bob) | y`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nlbox::BoxBehavior;
use crate::scalar::Real;

/// Largest `n_alice + n_bob` accepted by exhaustive verification.
pub const MAX_VERIFY_BITS: usize = 20;

/// Largest `n_alice + n_bob` a truth table may have.
pub const MAX_TABLE_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n_alice: usize,
    n_bob: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn new(n_alice: usize, n_bob: usize, table: Vec<bool>) -> Result<Self> {
        let bits = n_alice + n_bob;
        if bits > MAX_TABLE_BITS {
            return Err(Error::TruthTable(format!(
                "{bits} input bits exceeds the limit of {MAX_TABLE_BITS}"
            )));
        }
        if table.len() != 1 << bits {
            return Err(Error::TruthTable(format!(
                "expected {} entries, found {}",
                1usize << bits,
                table.len()
            )));
        }
        Ok(Self {
            n_alice,
            n_bob,
            table,
        })
    }

    pub fn from_fn(n_alice: usize, n_bob: usize, f: impl Fn(u32, u32) -> bool) -> Result<Self> {
        let table = (0..1usize << (n_alice + n_bob))
            .map(|idx| f((idx >> n_bob) as u32, (idx & ((1 << n_bob) - 1)) as u32))
            .collect();
        Self::new(n_alice, n_bob, table)
    }

    /// Table written as a `0`/`1` string in index order, e.g. `"0001"` is AND.
    pub fn from_bit_string(n_alice: usize, n_bob: usize, bits: &str) -> Result<Self> {
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::TruthTable(format!("unexpected character {c:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::new(n_alice, n_bob, table)
    }

    /// `x₀ ∧ y₀`.
    pub fn and() -> Self {
        Self::from_fn(1, 1, |x, y| x & y == 1).expect("2-bit table")
    }

    /// `x₀ ⊕ y₀`.
    pub fn xor() -> Self {
        Self::from_fn(1, 1, |x, y| (x ^ y) == 1).expect("2-bit table")
    }

    /// Inner product `⊕ᵢ xᵢ yᵢ` of two `n`-bit strings.
    pub fn inner_product(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |x, y| (x & y).count_ones() % 2 == 1)
    }

    /// Built-ins `AND`, `XOR`, `IP<n>` (case-insensitive).
    pub fn by_name(name: &str) -> Result<Self> {
        let upper = name.trim().to_ascii_uppercase();
        match upper.as_str() {
            "AND" => Ok(Self::and()),
            "XOR" => Ok(Self::xor()),
            _ => upper
                .strip_prefix("IP")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|n| (1..=MAX_TABLE_BITS / 2).contains(n))
                .map(|n| Self::inner_product(n).expect("bounded size"))
                .ok_or_else(|| Error::UnknownFunction(name.to_owned())),
        }
    }

    /// Uniformly random truth table.
    pub fn random<R: Rng + ?Sized>(n_alice: usize, n_bob: usize, rng: &mut R) -> Result<Self> {
        let len = 1usize
            .checked_shl((n_alice + n_bob) as u32)
            .filter(|_| n_alice + n_bob <= MAX_TABLE_BITS)
            .ok_or_else(|| Error::TruthTable("too many input bits".into()))?;
        Self::new(n_alice, n_bob, (0..len).map(|_| rng.gen()).collect())
    }

    #[inline]
    pub fn n_alice(&self) -> usize {
        self.n_alice
    }

    #[inline]
    pub fn n_bob(&self) -> usize {
        self.n_bob
    }

    #[inline]
    pub fn n_inputs(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn table(&self) -> &[bool] {
        &self.table
    }

    #[inline]
    pub fn index(&self, x: u32, y: u32) -> usize {
        ((x as usize) << self.n_bob) | y as usize
    }

    pub fn eval(&self, x: u32, y: u32) -> bool {
        self.table[self.index(x, y)]
    }

    /// Hex encoding of the table. Digit `d` holds entries `4d .. 4d+3`,
    /// least significant bit first, so AND is `"8"` and XOR is `"6"`.
    pub fn to_hex(&self) -> String {
        self.table
            .chunks(4)
            .map(|nibble| {
                let v = nibble
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (bit, &set)| acc | (u32::from(set) << bit));
                char::from_digit(v, 16).expect("nibble")
            })
            .collect()
    }

    pub fn from_hex(n_alice: usize, n_bob: usize, hex: &str) -> Result<Self> {
        let bits = n_alice + n_bob;
        if bits > MAX_TABLE_BITS {
            return Err(Error::TruthTable(format!("{bits} input bits is too many")));
        }
        let len = 1usize << bits;
        let digits = len.div_ceil(4);
        let hex = hex.trim();
        if hex.len() != digits {
            return Err(Error::TruthTable(format!(
                "expected {digits} hex digits for {len} entries, found {}",
                hex.len()
            )));
        }
        let mut table = Vec::with_capacity(len);
        for c in hex.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::TruthTable(format!("invalid hex digit {c:?}")))?;
            for bit in 0..4 {
                table.push(v >> bit & 1 == 1);
            }
        }
        if table[len..].iter().any(|&b| b) {
            return Err(Error::TruthTable("padding bits must be zero".into()));
        }
        table.truncate(len);
        Self::new(n_alice, n_bob, table)
    }

    pub fn to_file(&self) -> TruthTableFile {
        TruthTableFile {
            n_alice: self.n_alice,
            n_bob: self.n_bob,
            table: self.to_hex(),
        }
    }

    pub fn from_file(file: &TruthTableFile) -> Result<Self> {
        Self::from_hex(file.n_alice, file.n_bob, &file.table)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TruthTableFile =
            serde_json::from_str(text).map_err(|e| Error::TruthTable(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// On-disk form `{"n_alice": .., "n_bob": .., "table": "<hex>"}`; see
/// [`BooleanFunction::to_hex`] for the bit order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthTableFile {
    pub n_alice: usize,
    pub n_bob: usize,
    pub table: String,
}

/// `(∏_{i ∈ alice} xᵢ) · (∏_{j ∈ bob} yⱼ)` with the index sets as bit masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    pub alice: u32,
    pub bob: u32,
}

impl Monomial {
    /// Both parties contribute variables.
    #[inline]
    pub fn is_mixed(self) -> bool {
        self.alice != 0 && self.bob != 0
    }

    /// Alice's factor `∏ xᵢ` (1 for the empty product).
    #[inline]
    pub fn alice_factor(self, x: u32) -> bool {
        x & self.alice == self.alice
    }

    #[inline]
    pub fn bob_factor(self, y: u32) -> bool {
        y & self.bob == self.bob
    }

    #[inline]
    pub fn eval(self, x: u32, y: u32) -> bool {
        self.alice_factor(x) && self.bob_factor(y)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alice == 0 && self.bob == 0 {
            return f.write_str("1");
        }
        for i in (0..32).filter(|i| self.alice >> i & 1 == 1) {
            write!(f, "x{i}")?;
        }
        for j in (0..32).filter(|j| self.bob >> j & 1 == 1) {
            write!(f, "y{j}")?;
        }
        Ok(())
    }
}

/// Algebraic normal form: XOR of monomials, sorted by `(alice, bob)` mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anf {
    n_alice: usize,
    n_bob: usize,
    monomials: Vec<Monomial>,
}

impl Anf {
    #[inline]
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn mixed(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.monomials.iter().copied().filter(|m| m.is_mixed())
    }

    pub fn mixed_count(&self) -> usize {
        self.mixed().count()
    }

    pub fn eval(&self, x: u32, y: u32) -> bool {
        self.monomials
            .iter()
            .fold(false, |acc, m| acc ^ m.eval(x, y))
    }

    /// Alice's local terms, those with no Bob variables (including the
    /// constant monomial).
    pub fn alice_local(&self, x: u32) -> bool {
        self.monomials
            .iter()
            .filter(|m| m.bob == 0)
            .fold(false, |acc, m| acc ^ m.alice_factor(x))
    }

    /// Bob's local terms, those with Bob variables only.
    pub fn bob_local(&self, y: u32) -> bool {
        self.monomials
            .iter()
            .filter(|m| m.alice == 0 && m.bob != 0)
            .fold(false, |acc, m| acc ^ m.bob_factor(y))
    }

    pub fn to_function(&self) -> BooleanFunction {
        BooleanFunction::from_fn(self.n_alice, self.n_bob, |x, y| self.eval(x, y))
            .expect("sizes already validated")
    }
}

impl fmt::Display for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (n, m) in self.monomials.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Binary Möbius transform of the truth table.
pub fn anf_transform(f: &BooleanFunction) -> Anf {
    let mut coeffs = f.table.clone();
    let bits = f.n_alice + f.n_bob;
    for bit in 0..bits {
        let stride = 1 << bit;
        for idx in 0..coeffs.len() {
            if idx & stride != 0 {
                coeffs[idx] ^= coeffs[idx ^ stride];
            }
        }
    }
    let bob_mask = (1usize << f.n_bob) - 1;
    let mut monomials: Vec<Monomial> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(idx, _)| Monomial {
            alice: (idx >> f.n_bob) as u32,
            bob: (idx & bob_mask) as u32,
        })
        .collect();
    monomials.sort_unstable();
    Anf {
        n_alice: f.n_alice,
        n_bob: f.n_bob,
        monomials,
    }
}

/// Outcome of one protocol execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProtocolRun {
    pub alice_output: bool,
    pub bits_bob_to_alice: usize,
    pub bits_alice_to_bob: usize,
    pub boxes_used: usize,
}

/// Precomputed protocol for one function.
#[derive(Debug, Clone)]
pub struct VanDam {
    anf: Anf,
}

impl VanDam {
    pub fn new(f: &BooleanFunction) -> Self {
        Self {
            anf: anf_transform(f),
        }
    }

    #[inline]
    pub fn anf(&self) -> &Anf {
        &self.anf
    }

    /// One box per mixed monomial.
    pub fn boxes_needed(&self) -> usize {
        self.anf.mixed_count()
    }

    /// Bob's single message; nothing is sent for the zero function.
    pub fn bits_bob_to_alice(&self) -> usize {
        usize::from(!self.anf.monomials.is_empty())
    }

    fn check_supply(&self, available: usize) -> Result<()> {
        let needed = self.boxes_needed();
        if available < needed {
            return Err(Error::InsufficientBoxes { needed, available });
        }
        Ok(())
    }

    /// Runs the protocol, sampling box `k` for the `k`-th mixed monomial.
    pub fn run<T: Real, R: Rng + ?Sized>(
        &self,
        x: u32,
        y: u32,
        boxes: &[BoxBehavior<T>],
        rng: &mut R,
    ) -> Result<ProtocolRun> {
        self.check_supply(boxes.len())?;
        let mut alice_acc = self.anf.alice_local(x);
        let mut bob_acc = self.anf.bob_local(y);
        let mut used = 0;
        for (m, nl_box) in self.anf.mixed().zip(boxes) {
            let (u, v) = nl_box.sample(m.alice_factor(x), m.bob_factor(y), rng);
            alice_acc ^= u;
            bob_acc ^= v;
            used += 1;
        }
        let message = bob_acc;
        Ok(ProtocolRun {
            alice_output: alice_acc ^ message,
            bits_bob_to_alice: self.bits_bob_to_alice(),
            bits_alice_to_bob: 0,
            boxes_used: used,
        })
    }

    /// Exact probability that Alice's output equals `f(x, y)`.
    ///
    /// Alice is right iff an even number of boxes miss `u ⊕ v = αβ`, and the
    /// boxes are independent, so this folds a parity distribution over the
    /// per-box error probabilities.
    pub fn success_probability<T: Real>(
        &self,
        x: u32,
        y: u32,
        boxes: &[BoxBehavior<T>],
    ) -> Result<T> {
        self.check_supply(boxes.len())?;
        let (mut even, mut odd) = (T::one(), T::zero());
        for (m, nl_box) in self.anf.mixed().zip(boxes) {
            let win = nl_box
                .win_probability(m.alice_factor(x), m.bob_factor(y))
                .min(T::one());
            let miss = (T::one() - win).max(T::zero());
            (even, odd) = (even * win + odd * miss, even * miss + odd * win);
        }
        Ok(even)
    }
}

/// Runs the protocol for `f` on inputs `(x, y)`.
pub fn vandam_protocol<T: Real, R: Rng + ?Sized>(
    f: &BooleanFunction,
    x: u32,
    y: u32,
    boxes: &[BoxBehavior<T>],
    rng: &mut R,
) -> Result<ProtocolRun> {
    VanDam::new(f).run(x, y, boxes, rng)
}

/// Result of evaluating the protocol on every input pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerificationReport<T> {
    pub inputs: usize,
    /// Mean exact success probability over all inputs.
    pub success_rate: T,
    /// Worst exact success probability over all inputs.
    pub min_success: T,
    pub boxes_used: usize,
    pub bits_bob_to_alice: usize,
    pub bits_alice_to_bob: usize,
}

fn check_size(f: &BooleanFunction) -> Result<()> {
    let bits = f.n_alice + f.n_bob;
    if bits > MAX_VERIFY_BITS {
        return Err(Error::SizeCapExceeded {
            bits,
            cap: MAX_VERIFY_BITS,
        });
    }
    Ok(())
}

fn for_each_input(f: &BooleanFunction) -> impl Iterator<Item = (u32, u32)> {
    let (n_alice, n_bob) = (f.n_alice, f.n_bob);
    (0..1u32 << n_alice).flat_map(move |x| (0..1u32 << n_bob).map(move |y| (x, y)))
}

/// Exact success statistics over every `(x, y)`, each box drawn from
/// `behavior`.
pub fn verify_exhaustive<T: Real>(
    f: &BooleanFunction,
    behavior: &BoxBehavior<T>,
) -> Result<VerificationReport<T>> {
    check_size(f)?;
    let protocol = VanDam::new(f);
    let boxes = vec![behavior.clone(); protocol.boxes_needed()];
    let mut total = T::zero();
    let mut worst = T::one();
    for (x, y) in for_each_input(f) {
        let p = protocol.success_probability(x, y, &boxes)?;
        total = total + p;
        worst = worst.min(p);
    }
    Ok(VerificationReport {
        inputs: f.n_inputs(),
        success_rate: total / T::from_usize(f.n_inputs()).expect("input count fits"),
        min_success: worst,
        boxes_used: protocol.boxes_needed(),
        bits_bob_to_alice: protocol.bits_bob_to_alice(),
        bits_alice_to_bob: 0,
    })
}

/// Monte Carlo counterpart of [`verify_exhaustive`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampledReport {
    pub runs: usize,
    pub correct: usize,
    pub empirical_success: f64,
    /// Inputs on which at least one run was wrong.
    pub failing_inputs: usize,
}

/// Runs the sampled protocol `samples_per_input` times on every input.
pub fn verify_sampled<T: Real, R: Rng + ?Sized>(
    f: &BooleanFunction,
    behavior: &BoxBehavior<T>,
    samples_per_input: usize,
    rng: &mut R,
) -> Result<SampledReport> {
    check_size(f)?;
    let protocol = VanDam::new(f);
    let boxes = vec![behavior.clone(); protocol.boxes_needed()];
    let (mut runs, mut correct, mut failing_inputs) = (0, 0, 0);
    for (x, y) in for_each_input(f) {
        let want = f.eval(x, y);
        let mut all_right = true;
        for _ in 0..samples_per_input {
            let run = protocol.run(x, y, &boxes, rng)?;
            runs += 1;
            if run.alice_output == want {
                correct += 1;
            } else {
                all_right = false;
            }
        }
        if !all_right {
            failing_inputs += 1;
        }
    }
    Ok(SampledReport {
        runs,
        correct,
        empirical_success: if runs == 0 {
            1.0
        } else {
            correct as f64 / runs as f64
        },
        failing_inputs,
    })
}
