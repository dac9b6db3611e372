use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty matrix or vector")]
    Empty,

    #[error("matrix is not unitary (max deviation of U U^dagger from I is {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("local gates must be 2x2, got {rows}x{cols}")]
    NotQubitGate { rows: usize, cols: usize },

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("register of {n_parties} parties needs {expected} amplitudes, got {found}")]
    RegisterSize {
        n_parties: usize,
        expected: usize,
        found: usize,
    },

    #[error("party {party} out of range for a {n_parties}-party register")]
    PartyOutOfRange { party: usize, n_parties: usize },

    #[error("two operations share time tag {0}; local operations must be totally ordered")]
    DuplicateTime(u64),

    #[error(
        "basis change for party {party} has non-real entries; schedule it with explicit time tags"
    )]
    NonRealBasisChange { party: usize },

    #[error("phase must have unit norm, got norm {norm}")]
    NonUnitPhase { norm: f64 },

    #[error("time tags must be strictly increasing")]
    UnorderedSchedule,

    #[error("malformed distribution: {0}")]
    MalformedDistribution(String),

    #[error("invalid box behavior: {0}")]
    InvalidBehavior(String),

    #[error("noise parameter {0} outside [0.5, 1]")]
    NoiseOutOfRange(f64),

    #[error("protocol needs {needed} boxes, only {available} supplied")]
    InsufficientBoxes { needed: usize, available: usize },

    #[error("{bits} input bits exceeds the exhaustive-verification cap of {cap}")]
    SizeCapExceeded { bits: usize, cap: usize },

    #[error("invalid truth table: {0}")]
    TruthTable(String),

    #[error("unknown boolean function {0:?}")]
    UnknownFunction(String),
}
