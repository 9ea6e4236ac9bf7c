use thiserror::Error;

/// Errors raised by the simulation engines and checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized: norm_sq = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("non-finite amplitude")]
    NonFinite,
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate has arity {gate} but {targets} targets were given")]
    ArityMismatch { gate: usize, targets: usize },
    #[error("qubit index {index} out of range for a {n}-qubit register")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),
    #[error("expected a {expected}-qubit register, found {found}")]
    RegisterSize { expected: usize, found: usize },
    #[error("matrix of dimension {0} is not 2^arity square")]
    BadMatrixShape(usize),

    #[error("rule number {0} outside [0, 255]")]
    RuleOutOfRange(u32),
    #[error("non-binary state {0} in an elementary automaton")]
    NonBinaryState(u8),
    #[error("no transition for neighborhood {0:?}")]
    MissingTransition(Vec<u8>),
    #[error("quiescent state is not fixed by the rule")]
    QuiescentNotFixed,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("enumeration of {count} configurations exceeds the limit {limit}")]
    EnumerationLimit { count: u128, limit: u128 },
    #[error("rule {0} is not part of the classification demo set")]
    NotInDemoSet(u8),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("spec is not trivial (neighborhood must be {{0}})")]
    NotTrivial,
    #[error("branch count {count} exceeds the limit {limit}")]
    BranchLimit { count: u128, limit: u128 },

    #[error("machine is not unidirectional: state `{0}` is entered from two directions")]
    NotUnidirectional(String),
    #[error("unidirectional machines may not use stay moves (state `{0}`)")]
    StayMove(String),
    #[error("compiled transition matrix is not unitary: deviation {deviation:e} at columns {columns:?}")]
    CompiledNotUnitary { deviation: f64, columns: (String, String) },

    #[error("schedule is empty")]
    EmptySchedule,
    #[error("expected {expected} gates, found {found}")]
    SlotMismatch { expected: usize, found: usize },
    #[error("gate is not unitary")]
    NotUnitary,
    #[error("register of {n} qubits exceeds the dense limit {limit}")]
    DenseLimit { n: usize, limit: usize },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
