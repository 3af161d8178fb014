use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("gate acts on {expected} qubit(s) but {got} target(s) were given")]
    ArityMismatch { expected: usize, got: usize },
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("channel is not trace preserving")]
    NotTracePreserving,
    #[error("invalid probability {0}")]
    InvalidProbability(f64),
    #[error("invalid state: {0}")]
    InvalidState(&'static str),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("unsupported qubit count {0}")]
    UnsupportedQubitCount(usize),
    #[error("simulation of {n_qubits} qubits exceeds the {limit}-qubit budget")]
    SizeBudget { n_qubits: usize, limit: usize },
    #[error("channel is not a Pauli mixture and cannot be inverted")]
    NonPauliChannel,
    #[error("channel is not invertible (Pauli fidelity {0})")]
    NonInvertibleChannel(f64),
    #[error("invalid eigenphase {0}: phases must lie in [0, 1)")]
    InvalidPhase(f64),
    #[error("invalid spectrum weights: {0}")]
    InvalidWeights(&'static str),
    #[error("measured register must be non-empty")]
    EmptyMeasuredRegister,
    #[error("invalid bitstring: {0}")]
    InvalidBitstring(String),
    #[error("noise rule refers to missing operation {0}")]
    NoSuchOperation(usize),
    #[error("invalid noise rule: {0}")]
    InvalidNoiseRule(&'static str),
    #[error("normalization factor {0} must be at least 1")]
    InvalidNormalization(f64),
    #[error("no circuit runs recorded")]
    NoCircuitRuns,
    #[error("effective sample count {0} is not positive; shot noise overwhelms the signal")]
    InsufficientSamples(i64),
    #[error("every entry is non-positive; nothing to renormalize")]
    NothingToClip,
    #[error("support mismatch: estimate over {estimate} bits, reference of length {reference}")]
    SupportMismatch { estimate: usize, reference: usize },
    #[error("1-norm/2-norm inequality violated (tse {tse}, tvd {tvd})")]
    NormInequalityViolated { tse: f64, tvd: f64 },
    #[error("no string rejected the null")]
    NoStringRejected,
    #[error("invalid threshold policy: {0}")]
    InvalidPolicy(&'static str),
    #[error("observable is not diagonal in the measured basis")]
    NonDiagonalObservable,
    #[error("observable is not Hermitian")]
    NonHermitianObservable,
    #[error("ground-energy weight estimate {0} is not positive")]
    NonPositiveDenominator(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
