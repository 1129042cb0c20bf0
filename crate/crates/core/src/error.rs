use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range 1..={n_qubits}")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("control and target both refer to qubit {0}")]
    DuplicateQubit(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} = {value} outside supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid logical bit string {0:?}: expected a nonempty string over {{0,1}}")]
    InvalidBits(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{model} has no zero sector for odd register size {n}")]
    NoZeroSector { model: &'static str, n: usize },

    #[error("brute-force dimension {brute_force} disagrees with closed form {closed_form} ({model}, n={n})")]
    ClosedFormMismatch {
        model: &'static str,
        n: usize,
        brute_force: usize,
        closed_form: usize,
    },

    #[error("no register of at most {bound} qubits carries {logical} logical qubits")]
    SearchBoundExceeded { logical: usize, bound: usize },

    #[error(
        "synthesized QFT matches the DFT under neither identity nor bit-reversal output order"
    )]
    NoMatchingConvention,

    #[error(
        "no gate-level convention realizes the SCD logical Hadamard; use the fallback transform"
    )]
    NoGateConvention,

    #[error("invalid block boundaries: {0}")]
    InvalidBoundaries(String),

    #[error("unknown encoding {0:?}")]
    UnknownEncoding(String),

    #[error("invalid noise policy: {0}")]
    InvalidPolicy(String),
}
