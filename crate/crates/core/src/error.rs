use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("dense realization is limited to {max} qubits (requested {requested})")]
    TooManyQubits { requested: usize, max: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("excitation {0} is not a paired double")]
    NotPairedDouble(String),

    #[error("unsupported point group `{0}` (expected one of C1, C2, Cs, Ci, C2v, C2h, D2, D2h)")]
    UnsupportedPointGroup(String),

    #[error("irrep `{irrep}` does not belong to point group {group}")]
    UnknownIrrep { group: String, irrep: String },

    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("operator terms do not mutually commute")]
    NonCommuting,

    #[error("number of shots must be positive")]
    ZeroShots,

    #[error("classical bit c{0} is read before it is written")]
    UnwrittenBit(usize),

    #[error("symmetry `{0}` contains non-Z letters; diagonalize it first")]
    NonDiagonalSymmetry(String),

    #[error("post-selection discarded every shot")]
    EmptyPostSelection,

    #[error("both distributions are empty")]
    EmptyDistributions,

    #[error("model carries no dipole integrals")]
    MissingDipoles,

    #[error("overlap matrix is singular: no eigenvalue above {threshold:e}")]
    SingularOverlap { threshold: f64 },

    #[error("optimizer did not converge after {iterations} iterations (gradient norm {gradient_norm:e})")]
    NotConverged { iterations: usize, gradient_norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
