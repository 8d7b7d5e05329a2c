use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree overflow: {left} + {right} exceeds dimension {dim}")]
    DegreeOverflow { left: usize, right: usize, dim: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("interior product of a 0-form is undefined")]
    InteriorOfScalar,

    #[error("quaternionic dimension n = {0} is not supported (requires n >= 2)")]
    InvalidQuaternionicDimension(usize),

    #[error("slot {slot} out of range for a tensor with {rank} slots")]
    BadSlot { slot: usize, rank: usize },

    #[error("rotation is not special orthogonal (residual {residual:.3e})")]
    NotSpecialOrthogonal { residual: f64 },

    #[error("not an almost quaternion-Hermitian structure: {0}")]
    NotQuaternionHermitian(String),

    #[error("tensor is not in the intrinsic torsion space W (relative residual {residual:.3e})")]
    NotInW { residual: f64 },

    #[error("two-form family violates the fiber conditions (relative residual {residual:.3e})")]
    OutsideFiber { residual: f64 },

    #[error("d_A violate the structure conditions: i)' residual {cond_i:.3e}, ii)' residual {cond_ii:.3e}")]
    NablaOmegaConditions { cond_i: f64, cond_ii: f64 },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("{label} is identically zero in dimension 8")]
    ZeroInDimensionEight { label: String },

    #[error("{0}")]
    Unsupported(String),

    #[error("Jacobi identity fails (residual {residual:.3e})")]
    Jacobi { residual: f64 },

    #[error("codifferential routes disagree: {0}")]
    CodifferentialDisagreement(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
