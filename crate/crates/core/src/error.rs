use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized: squared norm {norm_sq} (tolerance {tol})")]
    NotNormalized { norm_sq: f64, tol: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("lambda{index} = {value} is negative")]
    NegativeLambda { index: usize, value: f64 },

    #[error("local unitary factor {factor} deviates from unitarity by {defect:e}")]
    NonUnitary { factor: char, defect: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("partial trace must keep one or two qubits, got {0}")]
    InvalidKeep(usize),

    #[error("alpha = {0} lies outside [0, 1/4]")]
    AlphaOutOfRange(f64),

    #[error("entropy derivative is only defined on the open interval (0, 1/4), got alpha = {0}")]
    DerivativeDomain(f64),

    #[error("spin-flip spectrum has an eigenvalue with imaginary part {0:e}")]
    ComplexEigenvalue(f64),

    #[error("spin-flip spectrum has a negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("fast ASD path and general path disagree on {field} by {diff:e}")]
    PathMismatch { field: &'static str, diff: f64 },

    #[error("state is not in the GHZ class (lambda0*lambda4 = {0:e})")]
    NotGhzClass(f64),

    #[error("tangles are infeasible: lambda4^2 = {lambda4_sq} < 0 (requires p^4 + q^4 + r^4 <= 4/3)")]
    InfeasibleTangles { lambda4_sq: f64 },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("counterexample to GHZ uniqueness: all marginal entropies equal ln 2 but lambda = {lambda:?}")]
    GhzUniquenessCounterexample { lambda: [f64; 5] },
}
