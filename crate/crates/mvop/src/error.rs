use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MvopError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no null vector at z=0 (smallest singular value {sigma:e}, step {step})")]
    NullVectorNotFound { sigma: f64, step: usize },
    #[error("negative Laurent powers remain after factorization (norm {0:e})")]
    NegativePowersRemain(f64),
    #[error("Newton iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("degenerate support interval (b - a = {0:e})")]
    DegenerateInterval(f64),
    #[error("potential is not regular one-cut: {0}")]
    NotRegular(String),
    #[error("inconsistent Euler-Lagrange constant between probes ({0:e})")]
    InconsistentEll(f64),
    #[error("orthogonality lost at degree {degree} (residual {residual:e})")]
    OrthogonalityLoss { degree: usize, residual: f64 },
    #[error("norm matrix numerically singular at degree {0}")]
    SingularNorm(usize),
    #[error("degree {n} out of range (0..={max})")]
    DegreeOutOfRange { n: usize, max: usize },
    #[error("point {0} lies on or too close to the cut")]
    OnCut(String),
    #[error("point {0} outside the admissible window")]
    OutsideDomain(String),
    #[error("boundary expansion ladder did not converge (spread {0:e})")]
    BranchMismatch(f64),
}

pub type Result<T> = std::result::Result<T, MvopError>;
