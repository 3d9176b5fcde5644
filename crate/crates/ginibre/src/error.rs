use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An intermediate exponential would overflow; the caller should use a log-form path.
    #[error("overflow: {0}")]
    OverflowDomain(String),

    /// A matrix failed the antisymmetry check.
    #[error("matrix is not antisymmetric (violation {violation:e})")]
    NotAntisymmetric { violation: f64 },

    /// Matrix shapes are incompatible or a dimension is invalid.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A matrix that must be invertible is singular.
    #[error("singular input: {0}")]
    SingularInput(String),

    /// A point lies in the open lower half plane.
    #[error("point {re}{im:+}i lies below the real axis")]
    LowerHalfPlane { re: f64, im: f64 },

    /// An assembled Pfaffian or determinant has a non-negligible imaginary part.
    #[error("imaginary residue {imag:e} on value {real:e}")]
    ImaginaryResidue { real: f64, imag: f64 },

    /// Adaptive quadrature hit its subdivision budget before meeting the tolerance.
    #[error("quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    QuadratureNonconvergence { estimate: f64, error: f64 },

    /// The eigensolver failed to converge on a sampled matrix.
    #[error("eigensolver failed to converge")]
    EigensolverFailure,

    /// A histogram window received no points or has zero measure.
    #[error("histogram window is empty")]
    EmptyWindow,

    /// The requested regime or observable is not supported for this operation.
    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    /// A sampling or work budget was too small to complete the request.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
