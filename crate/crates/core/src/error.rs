use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the library.
///
/// Variants split into two classes that callers (notably the CLI) treat
/// differently: *validation* errors mean the inputs were malformed or
/// inconsistent, *degenerate-math* errors mean the inputs were well-formed but
/// the requested quantity does not exist for them (an undefined tangency, a
/// collapsed frontier). [`Error::is_degenerate`] reports the class.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch for {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("covariance asymmetry |S[{row},{col}] - S[{col},{row}]| = {diff:.3e} exceeds tolerance {tol:.3e}")]
    AsymmetryBeyondTolerance {
        row: usize,
        col: usize,
        diff: f64,
        tol: f64,
    },

    #[error("covariance diagonal entry {index} is negative ({value})")]
    NegativeDiagonal { index: usize, value: f64 },

    /// Cholesky breakdown. `certificate` is a unit-norm direction w with
    /// w' S w = pivot, i.e. an explicit witness that S is not positive
    /// definite.
    #[error("covariance is not positive definite: pivot {pivot:.3e} at column {column} is at or below the floor")]
    NotPositiveDefinite {
        column: usize,
        pivot: f64,
        certificate: Vec<f64>,
    },

    #[error("input is empty")]
    EmptyInput,

    #[error("row {row} has {actual} cells, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        actual: usize,
    },

    #[error("cell at row {row}, column {col} is not numeric: {content:?}")]
    NonNumericCell {
        row: usize,
        col: usize,
        content: String,
    },

    #[error("need at least {required} observations, got {actual}")]
    InsufficientObservations { required: usize, actual: usize },

    #[error("negative portfolio variance {value:.3e}; covariance was not validated")]
    NegativeVariance { value: f64 },

    #[error("{what} sum {sum} deviates from 1 by more than {tol:.3e}")]
    CoefficientSumViolation { what: String, sum: f64, tol: f64 },

    #[error("invalid range: {detail}")]
    InvalidRange { detail: String },

    #[error("malformed input: {detail}")]
    MalformedInput { detail: String },

    #[error("excess returns are all zero within {tol:.1e}; the Sharpe objective is undefined")]
    ZeroExcessReturns { tol: f64 },

    #[error("tangency portfolio undefined: budget component of the excess-return solve is {denominator:.3e}, indistinguishable from zero")]
    TangencyUndefined { denominator: f64 },

    #[error("tangency portfolio lies on the inefficient branch (budget component {denominator:.3e} < 0); no supporting tangent line from the risk-free point")]
    NegativeTangency { denominator: f64 },

    #[error("frontier is degenerate: mean vector is collinear with the budget direction (discriminant {discriminant:.3e})")]
    DegenerateFrontier { discriminant: f64 },

    #[error("portfolio variance is zero; Sharpe ratio undefined")]
    ZeroVariancePortfolio,

    #[error("fund returns are equal ({mu1} vs {mu2}); the two-fund system is singular")]
    EqualFundReturns { mu1: f64, mu2: f64 },

    #[error("systemic variance must be positive, got {value}")]
    NonPositiveSystemicVariance { value: f64 },

    #[error("frontier cross-check failed at mu = {mu}: sigma from coefficients {sigma_quadratic} vs sigma from solver {sigma_solver}")]
    FrontierMismatch {
        mu: f64,
        sigma_quadratic: f64,
        sigma_solver: f64,
    },
}

impl Error {
    /// Stable machine-readable name of the variant, for structured error
    /// reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::AsymmetryBeyondTolerance { .. } => "AsymmetryBeyondTolerance",
            Error::NegativeDiagonal { .. } => "NegativeDiagonal",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::EmptyInput => "EmptyInput",
            Error::RaggedRows { .. } => "RaggedRows",
            Error::NonNumericCell { .. } => "NonNumericCell",
            Error::InsufficientObservations { .. } => "InsufficientObservations",
            Error::NegativeVariance { .. } => "NegativeVariance",
            Error::CoefficientSumViolation { .. } => "CoefficientSumViolation",
            Error::InvalidRange { .. } => "InvalidRange",
            Error::MalformedInput { .. } => "MalformedInput",
            Error::ZeroExcessReturns { .. } => "ZeroExcessReturns",
            Error::TangencyUndefined { .. } => "TangencyUndefined",
            Error::NegativeTangency { .. } => "NegativeTangency",
            Error::DegenerateFrontier { .. } => "DegenerateFrontier",
            Error::ZeroVariancePortfolio => "ZeroVariancePortfolio",
            Error::EqualFundReturns { .. } => "EqualFundReturns",
            Error::NonPositiveSystemicVariance { .. } => "NonPositiveSystemicVariance",
            Error::FrontierMismatch { .. } => "FrontierMismatch",
        }
    }

    /// True for errors where the inputs were valid but the requested quantity
    /// does not exist (as opposed to malformed-input validation failures).
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::ZeroExcessReturns { .. }
                | Error::TangencyUndefined { .. }
                | Error::NegativeTangency { .. }
                | Error::DegenerateFrontier { .. }
                | Error::ZeroVariancePortfolio
                | Error::EqualFundReturns { .. }
                | Error::NonPositiveSystemicVariance { .. }
                | Error::FrontierMismatch { .. }
        )
    }
}
