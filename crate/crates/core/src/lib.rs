//! Deterministic mean-variance portfolio analytics.
//!
//! The pipeline: ingest or supply a [`MarketModel`], validate it into a
//! [`ValidatedModel`] (symmetrized covariance plus a cached SPD factor), then
//! query closed-form optimizers, frontier geometry, and pricing against it.
//! Every solver's optimality can be spot-checked with the Monte Carlo
//! oracles in [`oracle`].
//!
//! The covariance inverse is never formed; everything is triangular solves
//! against one Cholesky factor. All randomness is seeded and chunked, so
//! every result in this crate is reproducible bit for bit.

pub mod capm;
pub mod error;
pub mod estimation;
pub mod frontier;
pub mod market_model;
pub mod optimizer;
pub mod oracle;
pub mod tol;

pub use capm::{beta, capm_expected_return, sml_classify, SmlClass};
pub use error::{Error, Result};
pub use estimation::{estimate_moments, ingest_csv, Ddof, ReturnSeries};
pub use frontier::{
    cml_line, frontier_coefficients, frontier_csv, sample_frontier, tangent_line,
    FrontierCoefficients, FrontierPoint, LineSpec,
};
pub use market_model::{
    default_labels, portfolio_moments, solve_spd, validate_model, MarketModel, Moments, SpdFactor,
    SpdMode, ValidatedModel,
};
pub use optimizer::{
    combine_funds, combine_funds_with, max_sharpe_portfolio, min_variance_for_return,
    min_variance_portfolio, min_variance_with_riskfree, sharpe_ratio, two_fund_weights,
    CombineOptions, CombinedPortfolio, PortfolioSolution, Warning,
};
pub use oracle::{
    random_constraint_portfolios, verify_max_sharpe, verify_min_variance, verify_target_return,
    OracleReport,
};
