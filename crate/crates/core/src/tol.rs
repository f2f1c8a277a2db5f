//! Default numeric tolerances.
//!
//! Every threshold the library applies is collected here so the defaults are
//! auditable in one place. Operations that accept overrides (for data sets
//! rounded more coarsely than the defaults assume) document that on the
//! operation itself.

/// Maximum absolute entrywise asymmetry |S[i,j] - S[j,i]| repaired by
/// symmetrization during validation; larger gaps are rejected.
pub const SYM_TOL: f64 = 1e-8;

/// Cholesky pivot floor, relative to the largest diagonal entry. A pivot at
/// or below `SPD_PIVOT_REL * max_diag` stops the factorization and produces a
/// singularity certificate.
pub const SPD_PIVOT_REL: f64 = 1e-12;

/// Expected relative residual of the SPD solve, |S x - b| <= tol * |b|,
/// for well-conditioned inputs. Enforced by tests, not at runtime.
pub const SOLVE_RESIDUAL_REL: f64 = 1e-10;

/// Excess returns with no component larger than this are treated as zero;
/// the Sharpe objective is undefined for them.
pub const EXCESS_ZERO_ABS: f64 = 1e-12;

/// The tangency weights divide by the budget component of the excess-return
/// solve; a component this small relative to the solve's 1-norm means the
/// normalization is pure cancellation and the tangency portfolio is undefined.
pub const TANGENCY_DENOM_REL: f64 = 1e-12;

/// The frontier collapses when the mean vector is collinear with the budget
/// direction; detected as gram discriminant <= rel * (mu_gram * ones_gram).
pub const DEGENERATE_FRONTIER_REL: f64 = 1e-12;

/// Agreement required between a frontier point's sigma evaluated from the
/// quadratic coefficients and from the constrained solver's weights.
pub const FRONTIER_CROSS_CHECK_REL: f64 = 1e-8;

/// Default tolerance on |sum(coefficients) - 1| when combining funds, and on
/// each fund's own budget.
pub const COEFF_SUM_TOL: f64 = 1e-6;

/// Default relative tolerance on |sigma_combined - sigma_frontier| for the
/// `efficient` flag when combining funds.
pub const EFFICIENCY_REL_TOL: f64 = 1e-6;

/// Fund means closer than this (relative to the larger magnitude) make the
/// two-fund weight system singular.
pub const EQUAL_RETURNS_REL: f64 = 1e-14;

/// Default band around the security market line inside which an observed
/// return is classified as fairly priced.
pub const SML_CLASSIFY_TOL: f64 = 1e-9;

/// One-sided slack granted to Monte Carlo verification: a sampled portfolio
/// may beat the closed form by at most this much before the check fails.
pub const ORACLE_MARGIN: f64 = 1e-9;

/// Expected absolute deviation of solution budgets, |sum(w) - 1|.
/// Enforced by tests, not at runtime.
pub const BUDGET_ABS: f64 = 1e-10;

/// Expected relative infinity-norm of stationarity residuals on returned
/// solutions. Enforced by tests, not at runtime.
pub const KKT_REL: f64 = 1e-8;
