//! Closed-form mean-variance optimizers over the budget constraint
//! `sum(w) = 1`, plus the two-fund separation helpers.
//!
//! Every solver returns a [`PortfolioSolution`] whose `sigma` and `mu` are
//! recomputed from the returned weights (not from the algebraic shortcut), so
//! the reported moments are exactly the moments of the reported portfolio.
//! `kkt_residual` is the infinity-norm of the stationarity equation of the
//! corresponding constrained problem, evaluated at the returned weights.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::market_model::{portfolio_moments, ValidatedModel};
use crate::tol;

/// Conditions worth surfacing that are not errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Warning {
    /// The tangency normalization was negative: the stationary portfolio lies
    /// on the inefficient branch and its Sharpe ratio is negative.
    NegativeTangency,
    /// The requested target return sits below the vertex of best-attainable
    /// return at minimum variance; the solution is on the inefficient branch.
    InefficientBranch,
}

/// A solved portfolio. `wf` is the risk-free allocation when the problem has
/// one. `sharpe` is present when a risk-free rate is known and the portfolio
/// has positive variance.
#[derive(Debug, Clone, Serialize)]
pub struct PortfolioSolution {
    pub weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wf: Option<f64>,
    pub mu: f64,
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharpe: Option<f64>,
    pub kkt_residual: f64,
    pub warnings: Vec<Warning>,
}

/// Combination of frontier funds, with the efficiency cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct CombinedPortfolio {
    #[serde(flatten)]
    pub solution: PortfolioSolution,
    /// Coefficient-weighted fund means: the return the combination targets.
    pub realized_target: f64,
    /// Whether the combination's sigma matches the frontier sigma at the
    /// realized target within the efficiency tolerance.
    pub efficient: bool,
    /// Relative gap |sigma - sigma_frontier| / sigma_frontier.
    pub efficiency_gap: f64,
}

/// Tolerance overrides for [`combine_funds_with`]. Defaults match
/// [`tol::COEFF_SUM_TOL`] and [`tol::EFFICIENCY_REL_TOL`]; loosen them for
/// fund tables rounded to fewer digits than the defaults assume.
#[derive(Debug, Clone, Copy)]
pub struct CombineOptions {
    /// Allowed |sum(coefficients) - 1|.
    pub coeff_sum_tol: f64,
    /// Allowed |sum(fund weights) - 1| per fund.
    pub fund_budget_tol: f64,
    /// Relative sigma gap under which the combination counts as efficient.
    pub efficiency_rel_tol: f64,
}

impl Default for CombineOptions {
    fn default() -> Self {
        CombineOptions {
            coeff_sum_tol: tol::COEFF_SUM_TOL,
            fund_budget_tol: tol::COEFF_SUM_TOL,
            efficiency_rel_tol: tol::EFFICIENCY_REL_TOL,
        }
    }
}

fn solution(
    vm: &ValidatedModel,
    weights: DVector<f64>,
    wf: Option<f64>,
    rf: Option<f64>,
    kkt_residual: f64,
    warnings: Vec<Warning>,
) -> PortfolioSolution {
    let risky = portfolio_moments(vm.model(), &weights)
        .expect("validated covariance cannot produce negative variance");
    let mu = risky.mu + wf.map_or(0.0, |f| f * rf.unwrap_or(0.0));
    let sigma = risky.sigma;
    let sharpe = match rf {
        Some(r) if sigma > 0.0 => Some((mu - r) / sigma),
        _ => None,
    };
    PortfolioSolution {
        weights: weights.iter().copied().collect(),
        wf,
        mu,
        sigma,
        sharpe,
        kkt_residual,
        warnings,
    }
}

/// Infinity-norm of `2 S w - lambda_mu * mu - lambda_ones * 1`.
fn stationarity_residual(
    vm: &ValidatedModel,
    w: &DVector<f64>,
    lambda_mu: f64,
    lambda_ones: f64,
) -> f64 {
    let mut r = vm.sigma() * w * 2.0;
    if lambda_mu != 0.0 {
        r -= vm.mu() * lambda_mu;
    }
    r.add_scalar_mut(-lambda_ones);
    r.amax()
}

/// Excess-return vector `mu - rf * 1`, rejected if it vanishes.
fn excess_returns(vm: &ValidatedModel, rf: f64) -> Result<DVector<f64>> {
    let excess = vm.mu().add_scalar(-rf);
    if excess.amax() <= tol::EXCESS_ZERO_ABS {
        return Err(Error::ZeroExcessReturns {
            tol: tol::EXCESS_ZERO_ABS,
        });
    }
    Ok(excess)
}

/// The global minimum-variance portfolio: `w = S^-1 1 / (1' S^-1 1)`.
/// Uses the model's risk-free rate, if any, only to report a Sharpe ratio.
pub fn min_variance_portfolio(vm: &ValidatedModel) -> PortfolioSolution {
    let n = vm.n();
    let ones = DVector::from_element(n, 1.0);
    let x = vm.factor().solve(&ones).expect("factor size matches model");
    let a = vm.factor().ones_gram();
    let w = x / a;
    let kkt = stationarity_residual(vm, &w, 0.0, 2.0 / a);
    solution(vm, w, None, vm.rf(), kkt, Vec::new())
}

/// The tangency (maximum-Sharpe) portfolio for risk-free rate `rf`:
/// `w = S^-1 (mu - rf 1) / (1' S^-1 (mu - rf 1))`.
///
/// Errors with [`Error::ZeroExcessReturns`] when `mu = rf 1`, and
/// [`Error::TangencyUndefined`] when the normalizing budget component is
/// indistinguishable from zero. A negative normalization yields the
/// stationary portfolio on the inefficient branch: it is returned with a
/// negative Sharpe ratio and a [`Warning::NegativeTangency`].
pub fn max_sharpe_portfolio(vm: &ValidatedModel, rf: f64) -> Result<PortfolioSolution> {
    let excess = excess_returns(vm, rf)?;
    let y = vm.factor().solve(&excess)?;
    let denom = y.sum();
    if denom.abs() <= tol::TANGENCY_DENOM_REL * y.abs().sum() {
        return Err(Error::TangencyUndefined { denominator: denom });
    }
    let w = &y / denom;
    let warnings = if denom < 0.0 {
        vec![Warning::NegativeTangency]
    } else {
        Vec::new()
    };
    // Stationarity of the Sharpe objective: 2 S w is proportional to the
    // excess returns; the scale is fixed by w itself.
    let var = w.dot(&(vm.sigma() * &w));
    let lambda = 2.0 * var / w.dot(&excess);
    let kkt = {
        let mut r = vm.sigma() * &w * 2.0;
        r -= &excess * lambda;
        r.amax()
    };
    Ok(solution(vm, w, None, Some(rf), kkt, warnings))
}

/// Sharpe ratio `(w . mu - rf) / sigma(w)` of explicit weights.
pub fn sharpe_ratio(vm: &ValidatedModel, weights: &DVector<f64>, rf: f64) -> Result<f64> {
    let m = portfolio_moments(vm.model(), weights)?;
    if m.sigma <= 0.0 {
        return Err(Error::ZeroVariancePortfolio);
    }
    Ok((m.mu - rf) / m.sigma)
}

/// Minimum-variance portfolio achieving mean exactly `mu0`, risky assets
/// only. Solves the 2x2 multiplier system in the gram scalars, then assembles
/// `w = (l1/2) S^-1 mu + (l2/2) S^-1 1`.
///
/// Errors with [`Error::DegenerateFrontier`] when the mean vector is
/// collinear with the budget direction. Targets below the frontier vertex get
/// a [`Warning::InefficientBranch`].
pub fn min_variance_for_return(vm: &ValidatedModel, mu0: f64) -> Result<PortfolioSolution> {
    if !mu0.is_finite() {
        return Err(Error::InvalidRange {
            detail: format!("target return must be finite, got {mu0}"),
        });
    }
    let f = vm.factor();
    let (a, b, c) = (f.ones_gram(), f.mu_ones_gram(), f.mu_gram());
    let d = f.gram_discriminant();
    if d <= tol::DEGENERATE_FRONTIER_REL * c * a {
        return Err(Error::DegenerateFrontier { discriminant: d });
    }
    // [[c, b], [b, a]] (l1/2, l2/2)' = (mu0, 1)'.
    let half_l1 = (a * mu0 - b) / d;
    let half_l2 = (c - b * mu0) / d;

    let n = vm.n();
    let ones = DVector::from_element(n, 1.0);
    let inv_mu = f.solve(vm.mu())?;
    let inv_ones = f.solve(&ones)?;
    let w = inv_mu * half_l1 + inv_ones * half_l2;

    let kkt = stationarity_residual(vm, &w, 2.0 * half_l1, 2.0 * half_l2);
    let warnings = if mu0 < b / a {
        vec![Warning::InefficientBranch]
    } else {
        Vec::new()
    };
    Ok(solution(vm, w, None, vm.rf(), kkt, warnings))
}

/// Minimum-variance allocation achieving mean `mu0` when a risk-free asset is
/// available: risky weights proportional to `S^-1 (mu - rf 1)`, remainder
/// `wf = 1 - sum(w)` in the risk-free asset. At `mu0 = rf` the whole budget
/// is risk-free and sigma is zero.
pub fn min_variance_with_riskfree(
    vm: &ValidatedModel,
    rf: f64,
    mu0: f64,
) -> Result<PortfolioSolution> {
    if !mu0.is_finite() || !rf.is_finite() {
        return Err(Error::InvalidRange {
            detail: format!("target return and rf must be finite, got mu0={mu0}, rf={rf}"),
        });
    }
    let excess = excess_returns(vm, rf)?;
    let y = vm.factor().solve(&excess)?;
    let e = excess.dot(&y);
    let scale = (mu0 - rf) / e;
    let w = y * scale;
    let wf = 1.0 - w.sum();
    let kkt = {
        let mut r = vm.sigma() * &w * 2.0;
        r -= &excess * (2.0 * scale);
        r.amax()
    };
    Ok(solution(vm, w, Some(wf), Some(rf), kkt, Vec::new()))
}

/// Allocation between two frontier funds with means `mu01 != mu02` that
/// realizes `target`: returns `(alpha, 1 - alpha)` with
/// `alpha = (target - mu02) / (mu01 - mu02)`. The pair sums to one exactly.
pub fn two_fund_weights(mu01: f64, mu02: f64, target: f64) -> Result<(f64, f64)> {
    let gap = (mu01 - mu02).abs();
    if gap <= tol::EQUAL_RETURNS_REL * mu01.abs().max(mu02.abs()) {
        return Err(Error::EqualFundReturns {
            mu1: mu01,
            mu2: mu02,
        });
    }
    let alpha = (target - mu02) / (mu01 - mu02);
    Ok((alpha, 1.0 - alpha))
}

/// [`combine_funds_with`] under the default tolerances.
pub fn combine_funds(
    vm: &ValidatedModel,
    funds: &[Vec<f64>],
    coeffs: &[f64],
) -> Result<CombinedPortfolio> {
    combine_funds_with(vm, funds, coeffs, &CombineOptions::default())
}

/// Linear combination of frontier funds: `W = sum_i coeffs[i] * funds[i]`.
///
/// Preconditions enforced here: at least one fund, all funds of the model's
/// size, one coefficient per fund, each fund's budget within
/// `fund_budget_tol` of one, and the coefficient sum within `coeff_sum_tol`
/// of one. The realized target is the coefficient-weighted fund means; the
/// combination is flagged `efficient` when its sigma matches the frontier
/// sigma at that target within `efficiency_rel_tol` (relative).
pub fn combine_funds_with(
    vm: &ValidatedModel,
    funds: &[Vec<f64>],
    coeffs: &[f64],
    opts: &CombineOptions,
) -> Result<CombinedPortfolio> {
    if funds.is_empty() {
        return Err(Error::EmptyInput);
    }
    if coeffs.len() != funds.len() {
        return Err(Error::DimensionMismatch {
            context: "coefficients vs funds",
            expected: funds.len(),
            actual: coeffs.len(),
        });
    }
    let n = vm.n();
    for (i, fund) in funds.iter().enumerate() {
        if fund.len() != n {
            return Err(Error::DimensionMismatch {
                context: "fund weights vs model size",
                expected: n,
                actual: fund.len(),
            });
        }
        let sum: f64 = fund.iter().sum();
        if (sum - 1.0).abs() > opts.fund_budget_tol {
            return Err(Error::CoefficientSumViolation {
                what: format!("fund {} weight", i + 1),
                sum,
                tol: opts.fund_budget_tol,
            });
        }
    }
    let coeff_sum: f64 = coeffs.iter().sum();
    if (coeff_sum - 1.0).abs() > opts.coeff_sum_tol {
        return Err(Error::CoefficientSumViolation {
            what: "coefficient".to_string(),
            sum: coeff_sum,
            tol: opts.coeff_sum_tol,
        });
    }

    let mut w = DVector::zeros(n);
    let mut realized_target = 0.0;
    for (fund, &coef) in funds.iter().zip(coeffs) {
        let fund = DVector::from_column_slice(fund);
        realized_target += coef * vm.mu().dot(&fund);
        w += fund * coef;
    }

    let reference = min_variance_for_return(vm, realized_target)?;
    let combined_sigma = portfolio_moments(vm.model(), &w)?.sigma;
    let gap = (combined_sigma - reference.sigma).abs() / reference.sigma;

    // Stationarity multipliers are not known for an arbitrary combination;
    // fit them by least squares over span{mu, 1} and report the remainder.
    let g = vm.sigma() * &w * 2.0;
    let (gmm, gm1, g11) = (vm.mu().dot(vm.mu()), vm.mu().sum(), n as f64);
    let (rhs_m, rhs_1) = (vm.mu().dot(&g), g.sum());
    let det = gmm * g11 - gm1 * gm1;
    let (lambda_mu, lambda_ones) = if det.abs() > f64::EPSILON * gmm * g11 {
        (
            (g11 * rhs_m - gm1 * rhs_1) / det,
            (gmm * rhs_1 - gm1 * rhs_m) / det,
        )
    } else {
        (0.0, rhs_1 / g11)
    };
    let kkt = stationarity_residual(vm, &w, lambda_mu, lambda_ones);

    let mut sol = solution(vm, w, None, vm.rf(), kkt, Vec::new());
    sol.warnings = reference.warnings.clone();
    Ok(CombinedPortfolio {
        solution: sol,
        realized_target,
        efficient: gap <= opts.efficiency_rel_tol,
        efficiency_gap: gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_model::MarketModel;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};

    fn identity_model(mu: Vec<f64>, rf: Option<f64>) -> ValidatedModel {
        let n = mu.len();
        MarketModel::new(vec![], DVector::from_vec(mu), DMatrix::identity(n, n), rf)
            .unwrap()
            .validate()
            .unwrap()
    }

    #[test]
    fn min_variance_on_identity_is_equal_weights() {
        let vm = identity_model(vec![0.05, 0.10], None);
        let sol = min_variance_portfolio(&vm);
        assert_relative_eq!(sol.weights[0], 0.5, max_relative = 1e-14);
        assert_relative_eq!(sol.weights[1], 0.5, max_relative = 1e-14);
        assert_relative_eq!(sol.sigma * sol.sigma, 0.5, max_relative = 1e-14);
        assert!(sol.kkt_residual <= 1e-14);
        assert!(sol.wf.is_none());
        assert!(sol.sharpe.is_none());
    }

    #[test]
    fn min_variance_budget_and_kkt() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let n = rng.gen_range(2..7);
            let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let sigma = &g * g.transpose() + DMatrix::identity(n, n) * 0.4;
            let mu = DVector::from_fn(n, |_, _| rng.gen_range(-0.05..0.15));
            let vm = MarketModel::new(vec![], mu, sigma, None)
                .unwrap()
                .validate()
                .unwrap();
            let sol = min_variance_portfolio(&vm);
            let budget: f64 = sol.weights.iter().sum();
            assert!((budget - 1.0).abs() <= tol::BUDGET_ABS);
            let w = DVector::from_column_slice(&sol.weights);
            let scale = (vm.sigma() * &w * 2.0).amax();
            assert!(sol.kkt_residual <= tol::KKT_REL * scale);
        }
    }

    #[test]
    fn max_sharpe_on_identity() {
        // S = I, mu = (0.1, 0.3), rf = 0: w proportional to mu, so (0.25, 0.75).
        let vm = identity_model(vec![0.1, 0.3], None);
        let sol = max_sharpe_portfolio(&vm, 0.0).unwrap();
        assert_relative_eq!(sol.weights[0], 0.25, max_relative = 1e-14);
        assert_relative_eq!(sol.weights[1], 0.75, max_relative = 1e-14);
        let expected_sharpe = (0.1_f64 * 0.1 + 0.3 * 0.3).sqrt();
        assert_relative_eq!(sol.sharpe.unwrap(), expected_sharpe, max_relative = 1e-13);
        assert!(sol.warnings.is_empty());
    }

    #[test]
    fn max_sharpe_zero_excess_rejected() {
        let vm = identity_model(vec![0.02, 0.02], None);
        assert!(matches!(
            max_sharpe_portfolio(&vm, 0.02),
            Err(Error::ZeroExcessReturns { .. })
        ));
    }

    #[test]
    fn tangency_undefined_when_budget_component_vanishes() {
        // S = I, excess (0.1, -0.1): S^-1 excess sums to zero.
        let vm = identity_model(vec![0.12, -0.08], None);
        match max_sharpe_portfolio(&vm, 0.02) {
            Err(Error::TangencyUndefined { denominator }) => {
                assert!(denominator.abs() <= 1e-15);
            }
            other => panic!("expected TangencyUndefined, got {other:?}"),
        }
    }

    #[test]
    fn negative_tangency_flagged() {
        // Excess returns mostly negative: S^-1 excess sums negative.
        let vm = identity_model(vec![0.00, 0.01], None);
        let sol = max_sharpe_portfolio(&vm, 0.05).unwrap();
        assert_eq!(sol.warnings, vec![Warning::NegativeTangency]);
        assert!(sol.sharpe.unwrap() < 0.0);
        let budget: f64 = sol.weights.iter().sum();
        assert_relative_eq!(budget, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn sharpe_ratio_of_explicit_weights() {
        let vm = identity_model(vec![0.1, 0.3], None);
        let w = DVector::from_vec(vec![0.5, 0.5]);
        let s = sharpe_ratio(&vm, &w, 0.02).unwrap();
        assert_relative_eq!(s, (0.2 - 0.02) / (0.5_f64).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn sharpe_ratio_rejects_zero_variance() {
        let vm = identity_model(vec![0.1, 0.3], None);
        let w = DVector::from_vec(vec![0.0, 0.0]);
        assert!(matches!(
            sharpe_ratio(&vm, &w, 0.02),
            Err(Error::ZeroVariancePortfolio)
        ));
    }

    #[test]
    fn target_return_hits_target_exactly() {
        let vm = identity_model(vec![0.0, 1.0], None);
        let sol = min_variance_for_return(&vm, 0.25).unwrap();
        assert_relative_eq!(sol.mu, 0.25, epsilon = 1e-12);
        let budget: f64 = sol.weights.iter().sum();
        assert_relative_eq!(budget, 1.0, epsilon = 1e-12);
        // Vertex is at mu = 0.5; a target below it is inefficient.
        assert_eq!(sol.warnings, vec![Warning::InefficientBranch]);

        let sol = min_variance_for_return(&vm, 0.75).unwrap();
        assert!(sol.warnings.is_empty());
    }

    #[test]
    fn target_return_rejects_collinear_means() {
        let vm = identity_model(vec![0.07, 0.07], None);
        assert!(matches!(
            min_variance_for_return(&vm, 0.07),
            Err(Error::DegenerateFrontier { .. })
        ));
    }

    #[test]
    fn riskfree_variant_identity_example() {
        // S = I, mu = (0.1, 0.3), rf = 0, mu0 = 0.1:
        // y = mu, e = 0.1, scale = 1, w = (0.1, 0.3), wf = 0.6, sigma = sqrt(0.1).
        let vm = identity_model(vec![0.1, 0.3], None);
        let sol = min_variance_with_riskfree(&vm, 0.0, 0.1).unwrap();
        assert_relative_eq!(sol.weights[0], 0.1, max_relative = 1e-14);
        assert_relative_eq!(sol.weights[1], 0.3, max_relative = 1e-14);
        assert_relative_eq!(sol.wf.unwrap(), 0.6, max_relative = 1e-14);
        assert_relative_eq!(sol.sigma, 0.1_f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(sol.mu, 0.1, max_relative = 1e-14);
    }

    #[test]
    fn riskfree_variant_at_rf_is_all_cash() {
        let vm = identity_model(vec![0.1, 0.3], None);
        let sol = min_variance_with_riskfree(&vm, 0.02, 0.02).unwrap();
        assert!(sol.weights.iter().all(|&w| w == 0.0));
        assert_eq!(sol.wf, Some(1.0));
        assert_eq!(sol.sigma, 0.0);
        assert_eq!(sol.mu, 0.02);
        assert!(sol.sharpe.is_none());
        assert!(sol.kkt_residual <= 1e-15);
    }

    #[test]
    fn riskfree_budget_includes_cash() {
        let vm = identity_model(vec![0.1, 0.3], None);
        let sol = min_variance_with_riskfree(&vm, 0.02, 0.2).unwrap();
        let risky: f64 = sol.weights.iter().sum();
        let total = risky + sol.wf.unwrap();
        // wf = 1 - sum(w): adding the sum back misses 1 by at most an ulp.
        assert!((total - 1.0).abs() <= 1e-15 * (1.0 + risky.abs()));
    }

    #[test]
    fn two_fund_weights_sum_to_one_exactly() {
        let (w1, w2) = two_fund_weights(0.08, 0.12, 0.11).unwrap();
        assert_relative_eq!(w1, 0.25, max_relative = 1e-14);
        assert_eq!(w1 + w2, 1.0);
    }

    #[test]
    fn two_fund_weights_reject_equal_returns() {
        assert!(matches!(
            two_fund_weights(0.08, 0.08, 0.1),
            Err(Error::EqualFundReturns { .. })
        ));
    }

    #[test]
    fn combining_frontier_funds_is_efficient() {
        let vm = identity_model(vec![0.0, 1.0], None);
        let f1 = min_variance_for_return(&vm, 0.6).unwrap();
        let f2 = min_variance_for_return(&vm, 0.8).unwrap();
        let (c1, c2) = two_fund_weights(f1.mu, f2.mu, 0.7).unwrap();
        let combined = combine_funds(&vm, &[f1.weights, f2.weights], &[c1, c2]).unwrap();
        assert!(combined.efficient, "gap {}", combined.efficiency_gap);
        assert_relative_eq!(combined.realized_target, 0.7, epsilon = 1e-12);
        assert_relative_eq!(combined.solution.mu, 0.7, epsilon = 1e-12);
        let direct = min_variance_for_return(&vm, 0.7).unwrap();
        assert_relative_eq!(combined.solution.sigma, direct.sigma, max_relative = 1e-10);
    }

    #[test]
    fn combine_rejects_bad_coefficient_sum() {
        let vm = identity_model(vec![0.0, 1.0], None);
        let f1 = min_variance_for_return(&vm, 0.6).unwrap();
        let f2 = min_variance_for_return(&vm, 0.8).unwrap();
        let err = combine_funds(&vm, &[f1.weights, f2.weights], &[0.7, 0.4]).unwrap_err();
        match err {
            Error::CoefficientSumViolation { what, sum, .. } => {
                assert_eq!(what, "coefficient");
                assert_relative_eq!(sum, 1.1, max_relative = 1e-12);
            }
            other => panic!("expected CoefficientSumViolation, got {other:?}"),
        }
    }

    #[test]
    fn combine_rejects_bad_fund_budget() {
        let vm = identity_model(vec![0.0, 1.0], None);
        let err = combine_funds(&vm, &[vec![0.6, 0.6]], &[1.0]).unwrap_err();
        assert!(matches!(err, Error::CoefficientSumViolation { .. }));
    }

    #[test]
    fn off_frontier_combination_is_flagged() {
        // Three assets so the constraint set has slack; (0.9, 0.1, 0.0) has
        // mean 0.1 but more variance than the frontier point there.
        let vm = identity_model(vec![0.0, 1.0, 0.5], None);
        let combined = combine_funds(&vm, &[vec![0.9, 0.1, 0.0]], &[1.0]).unwrap();
        assert!(!combined.efficient);
        assert!(combined.efficiency_gap > 0.01);
    }
}
