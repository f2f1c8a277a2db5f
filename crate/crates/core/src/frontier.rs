//! Efficient-frontier geometry: the sigma^2(mu) parabola, its vertex, the
//! capital market line, the tangent line, and frontier sampling.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::market_model::ValidatedModel;
use crate::optimizer::{max_sharpe_portfolio, min_variance_for_return, Warning};
use crate::tol;

/// The frontier in mean-variance coordinates: `sigma^2 = a mu^2 + b mu + c`,
/// together with its vertex (the global minimum-variance point).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrontierCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Gram discriminant the coefficients were divided by; positive for every
    /// non-degenerate frontier.
    pub discriminant: f64,
    /// Mean at the vertex, `-b / (2a)`.
    pub mu_sigma_min: f64,
    /// Standard deviation at the vertex.
    pub sigma_min: f64,
}

/// A line in (sigma, mu) coordinates: `mu = slope * sigma + intercept`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LineSpec {
    pub slope: f64,
    pub intercept: f64,
}

/// One sampled frontier point. `efficient` is false on the lower branch
/// (mean below the vertex).
#[derive(Debug, Clone, Serialize)]
pub struct FrontierPoint {
    pub mu: f64,
    pub sigma: f64,
    pub weights: Vec<f64>,
    pub efficient: bool,
}

/// Frontier coefficients from the gram scalars: `a = A/d`, `b = -2B/d`,
/// `c = C/d` with `d = CA - B^2`. Errors with [`Error::DegenerateFrontier`]
/// when the mean vector is collinear with the budget direction.
pub fn frontier_coefficients(vm: &ValidatedModel) -> Result<FrontierCoefficients> {
    let f = vm.factor();
    let (cap_a, cap_b, cap_c) = (f.ones_gram(), f.mu_ones_gram(), f.mu_gram());
    let d = f.gram_discriminant();
    if d <= tol::DEGENERATE_FRONTIER_REL * cap_c * cap_a {
        return Err(Error::DegenerateFrontier { discriminant: d });
    }
    let a = cap_a / d;
    let b = -2.0 * cap_b / d;
    let c = cap_c / d;
    Ok(FrontierCoefficients {
        a,
        b,
        c,
        discriminant: d,
        mu_sigma_min: cap_b / cap_a,
        sigma_min: (1.0 / cap_a).sqrt(),
    })
}

impl FrontierCoefficients {
    /// Variance at mean `mu` on the frontier.
    pub fn variance_at(&self, mu: f64) -> f64 {
        (self.a * mu + self.b) * mu + self.c
    }

    /// Standard deviation at mean `mu` on the frontier.
    pub fn sigma_at(&self, mu: f64) -> f64 {
        self.variance_at(mu).sqrt()
    }
}

/// Capital market line: `mu = sqrt((mu - rf 1)' S^-1 (mu - rf 1)) * sigma + rf`.
/// Defined whenever the excess returns are nonzero, even when the tangency
/// portfolio itself is not.
pub fn cml_line(vm: &ValidatedModel, rf: f64) -> Result<LineSpec> {
    let excess = vm.mu().add_scalar(-rf);
    if excess.amax() <= tol::EXCESS_ZERO_ABS {
        return Err(Error::ZeroExcessReturns {
            tol: tol::EXCESS_ZERO_ABS,
        });
    }
    let y = vm.factor().solve(&excess)?;
    let e = excess.dot(&y);
    Ok(LineSpec {
        slope: e.sqrt(),
        intercept: rf,
    })
}

/// Line from the risk-free point through the tangency portfolio:
/// `slope = (mu_M - rf) / sigma_M`. Unlike [`cml_line`] this requires the
/// tangency portfolio to exist and be on the efficient branch, so
/// [`Error::TangencyUndefined`] and [`Error::NegativeTangency`] are errors
/// here.
pub fn tangent_line(vm: &ValidatedModel, rf: f64) -> Result<LineSpec> {
    let tangency = max_sharpe_portfolio(vm, rf)?;
    if tangency.warnings.contains(&Warning::NegativeTangency) {
        let excess = vm.mu().add_scalar(-rf);
        let y = vm.factor().solve(&excess)?;
        return Err(Error::NegativeTangency {
            denominator: y.sum(),
        });
    }
    Ok(LineSpec {
        slope: (tangency.mu - rf) / tangency.sigma,
        intercept: rf,
    })
}

/// Samples `k` evenly spaced means in `[mu_lo, mu_hi]`. Each point's sigma
/// comes from the quadratic coefficients and is cross-checked against the
/// constrained solver's weights to [`tol::FRONTIER_CROSS_CHECK_REL`];
/// disagreement is an error, not a silent pick. Lower-branch points are
/// dropped unless `include_inefficient` is set.
pub fn sample_frontier(
    vm: &ValidatedModel,
    mu_lo: f64,
    mu_hi: f64,
    k: usize,
    include_inefficient: bool,
) -> Result<Vec<FrontierPoint>> {
    if !(mu_lo.is_finite() && mu_hi.is_finite()) {
        return Err(Error::InvalidRange {
            detail: format!("bounds must be finite, got [{mu_lo}, {mu_hi}]"),
        });
    }
    if mu_lo >= mu_hi {
        return Err(Error::InvalidRange {
            detail: format!("need mu_lo < mu_hi, got [{mu_lo}, {mu_hi}]"),
        });
    }
    if k < 2 {
        return Err(Error::InvalidRange {
            detail: format!("need at least 2 samples, got {k}"),
        });
    }
    let coeffs = frontier_coefficients(vm)?;
    let mut points = Vec::with_capacity(k);
    for i in 0..k {
        let frac = i as f64 / (k - 1) as f64;
        let mu = mu_lo + (mu_hi - mu_lo) * frac;
        let sigma = coeffs.sigma_at(mu);
        let solved = min_variance_for_return(vm, mu)?;
        if (sigma - solved.sigma).abs() > tol::FRONTIER_CROSS_CHECK_REL * sigma.max(solved.sigma) {
            return Err(Error::FrontierMismatch {
                mu,
                sigma_quadratic: sigma,
                sigma_solver: solved.sigma,
            });
        }
        let efficient = mu >= coeffs.mu_sigma_min;
        if !efficient && !include_inefficient {
            continue;
        }
        points.push(FrontierPoint {
            mu,
            sigma,
            weights: solved.weights,
            efficient,
        });
    }
    Ok(points)
}

/// Renders sampled points as CSV with header `mu,sigma,efficient`, printing
/// 17 significant digits so parsing the numbers back reproduces them exactly.
pub fn frontier_csv(points: &[FrontierPoint]) -> String {
    let mut out = String::from("mu,sigma,efficient\n");
    for p in points {
        out.push_str(&format!("{:.16e},{:.16e},{}\n", p.mu, p.sigma, p.efficient));
    }
    out
}
