//! Single-factor pricing: beta, the security market line, and classification
//! of observed returns against it.

use serde::Serialize;

use crate::error::{Error, Result};

/// `beta = cov(asset, systemic) / var(systemic)`.
pub fn beta(cov_asset_systemic: f64, var_systemic: f64) -> Result<f64> {
    if !(cov_asset_systemic.is_finite() && var_systemic.is_finite()) {
        return Err(Error::MalformedInput {
            detail: format!(
                "beta inputs must be finite, got cov={cov_asset_systemic}, var={var_systemic}"
            ),
        });
    }
    if var_systemic <= 0.0 {
        return Err(Error::NonPositiveSystemicVariance {
            value: var_systemic,
        });
    }
    Ok(cov_asset_systemic / var_systemic)
}

/// Security-market-line prediction. Evaluated as
/// `(1 - beta) * rf + beta * mu_systemic` so that beta 0 returns exactly `rf`
/// and beta 1 returns exactly `mu_systemic`, with no rounding detour through
/// the excess return.
pub fn capm_expected_return(rf: f64, beta: f64, mu_systemic: f64) -> f64 {
    (1.0 - beta) * rf + beta * mu_systemic
}

/// Position of an observed return relative to the security market line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SmlClass {
    /// Within `tol` of the line.
    Fair,
    /// Below the line: the price embeds a higher expectation than the line
    /// justifies.
    Overestimated,
    /// Above the line.
    Underestimated,
}

impl std::fmt::Display for SmlClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SmlClass::Fair => "fair",
            SmlClass::Overestimated => "overestimated",
            SmlClass::Underestimated => "underestimated",
        };
        f.write_str(s)
    }
}

/// Classifies `observed` against the line value `predicted` with a symmetric
/// band of width `tol`.
pub fn sml_classify(observed: f64, predicted: f64, tol: f64) -> SmlClass {
    let diff = observed - predicted;
    if diff > tol {
        SmlClass::Underestimated
    } else if diff < -tol {
        SmlClass::Overestimated
    } else {
        SmlClass::Fair
    }
}
