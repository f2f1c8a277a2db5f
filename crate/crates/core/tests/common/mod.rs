//! Shared fixture: the 8-asset reference dataset and the rounded values the
//! regression suite checks against.

#![allow(dead_code)]

use meanvar::{MarketModel, ValidatedModel};
use serde::Deserialize;

pub const MODEL_JSON: &str = include_str!("../../../../data/reference8.json");
pub const FUNDS_JSON: &str = include_str!("../../../../data/funds8.json");

pub const RF: f64 = 0.015;

/// Global minimum-variance portfolio, rounded to four decimals. The first
/// entry's resemblance to log10(e) is coincidence.
#[allow(clippy::approx_constant)]
pub const W_MIN: [f64; 8] = [
    0.4343, 0.7324, -0.4033, 0.5122, -0.0019, -0.6344, 0.0394, 0.3213,
];
pub const MIN_SIGMA: f64 = 0.0677;
pub const MIN_MU: f64 = 0.0495;

/// Tangency portfolio, rounded to four decimals.
pub const W_TAN: [f64; 8] = [
    1.2007, -1.5916, 0.8996, 0.5272, -0.0389, -0.0715, -0.1321, 0.2066,
];
pub const TAN_SIGMA: f64 = 0.0966;
pub const TAN_MU: f64 = 0.0854;
pub const TAN_SHARPE: f64 = 0.7283;

/// Frontier sigma^2 = a mu^2 + b mu + c, rounded to four decimals.
pub const COEFF_A: f64 = 3.7017;
pub const COEFF_B: f64 = -0.3667;
pub const COEFF_C: f64 = 0.0137;
pub const CML_SLOPE: f64 = 0.7283;

/// Fund combination recovering the tangency point, and one hitting mean
/// 0.1319; both rounded to four decimals (so their sums are off by up to
/// 1e-4, which is why the regression passes explicit tolerances).
pub const COMBO_TANGENCY: [f64; 3] = [0.8479, 0.6809, -0.5287];
pub const COMBO_TARGET: [f64; 3] = [0.0131, 0.4545, 0.5324];
pub const COMBO_TARGET_SIGMA: f64 = 0.1723;
pub const COMBO_TARGET_MU: f64 = 0.1319;

#[derive(Deserialize)]
struct FundsFile {
    funds: Vec<Vec<f64>>,
}

pub fn reference_model() -> ValidatedModel {
    MarketModel::from_json(MODEL_JSON)
        .expect("reference model parses")
        .validate()
        .expect("reference covariance is SPD")
}

pub fn reference_funds() -> Vec<Vec<f64>> {
    let file: FundsFile = serde_json::from_str(FUNDS_JSON).expect("funds file parses");
    file.funds
}
