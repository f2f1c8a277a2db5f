//! Market model validation and the SPD linear algebra everything else rests on.
//!
//! A [`MarketModel`] is raw data: labels, a mean vector, a covariance matrix,
//! and an optional risk-free rate. [`validate_model`] symmetrizes the
//! covariance, factors it (rejecting non-SPD inputs with an explicit
//! certificate), and returns a [`ValidatedModel`] whose cached [`SpdFactor`]
//! backs every downstream solve. The inverse covariance is never materialized;
//! all quadratic forms go through triangular solves against the factor.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Raw market data. Construct directly, via [`MarketModel::new`], or from
/// JSON via [`MarketModel::from_json`]; run [`validate_model`] (or
/// [`MarketModel::validate`]) before optimizing against it.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketModel {
    pub labels: Vec<String>,
    pub mu: DVector<f64>,
    pub sigma: DMatrix<f64>,
    pub rf: Option<f64>,
}

/// Serialized form: `{"labels": [...], "mu": [...], "sigma": [[row], ...], "rf": 0.015}`.
/// `labels` and `rf` are optional on input; missing labels default to
/// `A1..An`.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    mu: Vec<f64>,
    sigma: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rf: Option<f64>,
}

/// `A1..An`, matching the column names used when none are supplied.
pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("A{i}")).collect()
}

impl MarketModel {
    /// Builds a model after checking that the shapes agree. Pass an empty
    /// label list to get default labels.
    pub fn new(
        labels: Vec<String>,
        mu: DVector<f64>,
        sigma: DMatrix<f64>,
        rf: Option<f64>,
    ) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if sigma.nrows() != n || sigma.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "covariance matrix rows/cols vs mean length",
                expected: n,
                actual: if sigma.nrows() != n {
                    sigma.nrows()
                } else {
                    sigma.ncols()
                },
            });
        }
        let labels = if labels.is_empty() {
            default_labels(n)
        } else if labels.len() != n {
            return Err(Error::DimensionMismatch {
                context: "labels vs mean length",
                expected: n,
                actual: labels.len(),
            });
        } else {
            labels
        };
        Ok(MarketModel {
            labels,
            mu,
            sigma,
            rf,
        })
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::MalformedInput {
            detail: format!("model JSON: {e}"),
        })?;
        let n = file.mu.len();
        let rows = file.sigma.len();
        if rows != n {
            return Err(Error::DimensionMismatch {
                context: "covariance matrix rows vs mean length",
                expected: n,
                actual: rows,
            });
        }
        for (i, row) in file.sigma.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRows {
                    row: i + 1,
                    expected: n,
                    actual: row.len(),
                });
            }
        }
        let sigma = DMatrix::from_fn(n, n, |i, j| file.sigma[i][j]);
        MarketModel::new(
            file.labels.unwrap_or_default(),
            DVector::from_vec(file.mu),
            sigma,
            file.rf,
        )
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            labels: Some(self.labels.clone()),
            mu: self.mu.iter().copied().collect(),
            sigma: (0..self.n())
                .map(|i| self.sigma.row(i).iter().copied().collect())
                .collect(),
            rf: self.rf,
        };
        serde_json::to_string(&file).expect("model serialization cannot fail")
    }

    /// [`validate_model`] with the default symmetry tolerance and pivot floor.
    pub fn validate(self) -> Result<ValidatedModel> {
        validate_model(self, tol::SYM_TOL, SpdMode::Default)
    }
}

/// Pivot-floor policy for the Cholesky factorization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SpdMode {
    /// Floor pivots at `tol::SPD_PIVOT_REL` times the largest diagonal entry.
    #[default]
    Default,
    /// Floor pivots at an explicit multiple of the largest diagonal entry.
    PivotFloor(f64),
}

impl SpdMode {
    fn relative_floor(self) -> f64 {
        match self {
            SpdMode::Default => tol::SPD_PIVOT_REL,
            SpdMode::PivotFloor(rel) => rel,
        }
    }
}

/// Lower-triangular Cholesky factor of the symmetrized covariance, with the
/// three inverse-gram scalars every closed-form solution is built from.
#[derive(Debug, Clone)]
pub struct SpdFactor {
    lower: DMatrix<f64>,
    ones_gram: f64,
    mu_ones_gram: f64,
    mu_gram: f64,
}

impl SpdFactor {
    pub fn n(&self) -> usize {
        self.lower.nrows()
    }

    /// 1' S^-1 1. Positive for every SPD covariance.
    pub fn ones_gram(&self) -> f64 {
        self.ones_gram
    }

    /// mu' S^-1 1.
    pub fn mu_ones_gram(&self) -> f64 {
        self.mu_ones_gram
    }

    /// mu' S^-1 mu. Nonnegative for every SPD covariance.
    pub fn mu_gram(&self) -> f64 {
        self.mu_gram
    }

    /// mu_gram * ones_gram - mu_ones_gram^2. Nonnegative by Cauchy-Schwarz;
    /// zero exactly when mu is collinear with the budget direction.
    pub fn gram_discriminant(&self) -> f64 {
        self.mu_gram * self.ones_gram - self.mu_ones_gram * self.mu_ones_gram
    }

    /// Solves S x = rhs by forward then back substitution against the factor.
    pub fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.n();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                context: "right-hand side vs factor size",
                expected: n,
                actual: rhs.len(),
            });
        }
        let l = &self.lower;
        let mut y = rhs.clone();
        for i in 0..n {
            let mut acc = y[i];
            for k in 0..i {
                acc -= l[(i, k)] * y[k];
            }
            y[i] = acc / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for k in (i + 1)..n {
                acc -= l[(k, i)] * y[k];
            }
            y[i] = acc / l[(i, i)];
        }
        Ok(y)
    }
}

/// Solves `sigma * x = rhs` using the validated factor.
pub fn solve_spd(factor: &SpdFactor, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    factor.solve(rhs)
}

/// A model whose covariance passed symmetrization and SPD factorization.
/// Holds the symmetrized covariance (the one actually factored) and the
/// cached factor.
#[derive(Debug, Clone)]
pub struct ValidatedModel {
    model: MarketModel,
    factor: SpdFactor,
}

impl ValidatedModel {
    pub fn model(&self) -> &MarketModel {
        &self.model
    }

    pub fn factor(&self) -> &SpdFactor {
        &self.factor
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.model.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.model.sigma
    }

    pub fn labels(&self) -> &[String] {
        &self.model.labels
    }

    pub fn rf(&self) -> Option<f64> {
        self.model.rf
    }
}

/// Validates `raw`: shapes, finiteness, nonnegative diagonal, symmetry within
/// `sym_tol` (then exact symmetrization), and positive definiteness via
/// Cholesky with the pivot floor from `mode`. On success the returned model
/// carries the symmetrized covariance and its factor; on a pivot breakdown
/// the error carries a unit-norm certificate direction w with
/// `w' S w = pivot <= floor`.
pub fn validate_model(raw: MarketModel, sym_tol: f64, mode: SpdMode) -> Result<ValidatedModel> {
    let n = raw.n();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if raw.sigma.nrows() != n || raw.sigma.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "covariance matrix rows/cols vs mean length",
            expected: n,
            actual: if raw.sigma.nrows() != n {
                raw.sigma.nrows()
            } else {
                raw.sigma.ncols()
            },
        });
    }
    if raw.labels.len() != n {
        return Err(Error::DimensionMismatch {
            context: "labels vs mean length",
            expected: n,
            actual: raw.labels.len(),
        });
    }
    if let Some(bad) = raw.mu.iter().find(|x| !x.is_finite()) {
        return Err(Error::MalformedInput {
            detail: format!("non-finite mean entry {bad}"),
        });
    }
    if let Some(rf) = raw.rf {
        if !rf.is_finite() {
            return Err(Error::MalformedInput {
                detail: format!("non-finite risk-free rate {rf}"),
            });
        }
    }
    if let Some(bad) = raw.sigma.iter().find(|x| !x.is_finite()) {
        return Err(Error::MalformedInput {
            detail: format!("non-finite covariance entry {bad}"),
        });
    }
    for i in 0..n {
        if raw.sigma[(i, i)] < 0.0 {
            return Err(Error::NegativeDiagonal {
                index: i,
                value: raw.sigma[(i, i)],
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = (raw.sigma[(i, j)] - raw.sigma[(j, i)]).abs();
            if diff > sym_tol {
                return Err(Error::AsymmetryBeyondTolerance {
                    row: i,
                    col: j,
                    diff,
                    tol: sym_tol,
                });
            }
        }
    }

    let mut model = raw;
    let sym = DMatrix::from_fn(n, n, |i, j| {
        0.5 * (model.sigma[(i, j)] + model.sigma[(j, i)])
    });
    model.sigma = sym;

    let lower = cholesky_with_floor(&model.sigma, mode.relative_floor())?;
    let mut factor = SpdFactor {
        lower,
        ones_gram: 0.0,
        mu_ones_gram: 0.0,
        mu_gram: 0.0,
    };
    let ones = DVector::from_element(n, 1.0);
    let inv_ones = factor.solve(&ones)?;
    let inv_mu = factor.solve(&model.mu)?;
    factor.ones_gram = ones.dot(&inv_ones);
    factor.mu_ones_gram = model.mu.dot(&inv_ones);
    factor.mu_gram = model.mu.dot(&inv_mu);
    debug_assert!(factor.ones_gram > 0.0);

    Ok(ValidatedModel { model, factor })
}

/// Left-looking Cholesky. A pivot at or below `rel_floor * max_diag` aborts
/// the factorization; the error carries the breakdown column, the offending
/// pivot, and a certificate direction built from the partial factor.
fn cholesky_with_floor(s: &DMatrix<f64>, rel_floor: f64) -> Result<DMatrix<f64>> {
    let n = s.nrows();
    let max_diag = (0..n).map(|i| s[(i, i)]).fold(0.0_f64, f64::max);
    let floor = rel_floor * max_diag;
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = s[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= floor {
            let certificate = breakdown_certificate(&l, j);
            return Err(Error::NotPositiveDefinite {
                column: j,
                pivot: d,
                certificate,
            });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut acc = s[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = acc / ljj;
        }
    }
    Ok(l)
}

/// Certificate for a breakdown at column `j`: with `l` the leading j-by-j
/// factor and `r` row j of the partial factor, the direction
/// `w = (-l^-T r, 1, 0, ..)` satisfies `w' S w = pivot` exactly in real
/// arithmetic. Normalized to unit length, sign fixed so the first entry
/// carrying non-negligible weight is positive.
fn breakdown_certificate(l: &DMatrix<f64>, j: usize) -> Vec<f64> {
    let n = l.nrows();
    let mut w = vec![0.0; n];
    w[j] = 1.0;
    // Back substitution on l[0..j, 0..j]^T y = -r.
    for i in (0..j).rev() {
        let mut acc = -l[(j, i)];
        for k in (i + 1)..j {
            acc -= l[(k, i)] * w[k];
        }
        w[i] = acc / l[(i, i)];
    }
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in w.iter_mut() {
        *x /= norm;
    }
    let threshold = 1e-12 * w.iter().map(|x| x.abs()).fold(0.0_f64, f64::max);
    if let Some(lead) = w.iter().find(|x| x.abs() > threshold) {
        if *lead < 0.0 {
            for x in w.iter_mut() {
                *x = -*x;
            }
        }
    }
    w
}

/// Portfolio mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mu: f64,
    pub sigma: f64,
}

/// Mean `w . mu` and standard deviation `sqrt(w' S w)` of a weight vector
/// under `model`. Works on unvalidated models; an indefinite covariance that
/// makes the variance negative is reported as an error rather than a NaN.
pub fn portfolio_moments(model: &MarketModel, weights: &DVector<f64>) -> Result<Moments> {
    let n = model.n();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            context: "weights vs model size",
            expected: n,
            actual: weights.len(),
        });
    }
    let mu = model.mu.dot(weights);
    let var = quadratic_form(&model.sigma, weights);
    if var < 0.0 {
        return Err(Error::NegativeVariance { value: var });
    }
    Ok(Moments {
        mu,
        sigma: var.sqrt(),
    })
}

/// w' S w, evaluated without forming S w explicitly more than once.
pub(crate) fn quadratic_form(sigma: &DMatrix<f64>, w: &DVector<f64>) -> f64 {
    w.dot(&(sigma * w))
}
