//! Monte Carlo verification of the closed-form solutions.
//!
//! Candidate portfolios are drawn on the budget hyperplane (and, for the
//! target-return check, on its intersection with the mean constraint) and
//! scored against the closed form. The stream is deterministic: sample `i`
//! belongs to chunk `i / CHUNK_SIZE`, and each chunk re-seeds from
//! `seed + chunk_index`, so the report depends only on `(n, samples, seed,
//! spread)` and never on how the scan is batched.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::Result;
use crate::market_model::ValidatedModel;
use crate::optimizer::{max_sharpe_portfolio, min_variance_for_return, min_variance_portfolio};

/// Samples per RNG chunk. Fixed so the stream is batching-independent.
pub const CHUNK_SIZE: usize = 8192;

/// Outcome of scanning `samples` random feasible portfolios against a closed
/// form. `margin` is oriented so that nonnegative means the closed form was
/// never beaten: `best - closed` when minimizing, `closed - best` when
/// maximizing. A margin below zero by more than a rounding allowance would
/// disprove the closed form's optimality.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub objective: String,
    pub samples: usize,
    pub seed: u64,
    pub closed_form_objective: f64,
    pub best_objective: f64,
    pub best_index: usize,
    pub best_weights: Vec<f64>,
    pub margin: f64,
}

struct Sampler {
    n: usize,
    spread: f64,
    seed: u64,
    total: usize,
    produced: usize,
    rng: ChaCha8Rng,
}

impl Sampler {
    fn new(n: usize, total: usize, seed: u64, spread: f64) -> Self {
        Sampler {
            n,
            spread,
            seed,
            total,
            produced: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Writes the next sample into `w`; false when the stream is exhausted.
    /// Each sample is `1/n + spread * (z - mean(z))` for standard-normal z,
    /// so the budget holds to roundoff by construction.
    fn fill_next(&mut self, w: &mut [f64]) -> bool {
        if self.produced == self.total {
            return false;
        }
        if self.produced.is_multiple_of(CHUNK_SIZE) {
            let chunk = (self.produced / CHUNK_SIZE) as u64;
            self.rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(chunk));
        }
        let mut mean = 0.0;
        for x in w.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut self.rng);
            *x = z;
            mean += z;
        }
        mean /= self.n as f64;
        let base = 1.0 / self.n as f64;
        for x in w.iter_mut() {
            *x = base + self.spread * (*x - mean);
        }
        self.produced += 1;
        true
    }
}

/// Iterator over random portfolios on the budget hyperplane `sum(w) = 1`,
/// centered on the equal-weight portfolio with the given `spread`. `spread`
/// of zero yields the equal-weight portfolio every time.
pub struct ConstraintPortfolios {
    sampler: Sampler,
}

impl Iterator for ConstraintPortfolios {
    type Item = DVector<f64>;

    fn next(&mut self) -> Option<DVector<f64>> {
        let mut w = DVector::zeros(self.sampler.n);
        if self.sampler.fill_next(w.as_mut_slice()) {
            Some(w)
        } else {
            None
        }
    }
}

/// Deterministic stream of `samples` budget-feasible portfolios.
pub fn random_constraint_portfolios(
    n: usize,
    samples: usize,
    seed: u64,
    spread: f64,
) -> ConstraintPortfolios {
    ConstraintPortfolios {
        sampler: Sampler::new(n, samples, seed, spread),
    }
}

/// w' S w via the symmetric expansion, no allocation.
fn variance_of(sigma: &DMatrix<f64>, w: &[f64]) -> f64 {
    let n = w.len();
    let mut var = 0.0;
    for i in 0..n {
        var += w[i] * w[i] * sigma[(i, i)];
        let mut cross = 0.0;
        for j in (i + 1)..n {
            cross += w[j] * sigma[(i, j)];
        }
        var += 2.0 * w[i] * cross;
    }
    var
}

const ORACLE_SPREAD: f64 = 1.0;

struct Best {
    objective: f64,
    index: usize,
    weights: Vec<f64>,
}

impl Best {
    fn new(n: usize) -> Self {
        Best {
            objective: f64::INFINITY,
            index: 0,
            weights: vec![0.0; n],
        }
    }

    /// Keeps the earliest strict improvement, so ties resolve to the lowest
    /// sample index no matter how the scan is split.
    fn offer(&mut self, objective: f64, index: usize, w: &[f64]) {
        if objective < self.objective {
            self.objective = objective;
            self.index = index;
            self.weights.copy_from_slice(w);
        }
    }
}

/// Scans random feasible portfolios for variance below the global
/// minimum-variance solution. Objectives are variances; `margin` is
/// `best - closed`.
pub fn verify_min_variance(vm: &ValidatedModel, samples: usize, seed: u64) -> OracleReport {
    let closed = min_variance_portfolio(vm);
    let closed_var = closed.sigma * closed.sigma;
    let n = vm.n();
    let sigma = vm.sigma();
    let mut sampler = Sampler::new(n, samples, seed, ORACLE_SPREAD);
    let mut w = vec![0.0; n];
    let mut best = Best::new(n);
    let mut index = 0;
    while sampler.fill_next(&mut w) {
        best.offer(variance_of(sigma, &w), index, &w);
        index += 1;
    }
    OracleReport {
        objective: "min_variance".to_string(),
        samples,
        seed,
        closed_form_objective: closed_var,
        best_objective: best.objective,
        best_index: best.index,
        best_weights: best.weights,
        margin: best.objective - closed_var,
    }
}

/// Scans random feasible portfolios for a Sharpe ratio above the tangency
/// portfolio's. Objectives are Sharpe ratios; `margin` is `closed - best`.
/// Only meaningful when the tangency lies on the efficient branch: a
/// negative-Sharpe stationary point is beaten by almost any sample, and the
/// report will say so.
pub fn verify_max_sharpe(
    vm: &ValidatedModel,
    rf: f64,
    samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    let closed = max_sharpe_portfolio(vm, rf)?;
    let closed_sharpe = closed
        .sharpe
        .expect("tangency portfolio has positive variance");
    let n = vm.n();
    let sigma = vm.sigma();
    let mu = vm.mu();
    let mut sampler = Sampler::new(n, samples, seed, ORACLE_SPREAD);
    let mut w = vec![0.0; n];
    // Maximization runs through the same min-merge on negated objectives.
    let mut best = Best::new(n);
    let mut index = 0;
    while sampler.fill_next(&mut w) {
        let mean: f64 = w.iter().zip(mu.iter()).map(|(a, b)| a * b).sum();
        let sharpe = (mean - rf) / variance_of(sigma, &w).sqrt();
        best.offer(-sharpe, index, &w);
        index += 1;
    }
    Ok(OracleReport {
        objective: "max_sharpe".to_string(),
        samples,
        seed,
        closed_form_objective: closed_sharpe,
        best_objective: -best.objective,
        best_index: best.index,
        best_weights: best.weights,
        margin: closed_sharpe - -best.objective,
    })
}

/// Scans portfolios satisfying both the budget and the mean constraint for
/// variance below the constrained solution at `mu0`. Samples are re-projected
/// twice, so both constraints hold to better than 1e-14. Objectives are
/// variances; `margin` is `best - closed`.
pub fn verify_target_return(
    vm: &ValidatedModel,
    mu0: f64,
    samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    let closed = min_variance_for_return(vm, mu0)?;
    let closed_var = closed.sigma * closed.sigma;
    let n = vm.n();
    let sigma = vm.sigma();
    let mu = vm.mu();
    let mu_mean = mu.sum() / n as f64;
    let mu_centered: Vec<f64> = mu.iter().map(|m| m - mu_mean).collect();
    // mu . centered(mu); nonzero because the degenerate case errored above.
    let proj_denom: f64 = mu.iter().zip(&mu_centered).map(|(a, b)| a * b).sum();

    let mut sampler = Sampler::new(n, samples, seed, ORACLE_SPREAD);
    let mut w = vec![0.0; n];
    let mut best = Best::new(n);
    let mut index = 0;
    while sampler.fill_next(&mut w) {
        for _ in 0..2 {
            let mean: f64 = w.iter().zip(mu.iter()).map(|(a, b)| a * b).sum();
            let alpha = (mu0 - mean) / proj_denom;
            for (x, c) in w.iter_mut().zip(&mu_centered) {
                *x += alpha * c;
            }
            let budget_gap = 1.0 - w.iter().sum::<f64>();
            let fix = budget_gap / n as f64;
            for x in w.iter_mut() {
                *x += fix;
            }
        }
        best.offer(variance_of(sigma, &w), index, &w);
        index += 1;
    }
    Ok(OracleReport {
        objective: "target_return".to_string(),
        samples,
        seed,
        closed_form_objective: closed_var,
        best_objective: best.objective,
        best_index: best.index,
        best_weights: best.weights,
        margin: best.objective - closed_var,
    })
}
