//! Return-series ingestion and moment estimation.

use std::io::Read;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::market_model::{default_labels, MarketModel};

/// A T-by-n matrix of per-period returns, one column per asset. At least two
/// observations are required; covariance is undefined below that.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    labels: Vec<String>,
    data: DMatrix<f64>,
}

impl ReturnSeries {
    /// Pass an empty label list to get default labels `A1..An`.
    pub fn new(labels: Vec<String>, data: DMatrix<f64>) -> Result<Self> {
        let (t, n) = data.shape();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if t < 2 {
            return Err(Error::InsufficientObservations {
                required: 2,
                actual: t,
            });
        }
        let labels = if labels.is_empty() {
            default_labels(n)
        } else if labels.len() != n {
            return Err(Error::DimensionMismatch {
                context: "labels vs return columns",
                expected: n,
                actual: labels.len(),
            });
        } else {
            labels
        };
        if let Some(bad) = data.iter().find(|x| !x.is_finite()) {
            return Err(Error::MalformedInput {
                detail: format!("non-finite return entry {bad}"),
            });
        }
        Ok(ReturnSeries { labels, data })
    }

    pub fn observations(&self) -> usize {
        self.data.nrows()
    }

    pub fn assets(&self) -> usize {
        self.data.ncols()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }
}

/// Covariance divisor: T (population) or T - 1 (sample, the default in the
/// CLI).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ddof {
    Population,
    Sample,
}

impl Ddof {
    fn delta(self) -> usize {
        match self {
            Ddof::Population => 0,
            Ddof::Sample => 1,
        }
    }
}

/// Parses comma-separated return data. With `has_header`, the first row
/// supplies asset labels; otherwise labels default to `A1..An`. Cells are
/// trimmed before parsing. Row/column positions in errors are 1-based over
/// the whole file (the header row counts).
pub fn ingest_csv<R: Read>(reader: R, has_header: bool) -> Result<ReturnSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut labels: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;

    for (idx, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::MalformedInput {
            detail: format!("CSV parse failure at row {}: {e}", idx + 1),
        })?;
        let file_row = idx + 1;
        if idx == 0 && has_header {
            labels = record.iter().map(str::to_owned).collect();
            width = Some(labels.len());
            continue;
        }
        let expected = match width {
            Some(w) => w,
            None => {
                width = Some(record.len());
                record.len()
            }
        };
        if record.len() != expected {
            return Err(Error::RaggedRows {
                row: file_row,
                expected,
                actual: record.len(),
            });
        }
        let mut row = Vec::with_capacity(expected);
        for (col, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::NonNumericCell {
                row: file_row,
                col: col + 1,
                content: cell.to_owned(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }

    let n = width.unwrap_or(0);
    if n == 0 || (rows.is_empty() && !has_header) {
        return Err(Error::EmptyInput);
    }
    if rows.is_empty() {
        return Err(Error::InsufficientObservations {
            required: 2,
            actual: 0,
        });
    }
    let t = rows.len();
    let data = DMatrix::from_fn(t, n, |i, j| rows[i][j]);
    ReturnSeries::new(labels, data)
}

/// Two-pass sample moments: column means, then centered cross-products
/// divided by T or T - 1. The covariance is computed on the upper triangle
/// and mirrored, so it is symmetric to the bit. The result is unvalidated
/// (constant columns, for instance, produce a singular covariance that
/// validation will reject).
pub fn estimate_moments(series: &ReturnSeries, ddof: Ddof) -> MarketModel {
    let t = series.observations();
    let n = series.assets();
    let data = series.data();
    let divisor = (t - ddof.delta()) as f64;

    let mut mean = DVector::zeros(n);
    for j in 0..n {
        mean[j] = data.column(j).sum() / t as f64;
    }

    let mut sigma = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..t {
                acc += (data[(k, i)] - mean[i]) * (data[(k, j)] - mean[j]);
            }
            let value = acc / divisor;
            sigma[(i, j)] = value;
            sigma[(j, i)] = value;
        }
    }

    MarketModel {
        labels: series.labels().to_vec(),
        mu: mean,
        sigma,
        rf: None,
    }
}
