//! Binary logistic regression.
//!
//! Models are fitted by Newton–Raphson with step-halving on the binomial
//! log-likelihood. The covariance of a fitted model is the inverse of the
//! observed information `XᵀWX` at the estimate, which drives Wald inference.
//! Information criteria count the intercept as a parameter:
//! `AIC = deviance + 2(k+1)` and `BIC = deviance + (k+1)·ln n` for `k` slopes.

mod fit;
mod inference;
pub mod linalg;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::Dataset;

pub use fit::{fit, hessian, information, log_likelihood, logistic, predict_prob, score, FitConfig};
pub use inference::{
    information_criteria, likelihood_ratio_test, wald_inference, InformationCriteria, LrTest, WaldRow,
    DEFAULT_CONFIDENCE,
};

pub const INTERCEPT: &str = "(Intercept)";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlmError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("{n} observations cannot identify {parameters} parameters")]
    TooFewObservations { n: usize, parameters: usize },
    #[error("invalid response: {0}")]
    InvalidResponse(String),
    #[error("complete or quasi-complete separation (max |beta| = {max_abs_beta:.3})")]
    Separation { max_abs_beta: f64 },
    #[error("information matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("no convergence after {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("models are not nested: {0}")]
    NotNested(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("model file: {0}")]
    Json(String),
}

impl GlmError {
    pub fn name(&self) -> &'static str {
        match self {
            GlmError::DimensionMismatch(_) => "DimensionMismatch",
            GlmError::NonFinite { .. } => "NonFinite",
            GlmError::TooFewObservations { .. } => "TooFewObservations",
            GlmError::InvalidResponse(_) => "InvalidResponse",
            GlmError::Separation { .. } => "Separation",
            GlmError::Singular { .. } => "Singular",
            GlmError::NotConverged { .. } => "NotConverged",
            GlmError::NotNested(_) => "NotNested",
            GlmError::Internal(_) => "Internal",
            GlmError::Json(_) => "ModelFormatError",
        }
    }
}

/// Row-major design matrix whose first column is the intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    n: usize,
    cols: usize,
    data: Vec<f64>,
    feature_names: Vec<String>,
}

impl DesignMatrix {
    /// Builds the matrix from predictor rows; the intercept column is added.
    pub fn new(feature_names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self, GlmError> {
        let cols = feature_names.len() + 1;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != feature_names.len() {
                return Err(GlmError::DimensionMismatch(format!(
                    "row {i} has {} values for {} features",
                    row.len(),
                    feature_names.len()
                )));
            }
            data.push(1.0);
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(GlmError::NonFinite { row: i, col: j + 1 });
                }
                data.push(v);
            }
        }
        Ok(Self {
            n: rows.len(),
            cols,
            data,
            feature_names,
        })
    }

    pub fn intercept_only(n: usize) -> Self {
        Self {
            n,
            cols: 1,
            data: vec![1.0; n],
            feature_names: Vec::new(),
        }
    }

    /// Selects `features` (in that order) from every sample of `data`.
    pub fn from_dataset(data: &Dataset, features: &[String]) -> Result<Self, GlmError> {
        let mut rows = Vec::with_capacity(data.len());
        for s in data.samples() {
            let row = features
                .iter()
                .map(|f| {
                    s.features
                        .get(f)
                        .ok_or_else(|| GlmError::DimensionMismatch(format!("dataset has no feature {f:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::new(features.to_vec(), &rows)
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols.max(1))
    }

    /// Predictor names, excluding the intercept.
    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Names of all columns, starting with the intercept.
    pub fn column_names(&self) -> Vec<String> {
        std::iter::once(INTERCEPT.to_string())
            .chain(self.feature_names.iter().cloned())
            .collect()
    }

    /// Copy with column `col` multiplied by `factor`.
    pub fn scale_column(&self, col: usize, factor: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.cols + col] *= factor;
        }
        out
    }
}

/// A fitted logistic regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedLogit {
    /// Predictor names, excluding the intercept.
    pub feature_names: Vec<String>,
    /// Intercept first, then one slope per feature.
    pub coefficients: Vec<f64>,
    /// Inverse observed information, row-major by coefficient.
    pub covariance: Vec<Vec<f64>>,
    pub log_likelihood: f64,
    pub deviance: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_train: usize,
    pub iterations: usize,
    pub converged: bool,
}

impl FittedLogit {
    /// Number of slopes `k`.
    pub fn slopes(&self) -> usize {
        self.feature_names.len()
    }

    /// Number of estimated parameters `k + 1`.
    pub fn parameters(&self) -> usize {
        self.coefficients.len()
    }

    pub fn to_json(&self) -> String {
        // Shortest round-trip float formatting: parsing gives back the same bits.
        serde_json::to_string_pretty(self).expect("model serialises") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, GlmError> {
        let model: Self = serde_json::from_str(text).map_err(|e| GlmError::Json(e.to_string()))?;
        let p = model.feature_names.len() + 1;
        if model.coefficients.len() != p || model.covariance.len() != p || model.covariance.iter().any(|r| r.len() != p) {
            return Err(GlmError::Json("coefficient and covariance sizes disagree with feature_names".into()));
        }
        Ok(model)
    }
}
