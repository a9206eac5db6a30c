//! Classification metrics, ROC analysis, descriptive statistics and model
//! comparison tables.
//!
//! Machine outputs (CSV, JSON) carry full precision; the aligned-text tables
//! round to 2 decimals.

mod classify;
mod compare;
mod describe;

use thiserror::Error;

pub use classify::{
    confusion, evaluate_predictions, roc, roc_csv, ClassificationReport, ConfusionMatrix, Fraction, ModelEvaluation,
    RocCurve, RocPoint,
};
pub use compare::{compare_models, ComparisonRow, ComparisonTable, ModelSummary, COMPARISON_COLUMNS};
pub use describe::{
    cohort_trend, correlation_matrix, group_means, welch_t_test, CohortCell, CohortTrend, CorrelationMatrix,
    GroupMeans, TTestResult, MAX_YEARS_BEFORE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("length mismatch: {0} labels, {1} scores")]
    LengthMismatch(usize, usize),
    #[error("cutoff {0} outside (0, 1)")]
    InvalidCutoff(f64),
    #[error("label {0} is not 0 or 1")]
    InvalidLabel(u8),
    #[error("non-finite value at position {0}")]
    NonFinite(usize),
    #[error("only one class present")]
    OneClass,
    #[error("both samples have zero variance")]
    Degenerate,
    #[error("need at least {needed} observations, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("feature schema differs between samples")]
    SchemaMismatch,
    #[error("nothing to compare")]
    Empty,
}

impl EvalError {
    pub fn name(&self) -> &'static str {
        match self {
            EvalError::LengthMismatch(..) => "LengthMismatch",
            EvalError::InvalidCutoff(_) => "InvalidCutoff",
            EvalError::InvalidLabel(_) => "InvalidLabel",
            EvalError::NonFinite(_) => "NonFinite",
            EvalError::OneClass => "OneClass",
            EvalError::Degenerate => "Degenerate",
            EvalError::TooFewSamples { .. } => "TooFewSamples",
            EvalError::UnknownFeature(_) => "UnknownFeature",
            EvalError::SchemaMismatch => "SchemaMismatch",
            EvalError::Empty => "Empty",
        }
    }
}

/// Full-precision cell for machine outputs; `NA` marks an undefined value.
pub(crate) fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

/// Two-decimal cell for human-readable tables.
pub(crate) fn cell2(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:.2}"))
}
