use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{cell, cell2, EvalError, ModelEvaluation};
use crate::glm::FittedLogit;

pub const COMPARISON_COLUMNS: [&str; 9] = [
    "Model",
    "Training Accuracy",
    "Test Accuracy",
    "LogLik",
    "AIC",
    "BIC",
    "AUC",
    "Deviance",
    "Parameters",
];

/// One model with its training- and test-set evaluations.
#[derive(Debug, Clone)]
pub struct ModelSummary<'a> {
    pub name: String,
    pub model: &'a FittedLogit,
    pub train: &'a ModelEvaluation,
    pub test: &'a ModelEvaluation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub training_accuracy: Option<f64>,
    pub test_accuracy: Option<f64>,
    pub log_lik: f64,
    pub aic: f64,
    pub bic: f64,
    /// Test-set AUC.
    pub auc: Option<f64>,
    pub deviance: f64,
    /// Number of slopes, excluding the intercept.
    pub parameters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

/// Builds the comparison table sorted by descending training accuracy,
/// ties broken by model name. Undefined accuracies sort last.
pub fn compare_models(models: &[ModelSummary<'_>]) -> Result<ComparisonTable, EvalError> {
    if models.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut rows: Vec<ComparisonRow> = models
        .iter()
        .map(|m| ComparisonRow {
            model: m.name.clone(),
            training_accuracy: m.train.accuracy(),
            test_accuracy: m.test.accuracy(),
            log_lik: m.model.log_likelihood,
            aic: m.model.aic,
            bic: m.model.bic,
            auc: m.test.auc,
            deviance: m.model.deviance,
            parameters: m.model.slopes(),
        })
        .collect();
    rows.sort_by(|a, b| {
        let by_acc = match (a.training_accuracy, b.training_accuracy) {
            (Some(x), Some(y)) => y.total_cmp(&x),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        by_acc.then_with(|| a.model.cmp(&b.model))
    });
    Ok(ComparisonTable { rows })
}

impl ComparisonTable {
    fn cells(&self, fmt: fn(Option<f64>) -> String) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.model.clone(),
                    fmt(r.training_accuracy),
                    fmt(r.test_accuracy),
                    fmt(Some(r.log_lik)),
                    fmt(Some(r.aic)),
                    fmt(Some(r.bic)),
                    fmt(r.auc),
                    fmt(Some(r.deviance)),
                    r.parameters.to_string(),
                ]
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = COMPARISON_COLUMNS.join(",") + "\n";
        for row in self.cells(cell) {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Right-aligned text table with 2-decimal values.
    pub fn to_text(&self) -> String {
        let body = self.cells(cell2);
        let widths: Vec<usize> = COMPARISON_COLUMNS
            .iter()
            .enumerate()
            .map(|(j, h)| body.iter().map(|r| r[j].len()).chain([h.len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(j, (c, &w))| if j == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(COMPARISON_COLUMNS.to_vec());
        for r in &body {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out
    }
}
