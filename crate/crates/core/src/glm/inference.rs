use serde::{Deserialize, Serialize};

use super::{FittedLogit, GlmError, INTERCEPT};
use crate::stats::{chi_squared_sf, normal_quantile, normal_two_sided_p};

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaldRow {
    pub name: String,
    pub coefficient: f64,
    pub se: f64,
    pub z: f64,
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub odds_ratio: f64,
}

/// Wald z-tests and symmetric confidence intervals at `level`.
pub fn wald_inference(model: &FittedLogit, level: f64) -> Result<Vec<WaldRow>, GlmError> {
    if !model.converged {
        return Err(GlmError::NotConverged {
            iterations: model.iterations,
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(GlmError::InvalidResponse(format!("confidence level {level} outside (0, 1)")));
    }
    let zcrit = normal_quantile(0.5 + level / 2.0);
    let names = std::iter::once(INTERCEPT).chain(model.feature_names.iter().map(String::as_str));
    Ok(names
        .zip(&model.coefficients)
        .enumerate()
        .map(|(j, (name, &b))| {
            let se = model.covariance[j][j].max(0.0).sqrt();
            let z = if b == 0.0 { 0.0 } else { b / se };
            WaldRow {
                name: name.to_string(),
                coefficient: b,
                se,
                z,
                p_value: normal_two_sided_p(z),
                ci_low: b - zcrit * se,
                ci_high: b + zcrit * se,
                odds_ratio: b.exp(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationCriteria {
    pub deviance: f64,
    pub aic: f64,
    pub bic: f64,
}

impl InformationCriteria {
    /// Criteria for a model with `slopes` predictors plus an intercept,
    /// fitted on `n` observations.
    pub fn from_log_likelihood(log_likelihood: f64, slopes: usize, n: usize) -> Self {
        let deviance = -2.0 * log_likelihood;
        let p = (slopes + 1) as f64;
        Self {
            deviance,
            aic: deviance + 2.0 * p,
            bic: deviance + p * (n as f64).ln(),
        }
    }
}

pub fn information_criteria(model: &FittedLogit) -> InformationCriteria {
    InformationCriteria::from_log_likelihood(model.log_likelihood, model.slopes(), model.n_train)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrTest {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Likelihood-ratio (deviance) test of `nested` against `full`.
pub fn likelihood_ratio_test(nested: &FittedLogit, full: &FittedLogit) -> Result<LrTest, GlmError> {
    if nested.n_train != full.n_train {
        return Err(GlmError::NotNested(format!(
            "fitted on {} and {} observations",
            nested.n_train, full.n_train
        )));
    }
    if let Some(extra) = nested.feature_names.iter().find(|f| !full.feature_names.contains(f)) {
        return Err(GlmError::NotNested(format!("{extra:?} is not in the larger model")));
    }
    let df = full.parameters() - nested.parameters();
    let raw = nested.deviance - full.deviance;
    // Adding predictors cannot lower the maximised likelihood; allow only
    // optimiser-level noise.
    let slack = 1e-6 * (1.0 + full.deviance.abs());
    if raw < -slack {
        return Err(GlmError::Internal(format!("negative likelihood-ratio statistic {raw}")));
    }
    let statistic = raw.max(0.0);
    let p_value = if df == 0 {
        if statistic == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        chi_squared_sf(statistic, df as f64)
    };
    Ok(LrTest {
        statistic,
        df,
        p_value,
    })
}
