use log::debug;

use super::linalg::{cholesky, cholesky_inverse, cholesky_solve};
use super::{information_criteria, DesignMatrix, FittedLogit, GlmError};

/// Coefficients beyond this magnitude signal separation.
const SEPARATION_BETA: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Convergence threshold on the absolute change in log-likelihood.
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: u32,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100,
            max_halvings: 30,
        }
    }
}

/// `1 / (1 + e^{-x})` without overflow for large `|x|`.
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)`.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_dims(beta: &[f64], x: &DesignMatrix, y: Option<&[u8]>) -> Result<(), GlmError> {
    if beta.len() != x.ncols() {
        return Err(GlmError::DimensionMismatch(format!(
            "{} coefficients for {} columns",
            beta.len(),
            x.ncols()
        )));
    }
    if let Some(y) = y {
        if y.len() != x.nrows() {
            return Err(GlmError::DimensionMismatch(format!(
                "{} responses for {} rows",
                y.len(),
                x.nrows()
            )));
        }
    }
    Ok(())
}

/// `Σ y·η − ln(1 + e^η)`, the binomial log-likelihood written in terms of
/// the linear predictor `η = xᵀβ`.
pub fn log_likelihood(beta: &[f64], x: &DesignMatrix, y: &[u8]) -> Result<f64, GlmError> {
    check_dims(beta, x, Some(y))?;
    Ok(ll_unchecked(beta, x, y))
}

fn ll_unchecked(beta: &[f64], x: &DesignMatrix, y: &[u8]) -> f64 {
    x.rows()
        .zip(y)
        .map(|(row, &yi)| {
            let eta = dot(row, beta);
            f64::from(yi) * eta - softplus(eta)
        })
        .sum()
}

/// Gradient of the log-likelihood, `Xᵀ(y − p)`.
pub fn score(beta: &[f64], x: &DesignMatrix, y: &[u8]) -> Result<Vec<f64>, GlmError> {
    check_dims(beta, x, Some(y))?;
    let mut g = vec![0.0; x.ncols()];
    for (row, &yi) in x.rows().zip(y) {
        let r = f64::from(yi) - logistic(dot(row, beta));
        for (gj, xj) in g.iter_mut().zip(row) {
            *gj += r * xj;
        }
    }
    Ok(g)
}

/// Observed information `XᵀWX` with `W = diag(p(1 − p))`, row-major.
pub fn information(beta: &[f64], x: &DesignMatrix) -> Result<Vec<f64>, GlmError> {
    check_dims(beta, x, None)?;
    let c = x.ncols();
    let mut info = vec![0.0; c * c];
    for row in x.rows() {
        let p = logistic(dot(row, beta));
        let w = p * (1.0 - p);
        for i in 0..c {
            let wi = w * row[i];
            for j in 0..=i {
                info[i * c + j] += wi * row[j];
            }
        }
    }
    for i in 0..c {
        for j in 0..i {
            info[j * c + i] = info[i * c + j];
        }
    }
    Ok(info)
}

/// Hessian of the log-likelihood, `−XᵀWX`.
pub fn hessian(beta: &[f64], x: &DesignMatrix) -> Result<Vec<f64>, GlmError> {
    Ok(information(beta, x)?.into_iter().map(|v| -v).collect())
}

pub fn predict_prob(model: &FittedLogit, x: &DesignMatrix) -> Result<Vec<f64>, GlmError> {
    if x.feature_names() != model.feature_names.as_slice() {
        return Err(GlmError::DimensionMismatch(format!(
            "model features {:?} but matrix columns {:?}",
            model.feature_names,
            x.feature_names()
        )));
    }
    check_dims(&model.coefficients, x, None)?;
    Ok(x.rows().map(|row| logistic(dot(row, &model.coefficients))).collect())
}

fn max_abs(beta: &[f64]) -> f64 {
    beta.iter().fold(0.0, |m, b| m.max(b.abs()))
}

/// Maximum-likelihood fit by Newton–Raphson from `β = 0`.
///
/// Each Newton step is halved until the log-likelihood does not decrease.
/// Iteration stops once the log-likelihood changes by less than `config.tol`.
pub fn fit(x: &DesignMatrix, y: &[u8], config: &FitConfig) -> Result<FittedLogit, GlmError> {
    let n = x.nrows();
    let c = x.ncols();
    if y.len() != n {
        return Err(GlmError::DimensionMismatch(format!("{} responses for {n} rows", y.len())));
    }
    if let Some(v) = y.iter().find(|&&v| v > 1) {
        return Err(GlmError::InvalidResponse(format!("response {v} is not 0 or 1")));
    }
    let positives = y.iter().filter(|&&v| v == 1).count();
    if positives == 0 || positives == n {
        return Err(GlmError::InvalidResponse("both classes must be present".into()));
    }
    if n <= c {
        return Err(GlmError::TooFewObservations { n, parameters: c });
    }

    let separation = |beta: &[f64]| GlmError::Separation {
        max_abs_beta: max_abs(beta),
    };
    // Log-likelihood this close to 0 means every observation is fitted
    // almost perfectly, which only happens as coefficients diverge.
    let saturated = |ll: f64| ll > -1e-6;

    let mut beta = vec![0.0; c];
    let mut ll = ll_unchecked(&beta, x, y);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iter {
        iterations += 1;
        let g = score(&beta, x, y)?;
        let info = information(&beta, x)?;
        let l = match cholesky(&info, c) {
            Ok(l) => l,
            Err(_) if saturated(ll) || max_abs(&beta) > SEPARATION_BETA => return Err(separation(&beta)),
            Err(e) => return Err(GlmError::Singular { pivot: e.pivot }),
        };
        let delta = cholesky_solve(&l, c, &g);

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=config.max_halvings {
            let cand: Vec<f64> = beta.iter().zip(&delta).map(|(b, d)| b + step * d).collect();
            let cand_ll = ll_unchecked(&cand, x, y);
            if cand_ll >= ll {
                accepted = Some((cand, cand_ll));
                break;
            }
            step *= 0.5;
        }
        let Some((new_beta, new_ll)) = accepted else {
            // No ascent along the Newton direction: the estimate is already
            // optimal to working precision.
            debug!("newton step rejected after halvings at iteration {iterations}");
            converged = true;
            break;
        };
        let change = new_ll - ll;
        beta = new_beta;
        ll = new_ll;
        debug!("iteration {iterations}: ll = {ll:.12}, step = {step}");
        if change.abs() < config.tol {
            converged = true;
            break;
        }
    }

    if max_abs(&beta) > SEPARATION_BETA || saturated(ll) {
        return Err(separation(&beta));
    }
    if !converged {
        return Err(GlmError::NotConverged { iterations });
    }

    let info = information(&beta, x)?;
    let l = cholesky(&info, c).map_err(|e| GlmError::Singular { pivot: e.pivot })?;
    let cov = cholesky_inverse(&l, c);
    let covariance = cov.chunks_exact(c).map(<[f64]>::to_vec).collect();

    let mut model = FittedLogit {
        feature_names: x.feature_names().to_vec(),
        coefficients: beta,
        covariance,
        log_likelihood: ll,
        deviance: 0.0,
        aic: 0.0,
        bic: 0.0,
        n_train: n,
        iterations,
        converged,
    };
    let ic = information_criteria(&model);
    model.deviance = ic.deviance;
    model.aic = ic.aic;
    model.bic = ic.bic;
    Ok(model)
}
