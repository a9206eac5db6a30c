use serde::{Deserialize, Serialize};

use super::{cell, cell2, EvalError};
use crate::dataset::Dataset;
use crate::lexicon::FeatureVector;
use crate::stats::students_t_two_sided_p;

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample variance with the `n − 1` denominator, two-pass.
fn variance(x: &[f64], m: f64) -> f64 {
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t: f64,
    pub df: f64,
    pub p_value: f64,
    pub mean_a: f64,
    pub mean_b: f64,
    pub sd_a: f64,
    pub sd_b: f64,
}

/// Unequal-variance two-sample t-test with Welch–Satterthwaite degrees of
/// freedom.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult, EvalError> {
    for x in [a, b] {
        if x.len() < 2 {
            return Err(EvalError::TooFewSamples { needed: 2, got: x.len() });
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(EvalError::NonFinite(i));
        }
    }
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (variance(a, ma), variance(b, mb));
    if va == 0.0 && vb == 0.0 {
        return Err(EvalError::Degenerate);
    }
    let (qa, qb) = (va / a.len() as f64, vb / b.len() as f64);
    let se2 = qa + qb;
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (qa * qa / (a.len() - 1) as f64 + qb * qb / (b.len() - 1) as f64);
    Ok(TTestResult {
        t,
        df,
        p_value: students_t_two_sided_p(t, df),
        mean_a: ma,
        mean_b: mb,
        sd_a: va.sqrt(),
        sd_b: vb.sqrt(),
    })
}

/// Per-feature means over all samples, bankrupt (label 1) and healthy
/// (label 0) samples. An empty group has `None` means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMeans {
    pub features: Vec<String>,
    pub all: Vec<Option<f64>>,
    pub bankrupt: Vec<Option<f64>>,
    pub healthy: Vec<Option<f64>>,
    pub counts: [usize; 3],
}

impl GroupMeans {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("feature,all,bankrupt,healthy\n");
        for (i, f) in self.features.iter().enumerate() {
            out.push_str(&format!(
                "{f},{},{},{}\n",
                cell(self.all[i]),
                cell(self.bankrupt[i]),
                cell(self.healthy[i])
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let w = self.features.iter().map(String::len).max().unwrap_or(0).max(7);
        let mut out = format!("{:<w$} {:>10} {:>10} {:>10}\n", "Feature", "All", "Bankrupt", "Healthy");
        for (i, f) in self.features.iter().enumerate() {
            out.push_str(&format!(
                "{f:<w$} {:>10} {:>10} {:>10}\n",
                cell2(self.all[i]),
                cell2(self.bankrupt[i]),
                cell2(self.healthy[i])
            ));
        }
        out
    }
}

pub fn group_means(data: &Dataset) -> Result<GroupMeans, EvalError> {
    if data.is_empty() {
        return Err(EvalError::TooFewSamples { needed: 1, got: 0 });
    }
    let features = data.feature_names().to_vec();
    let k = features.len();
    let mut sums = [vec![0.0; k], vec![0.0; k], vec![0.0; k]];
    let mut counts = [0usize; 3];
    for s in data.samples() {
        let groups = [0, if s.label == 1 { 1 } else { 2 }];
        for g in groups {
            counts[g] += 1;
            for (acc, v) in sums[g].iter_mut().zip(s.features.values()) {
                *acc += v;
            }
        }
    }
    let means = |g: usize| -> Vec<Option<f64>> {
        sums[g]
            .iter()
            .map(|&s| (counts[g] > 0).then(|| s / counts[g] as f64))
            .collect()
    };
    Ok(GroupMeans {
        all: means(0),
        bankrupt: means(1),
        healthy: means(2),
        features,
        counts,
    })
}

/// Pearson correlations. Rows and columns of zero-variance features are
/// `None` and the feature is listed in `zero_variance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
    pub zero_variance: Vec<String>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        self.values[i][j]
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("feature,{}\n", self.names.join(","));
        for (name, row) in self.names.iter().zip(&self.values) {
            let cells: Vec<String> = row.iter().map(|&v| cell(v)).collect();
            out.push_str(&format!("{name},{}\n", cells.join(",")));
        }
        out
    }
}

pub fn correlation_matrix(data: &Dataset, features: &[String]) -> Result<CorrelationMatrix, EvalError> {
    if data.len() < 2 {
        return Err(EvalError::TooFewSamples {
            needed: 2,
            got: data.len(),
        });
    }
    let columns = features
        .iter()
        .map(|f| data.column(f).ok_or_else(|| EvalError::UnknownFeature(f.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    // Centred columns and their sums of squares.
    let centred: Vec<(Vec<f64>, f64)> = columns
        .iter()
        .map(|c| {
            let m = mean(c);
            let d: Vec<f64> = c.iter().map(|v| v - m).collect();
            let ss = d.iter().map(|v| v * v).sum::<f64>();
            (d, ss)
        })
        .collect();
    let k = features.len();
    let mut values = vec![vec![None; k]; k];
    for i in 0..k {
        if centred[i].1 == 0.0 {
            continue;
        }
        values[i][i] = Some(1.0);
        for j in 0..i {
            if centred[j].1 == 0.0 {
                continue;
            }
            let sxy: f64 = centred[i].0.iter().zip(&centred[j].0).map(|(a, b)| a * b).sum();
            // sqrt(s * s) == s exactly, so a perfectly (anti)correlated pair gives ±1.
            let r = (sxy / (centred[i].1 * centred[j].1).sqrt()).clamp(-1.0, 1.0);
            values[i][j] = Some(r);
            values[j][i] = Some(r);
        }
    }
    Ok(CorrelationMatrix {
        names: features.to_vec(),
        zero_variance: features
            .iter()
            .zip(&centred)
            .filter(|(_, c)| c.1 == 0.0)
            .map(|(f, _)| f.clone())
            .collect(),
        values,
    })
}

pub const MAX_YEARS_BEFORE: u32 = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortCell {
    pub label: u8,
    pub years_before: u32,
    pub n: usize,
    /// `None` for every feature when the cell is empty.
    pub means: Vec<Option<f64>>,
}

/// Feature means by label and years before the event, for years `0..=5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortTrend {
    pub features: Vec<String>,
    /// Label 1 cells for years 0..=5, then label 0 cells.
    pub cells: Vec<CohortCell>,
    /// Samples whose offset lies outside `0..=5`.
    pub skipped: usize,
}

impl CohortTrend {
    pub fn cell(&self, label: u8, years_before: u32) -> Option<&CohortCell> {
        self.cells
            .iter()
            .find(|c| c.label == label && c.years_before == years_before)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("label,years_before,n,{}\n", self.features.join(","));
        for c in &self.cells {
            let means: Vec<String> = c.means.iter().map(|&v| cell(v)).collect();
            out.push_str(&format!("{},{},{},{}\n", c.label, c.years_before, c.n, means.join(",")));
        }
        out
    }
}

pub fn cohort_trend(samples: &[(u32, FeatureVector, u8)]) -> Result<CohortTrend, EvalError> {
    let features = samples.first().map(|s| s.1.names()).unwrap_or_default();
    let years = MAX_YEARS_BEFORE as usize + 1;
    let k = features.len();
    let mut sums = vec![vec![0.0; k]; 2 * years];
    let mut counts = vec![0usize; 2 * years];
    let mut skipped = 0;
    for (years_before, fv, label) in samples {
        if *label > 1 {
            return Err(EvalError::InvalidLabel(*label));
        }
        if fv.names() != features {
            return Err(EvalError::SchemaMismatch);
        }
        if *years_before > MAX_YEARS_BEFORE {
            skipped += 1;
            continue;
        }
        let idx = usize::from(1 - label) * years + *years_before as usize;
        counts[idx] += 1;
        for (acc, v) in sums[idx].iter_mut().zip(fv.values()) {
            *acc += v;
        }
    }
    let cells = (0..2 * years)
        .map(|idx| CohortCell {
            label: 1 - (idx / years) as u8,
            years_before: (idx % years) as u32,
            n: counts[idx],
            means: sums[idx]
                .iter()
                .map(|&s| (counts[idx] > 0).then(|| s / counts[idx] as f64))
                .collect(),
        })
        .collect();
    Ok(CohortTrend {
        features,
        cells,
        skipped,
    })
}
