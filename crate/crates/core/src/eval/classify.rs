use serde::{Deserialize, Serialize};

use super::{cell, EvalError};

/// An exact ratio of counts. Its value is undefined when the denominator is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        Self { num, den }
    }

    pub fn value(self) -> Option<f64> {
        (self.den > 0).then(|| self.num as f64 / self.den as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub cutoff: f64,
}

impl ConfusionMatrix {
    pub fn n(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> u64 {
        self.tn + self.fp
    }

    pub fn accuracy(&self) -> Fraction {
        Fraction::new(self.tp + self.tn, self.n())
    }

    pub fn misclassification(&self) -> Fraction {
        Fraction::new(self.fp + self.fn_, self.n())
    }

    /// True-positive rate.
    pub fn sensitivity(&self) -> Fraction {
        Fraction::new(self.tp, self.positives())
    }

    /// True-negative rate.
    pub fn specificity(&self) -> Fraction {
        Fraction::new(self.tn, self.negatives())
    }

    pub fn prevalence(&self) -> Fraction {
        Fraction::new(self.positives(), self.n())
    }

    pub fn report(&self) -> ClassificationReport {
        ClassificationReport {
            matrix: *self,
            accuracy: self.accuracy().value(),
            misclassification: self.misclassification().value(),
            sensitivity: self.sensitivity().value(),
            specificity: self.specificity().value(),
            prevalence: self.prevalence().value(),
        }
    }
}

/// Confusion counts with their derived rates; `None` marks a rate whose
/// denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub matrix: ConfusionMatrix,
    pub accuracy: Option<f64>,
    pub misclassification: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub prevalence: Option<f64>,
}

fn check_inputs(y: &[u8], p: &[f64]) -> Result<(), EvalError> {
    if y.len() != p.len() {
        return Err(EvalError::LengthMismatch(y.len(), p.len()));
    }
    if let Some(&bad) = y.iter().find(|&&v| v > 1) {
        return Err(EvalError::InvalidLabel(bad));
    }
    if let Some(i) = p.iter().position(|v| v.is_nan()) {
        return Err(EvalError::NonFinite(i));
    }
    Ok(())
}

/// Classifies `p > cutoff` as positive; a score equal to the cutoff is
/// negative.
pub fn confusion(y: &[u8], p: &[f64], cutoff: f64) -> Result<ConfusionMatrix, EvalError> {
    if !(cutoff > 0.0 && cutoff < 1.0) {
        return Err(EvalError::InvalidCutoff(cutoff));
    }
    check_inputs(y, p)?;
    let mut m = ConfusionMatrix {
        tp: 0,
        fp: 0,
        tn: 0,
        fn_: 0,
        cutoff,
    };
    for (&yi, &pi) in y.iter().zip(p) {
        match (yi == 1, pi > cutoff) {
            (true, true) => m.tp += 1,
            (true, false) => m.fn_ += 1,
            (false, true) => m.fp += 1,
            (false, false) => m.tn += 1,
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpf: f64,
    pub tpf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// One point per distinct score in descending order, then `-inf`. The
    /// point at threshold `c` classifies `score > c` as positive, so the
    /// curve runs from (0, 0) to (1, 1).
    pub points: Vec<RocPoint>,
    pub auc_trapezoid: f64,
    pub auc_rank: f64,
}

/// ROC curve and AUC. Tied scores form a single step and a tied
/// positive–negative pair earns half credit, so the trapezoid area and the
/// Mann–Whitney rank statistic are the same rational number; both are
/// accumulated as doubled integer pair counts and divided once.
pub fn roc(y: &[u8], scores: &[f64]) -> Result<RocCurve, EvalError> {
    check_inputs(y, scores)?;
    let pos = y.iter().filter(|&&v| v == 1).count() as u64;
    let neg = y.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(EvalError::OneClass);
    }

    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = Vec::new();
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut area2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        points.push(RocPoint {
            threshold: s,
            fpf: fp as f64 / neg as f64,
            tpf: tp as f64 / pos as f64,
        });
        let (tp0, fp0) = (tp, fp);
        while i < order.len() && scores[order[i]] == s {
            if y[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        area2 += u128::from(fp - fp0) * u128::from(tp + tp0);
    }
    points.push(RocPoint {
        threshold: f64::NEG_INFINITY,
        fpf: 1.0,
        tpf: 1.0,
    });

    let denom = 2.0 * pos as f64 * neg as f64;
    Ok(RocCurve {
        points,
        auc_trapezoid: area2 as f64 / denom,
        auc_rank: rank_numerator(y, scores) as f64 / denom,
    })
}

/// `Σ_pos (2·#{neg below} + #{neg tied})`, from an ascending sort.
fn rank_numerator(y: &[u8], scores: &[f64]) -> u128 {
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut neg_below: u128 = 0;
    let mut total: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        let (mut p, mut n) = (0u128, 0u128);
        while i < order.len() && scores[order[i]] == s {
            if y[order[i]] == 1 {
                p += 1;
            } else {
                n += 1;
            }
            i += 1;
        }
        total += p * (2 * neg_below + n);
        neg_below += n;
    }
    total
}

/// `threshold,fpf,tpf` rows with full-precision values.
pub fn roc_csv(curve: &RocCurve) -> String {
    let mut out = String::from("threshold,fpf,tpf\n");
    for p in &curve.points {
        out.push_str(&format!("{},{},{}\n", p.threshold, p.fpf, p.tpf));
    }
    out
}

/// Classification report at a cutoff plus the AUC, which is `None` when
/// only one class is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEvaluation {
    pub n: usize,
    pub classification: ClassificationReport,
    pub auc: Option<f64>,
}

impl ModelEvaluation {
    pub fn accuracy(&self) -> Option<f64> {
        self.classification.accuracy
    }

    pub fn summary(&self) -> String {
        format!(
            "n={} accuracy={} auc={}",
            self.n,
            cell(self.accuracy()),
            cell(self.auc)
        )
    }
}

pub fn evaluate_predictions(y: &[u8], p: &[f64], cutoff: f64) -> Result<(ModelEvaluation, Option<RocCurve>), EvalError> {
    let matrix = confusion(y, p, cutoff)?;
    let curve = match roc(y, p) {
        Ok(c) => Some(c),
        Err(EvalError::OneClass) => None,
        Err(e) => return Err(e),
    };
    Ok((
        ModelEvaluation {
            n: y.len(),
            classification: matrix.report(),
            auc: curve.as_ref().map(|c| c.auc_trapezoid),
        },
        curve,
    ))
}
