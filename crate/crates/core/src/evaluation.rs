//! Classification metrics (accuracy, confusion matrix, ROC/AUC) and the two
//! reference classifiers: the COMPAS prediction column and an unpenalized
//! logistic regression.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::Serialize;

use crate::dataset::{Dataset, DefendantRecord};
use crate::error::{Error, Result};

/// 2x2 classification outcome counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }

    pub fn accuracy(&self) -> f64 {
        (self.true_pos + self.true_neg) as f64 / self.total() as f64
    }

    /// Cell fractions in (tp, fp, fn, tn) order.
    pub fn rates(&self) -> [f64; 4] {
        let t = self.total() as f64;
        [
            self.true_pos as f64 / t,
            self.false_pos as f64 / t,
            self.false_neg as f64 / t,
            self.true_neg as f64 / t,
        ]
    }

    /// Renders counts with cell percentages rounded to one decimal, the
    /// format used in the benchmark's published tables.
    pub fn render_percent(&self) -> String {
        let [tp, fp, fn_, tn] = self.rates();
        format!(
            "            observed +   observed -\npredicted + {:>5} ({:.1}%) {:>5} ({:.1}%)\npredicted - {:>5} ({:.1}%) {:>5} ({:.1}%)\n",
            self.true_pos,
            tp * 100.0,
            self.false_pos,
            fp * 100.0,
            self.false_neg,
            fn_ * 100.0,
            self.true_neg,
            tn * 100.0,
        )
    }
}

/// ROC curve swept from threshold +inf down to -inf, with trapezoidal AUC.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    /// (false positive rate, true positive rate) pairs from (0,0) to (1,1).
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

/// Thresholds scores into 0/1 labels; ties at the threshold classify
/// positive.
pub fn classify(scores: &[f64], threshold: f64) -> Vec<u8> {
    scores.iter().map(|&s| u8::from(s >= threshold)).collect()
}

/// Fraction of agreeing positions.
pub fn accuracy(pred: &[u8], obs: &[u8]) -> Result<f64> {
    if pred.len() != obs.len() {
        return Err(Error::LengthMismatch(pred.len(), obs.len()));
    }
    if pred.is_empty() {
        return Err(Error::EmptyInput);
    }
    let agree = pred.iter().zip(obs).filter(|(a, b)| a == b).count();
    Ok(agree as f64 / pred.len() as f64)
}

pub fn confusion(pred: &[u8], obs: &[u8]) -> Result<ConfusionMatrix> {
    if pred.len() != obs.len() {
        return Err(Error::LengthMismatch(pred.len(), obs.len()));
    }
    let mut m = ConfusionMatrix {
        true_pos: 0,
        false_pos: 0,
        false_neg: 0,
        true_neg: 0,
    };
    for (&p, &o) in pred.iter().zip(obs) {
        match (p != 0, o != 0) {
            (true, true) => m.true_pos += 1,
            (true, false) => m.false_pos += 1,
            (false, true) => m.false_neg += 1,
            (false, false) => m.true_neg += 1,
        }
    }
    Ok(m)
}

/// ROC curve over distinct score thresholds, descending. Tied scores are
/// handled as a single step (a diagonal segment), so the curve, and hence
/// the AUC, equals the probability that a random positive outscores a random
/// negative with ties counted one half.
pub fn roc(scores: &[f64], obs: &[u8]) -> Result<RocCurve> {
    if scores.len() != obs.len() {
        return Err(Error::LengthMismatch(scores.len(), obs.len()));
    }
    let pos_total = obs.iter().filter(|&&o| o != 0).count();
    let neg_total = obs.len() - pos_total;
    if pos_total == 0 || neg_total == 0 {
        return Err(Error::DegenerateLabels);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));

    let mut points = Vec::with_capacity(scores.len() + 1);
    points.push((0.0, 0.0));
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if obs[order[i]] != 0 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / neg_total as f64, tp as f64 / pos_total as f64));
    }

    let mut auc = 0.0;
    for w in points.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        auc += (x1 - x0) * (y0 + y1) / 2.0;
    }
    Ok(RocCurve { points, auc })
}

/// Unpenalized logistic regression fit plus held-out scoring.
#[derive(Debug, Clone, Serialize)]
pub struct LogisticBaseline {
    /// Intercept followed by standardized-scale slopes.
    pub coefficients: Vec<f64>,
    /// Predicted probabilities for the test rows.
    pub scores: Vec<f64>,
    /// Accuracy of the 0.5-threshold classification on the test rows.
    pub accuracy: f64,
    pub converged: bool,
    pub n_iterations: usize,
    /// Set when any slope exceeds 30 in magnitude (quasi-separation).
    pub separation_warning: bool,
}

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// Mean negative log-likelihood, numerically stable.
fn mean_nll(design: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>) -> f64 {
    let eta = design * beta;
    let n = y.len() as f64;
    eta.iter()
        .zip(y.iter())
        .map(|(&e, &yi)| e.max(0.0) + (-e.abs()).exp().ln_1p() - yi * e)
        .sum::<f64>()
        / n
}

/// Fits unpenalized logistic regression on a standardized training set by
/// iteratively reweighted least squares (gradient-descent fallback when the
/// weighted normal equations go ill-conditioned) and scores original-scale
/// test rows.
pub fn logistic_baseline(
    train: &Dataset,
    x_test_raw: &DMatrix<f64>,
    y_test: &[f64],
    max_iter: usize,
    tol: f64,
) -> Result<LogisticBaseline> {
    let stats = train.column_stats().ok_or(Error::NotStandardized)?;
    let p = train.n_features();
    if x_test_raw.ncols() != p {
        return Err(Error::DimensionMismatch(format!(
            "test matrix has {} columns, training data has {p}",
            x_test_raw.ncols()
        )));
    }
    if x_test_raw.nrows() != y_test.len() {
        return Err(Error::LengthMismatch(x_test_raw.nrows(), y_test.len()));
    }
    if train.y().iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::InvalidInput(
            "logistic regression needs a 0/1 response".into(),
        ));
    }

    let n = train.n_rows();
    let design = {
        let mut m = DMatrix::zeros(n, p + 1);
        m.column_mut(0).fill(1.0);
        m.view_mut((0, 1), (n, p)).copy_from(train.x());
        m
    };
    let y = train.y().clone();

    let mut beta = DVector::zeros(p + 1);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let eta = &design * &beta;
        let mu = eta.map(sigmoid);
        let grad = design.transpose() * (&y - &mu) / n as f64;
        if grad.norm() < tol {
            converged = true;
            break;
        }
        let weights = mu.map(|m| m * (1.0 - m));
        let mut weighted = design.clone();
        for i in 0..n {
            weighted.row_mut(i).scale_mut(weights[i]);
        }
        let mut hessian = design.transpose() * weighted / n as f64;
        for j in 0..=p {
            hessian[(j, j)] += 1e-12;
        }
        match Cholesky::new(hessian) {
            Some(chol) => {
                beta += chol.solve(&grad);
            }
            None => {
                // Backtracking gradient ascent step on the log-likelihood.
                let current = mean_nll(&design, &y, &beta);
                let mut step = 1.0;
                for _ in 0..60 {
                    let candidate = &beta + &grad * step;
                    if mean_nll(&design, &y, &candidate) < current {
                        beta = candidate;
                        break;
                    }
                    step *= 0.5;
                }
            }
        }
    }

    let separation_warning = beta.iter().skip(1).any(|b| b.abs() > 30.0);

    let mut scores = Vec::with_capacity(y_test.len());
    for i in 0..x_test_raw.nrows() {
        let mut eta = beta[0];
        for j in 0..p {
            eta += beta[j + 1] * (x_test_raw[(i, j)] - stats[j].mean) / stats[j].sd;
        }
        scores.push(sigmoid(eta));
    }
    let pred = classify(&scores, 0.5);
    let obs: Vec<u8> = y_test.iter().map(|&v| u8::from(v >= 0.5)).collect();
    let accuracy = accuracy(&pred, &obs)?;

    Ok(LogisticBaseline {
        coefficients: beta.iter().copied().collect(),
        scores,
        accuracy,
        converged,
        n_iterations: iterations,
        separation_warning,
    })
}

/// Accuracy of the recorded COMPAS prediction against the observed two-year
/// outcome, over all given records. No fitting involved.
pub fn compas_baseline(records: &[DefendantRecord]) -> Result<f64> {
    let pred: Vec<u8> = records.iter().map(|r| r.compas_prediction).collect();
    let obs: Vec<u8> = records.iter().map(|r| r.two_year_recid).collect();
    accuracy(&pred, &obs)
}
