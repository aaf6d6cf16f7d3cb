//! k-fold cross-validation over lambda paths, the one-standard-error and
//! minimum-error selection rules, and the alpha grid search.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::{assign_folds, Dataset};
use crate::error::{Error, Result};
use crate::solver::{
    lambda_grid_from_top, lambda_top, GramProblem, DEFAULT_MAX_PASSES, DEFAULT_TOL,
};

/// Lambda grid shape: `n_lambdas` log-spaced points down to `ratio` times
/// the top.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub n_lambdas: usize,
    pub ratio: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams {
            n_lambdas: 100,
            ratio: 1e-4,
        }
    }
}

/// How a lambda is picked off a CV curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaRule {
    /// Largest lambda whose mean CV error is within one standard error of
    /// the minimum.
    OneSe,
    /// Lambda attaining the minimum mean CV error.
    Min,
}

/// Cross-validation curve over a lambda grid, with both selections.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvCurve {
    pub alpha: f64,
    pub lambdas: Vec<f64>,
    pub mean_mse: Vec<f64>,
    pub se_mse: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_1se: f64,
}

impl CvCurve {
    pub fn min_index(&self) -> usize {
        self.lambdas
            .iter()
            .position(|&l| l == self.lambda_min)
            .expect("lambda_min in grid")
    }

    pub fn one_se_index(&self) -> usize {
        self.lambdas
            .iter()
            .position(|&l| l == self.lambda_1se)
            .expect("lambda_1se in grid")
    }

    pub fn selected(&self, rule: LambdaRule) -> f64 {
        match rule {
            LambdaRule::OneSe => self.lambda_1se,
            LambdaRule::Min => self.lambda_min,
        }
    }

    pub fn mse_at(&self, rule: LambdaRule) -> f64 {
        match rule {
            LambdaRule::OneSe => self.mean_mse[self.one_se_index()],
            LambdaRule::Min => self.mean_mse[self.min_index()],
        }
    }
}

/// Result of scanning the blend parameter over a fixed fold assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaSearchResult {
    pub alphas: Vec<f64>,
    pub cv_mse_at_selected_lambda: Vec<f64>,
    pub best_alpha: f64,
}

struct FoldProblem {
    prob: GramProblem,
    x_test: DMatrix<f64>,
    y_test: DVector<f64>,
}

/// Runs k-fold cross-validation of the penalized fit at blend `alpha` on a
/// raw dataset.
///
/// Standardization happens inside each fold using training-fold statistics
/// only; held-out predictions are made on the original scale. The shared
/// grid's top is the largest lambda_max across the full data and every
/// training fold, so the alpha = 1 path starts all-zero in every fold.
pub fn cross_validate(
    d: &Dataset,
    alpha: f64,
    k: usize,
    seed: u64,
    grid: GridParams,
) -> Result<CvCurve> {
    if d.is_standardized() {
        return Err(Error::InvalidInput(
            "cross_validate expects raw data; folds are standardized internally".into(),
        ));
    }
    let n = d.n_rows();
    let labels = assign_folds(n, k, seed)?;

    let full_std = d.standardize()?;
    let mut top_corr = GramProblem::from_dataset(&full_std)?.max_abs_corr();

    let mut folds = Vec::with_capacity(k);
    for fold in 0..k {
        let train_rows: Vec<usize> = (0..n).filter(|&i| labels[i] != fold).collect();
        let test_rows: Vec<usize> = (0..n).filter(|&i| labels[i] == fold).collect();
        let train = d.subset(&train_rows)?.standardize()?;
        let prob = GramProblem::from_dataset(&train)?;
        top_corr = top_corr.max(prob.max_abs_corr());
        let test = d.subset(&test_rows)?;
        folds.push(FoldProblem {
            prob,
            x_test: test.x().clone(),
            y_test: test.y().clone(),
        });
    }

    let lambdas = lambda_grid_from_top(lambda_top(top_corr, alpha)?, grid.n_lambdas, grid.ratio)?;
    let n_lambdas = lambdas.len();

    // fold_mses[f][l]
    let mut fold_mses = vec![vec![0.0f64; n_lambdas]; k];
    for (f, fold) in folds.iter().enumerate() {
        let beta_std =
            fold.prob
                .path_coefficients(alpha, &lambdas, DEFAULT_TOL, DEFAULT_MAX_PASSES)?;
        // Map each column to the original scale and evaluate held-out error.
        let p = fold.prob.p();
        let stats = fold.prob.stats();
        let mut beta_orig = beta_std;
        let mut intercepts = DVector::zeros(n_lambdas);
        for l in 0..n_lambdas {
            let mut offset = 0.0;
            for j in 0..p {
                let b = beta_orig[(j, l)] / stats[j].sd;
                beta_orig[(j, l)] = b;
                offset += b * stats[j].mean;
            }
            intercepts[l] = fold.prob.y_mean() - offset;
        }
        let preds = &fold.x_test * &beta_orig; // n_test x n_lambdas
        let m = fold.y_test.len() as f64;
        for l in 0..n_lambdas {
            let mse = preds
                .column(l)
                .iter()
                .zip(fold.y_test.iter())
                .map(|(pred, y)| {
                    let e = pred + intercepts[l] - y;
                    e * e
                })
                .sum::<f64>()
                / m;
            fold_mses[f][l] = mse;
        }
    }

    let kf = k as f64;
    let mut mean_mse = vec![0.0f64; n_lambdas];
    let mut se_mse = vec![0.0f64; n_lambdas];
    for l in 0..n_lambdas {
        let mean = fold_mses.iter().map(|f| f[l]).sum::<f64>() / kf;
        let var = fold_mses
            .iter()
            .map(|f| (f[l] - mean) * (f[l] - mean))
            .sum::<f64>()
            / (kf - 1.0);
        mean_mse[l] = mean;
        se_mse[l] = (var / kf).sqrt();
    }

    // Largest lambda attaining the minimum (grid is descending, take the
    // first strict improvement scan).
    let mut idx_min = 0;
    for l in 1..n_lambdas {
        if mean_mse[l] < mean_mse[idx_min] {
            idx_min = l;
        }
    }
    let threshold = mean_mse[idx_min] + se_mse[idx_min];
    let idx_1se = (0..n_lambdas)
        .find(|&l| mean_mse[l] <= threshold)
        .unwrap_or(idx_min);

    Ok(CvCurve {
        alpha,
        lambdas: lambdas.clone(),
        mean_mse,
        se_mse,
        lambda_min: lambdas[idx_min],
        lambda_1se: lambdas[idx_1se],
    })
}

/// Cross-validates every alpha over a shared fold assignment (same seed, so
/// the comparison isolates the blend parameter) and records the CV error at
/// each alpha's selected lambda. Ties for `best_alpha` break toward the
/// smaller (more ridge-like) alpha.
pub fn alpha_search(
    d: &Dataset,
    alphas: &[f64],
    k: usize,
    seed: u64,
    grid: GridParams,
    rule: LambdaRule,
) -> Result<AlphaSearchResult> {
    if alphas.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(bad) = alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(Error::InvalidInput(format!("alpha {bad} outside [0, 1]")));
    }
    let mut mses = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let curve = cross_validate(d, alpha, k, seed, grid)?;
        mses.push(curve.mse_at(rule));
    }
    let mut best = 0;
    for i in 1..alphas.len() {
        if mses[i] < mses[best] || (mses[i] == mses[best] && alphas[i] < alphas[best]) {
            best = i;
        }
    }
    Ok(AlphaSearchResult {
        alphas: alphas.to_vec(),
        cv_mse_at_selected_lambda: mses,
        best_alpha: alphas[best],
    })
}
