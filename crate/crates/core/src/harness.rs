//! Experiment orchestration: the repeated split/CV/refit accuracy protocol,
//! representative single fits, and the alpha sweep, all driven by one
//! config and one master seed.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{
    fold_seed_for, load_csv, split, to_dataset, ColumnMap, Dataset, TargetColumn,
};
use crate::error::{Error, Result};
use crate::evaluation::{
    accuracy, classify, compas_baseline, confusion, logistic_baseline, roc, ConfusionMatrix,
    RocCurve,
};
use crate::model_selection::{
    alpha_search, cross_validate, AlphaSearchResult, CvCurve, GridParams, LambdaRule,
};
use crate::rng::SplitMix64;
use crate::solver::{
    fit, fit_path, predict, FitResult, LambdaPath, PenaltySpec, DEFAULT_MAX_PASSES, DEFAULT_TOL,
};

pub const CLASSIFICATION_THRESHOLD: f64 = 0.5;
const LOGISTIC_MAX_ITER: usize = 100;
const LOGISTIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Lasso,
    Ridge,
    ElasticNet,
    Logistic,
    Compas,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Lasso,
        ModelKind::Ridge,
        ModelKind::ElasticNet,
        ModelKind::Logistic,
        ModelKind::Compas,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::Lasso => "lasso",
            ModelKind::Ridge => "ridge",
            ModelKind::ElasticNet => "elastic_net",
            ModelKind::Logistic => "logistic",
            ModelKind::Compas => "compas",
        }
    }

    /// The blend parameter for penalized kinds; `None` for the baselines.
    pub fn alpha(&self, pinned_alpha: f64) -> Option<f64> {
        match self {
            ModelKind::Lasso => Some(1.0),
            ModelKind::Ridge => Some(0.0),
            ModelKind::ElasticNet => Some(pinned_alpha),
            ModelKind::Logistic | ModelKind::Compas => None,
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lasso" => Ok(ModelKind::Lasso),
            "ridge" => Ok(ModelKind::Ridge),
            "elastic_net" | "elasticnet" | "en" => Ok(ModelKind::ElasticNet),
            "logistic" => Ok(ModelKind::Logistic),
            "compas" => Ok(ModelKind::Compas),
            other => Err(Error::Config(format!(
                "unknown model '{other}' (expected lasso, ridge, elastic_net, logistic, compas)"
            ))),
        }
    }
}

/// Full description of a benchmark run. Every output is a pure function of
/// this struct plus the data file it points at.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data_path: PathBuf,
    pub column_map: ColumnMap,
    pub models: Vec<ModelKind>,
    pub iterations: usize,
    pub train_fraction: f64,
    pub k_folds: usize,
    pub alpha_grid: Vec<f64>,
    pub pinned_alpha: f64,
    pub lambda_rule: LambdaRule,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    pub n_lambdas: usize,
    pub lambda_ratio: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            data_path: PathBuf::from("data/broward_two_year.csv"),
            column_map: ColumnMap::default(),
            models: ModelKind::ALL.to_vec(),
            iterations: 1000,
            train_fraction: 0.8,
            k_folds: 10,
            alpha_grid: (0..=10).map(|i| i as f64 / 10.0).collect(),
            pinned_alpha: 0.3,
            lambda_rule: LambdaRule::OneSe,
            master_seed: 39,
            output_dir: PathBuf::from("out"),
            n_lambdas: 100,
            lambda_ratio: 1e-4,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::Config("model list is empty".into()));
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be >= 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config(format!(
                "train_fraction must be in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if self.k_folds < 2 {
            return Err(Error::Config("k_folds must be >= 2".into()));
        }
        if self.alpha_grid.is_empty() || self.alpha_grid.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::Config(
                "alpha_grid must be non-empty with values in [0, 1]".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.pinned_alpha) {
            return Err(Error::Config(format!(
                "pinned_alpha must be in [0, 1], got {}",
                self.pinned_alpha
            )));
        }
        if self.n_lambdas < 2 {
            return Err(Error::Config("n_lambdas must be >= 2".into()));
        }
        if !(self.lambda_ratio > 0.0 && self.lambda_ratio < 1.0) {
            return Err(Error::Config(format!(
                "lambda_ratio must be in (0, 1), got {}",
                self.lambda_ratio
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> GridParams {
        GridParams {
            n_lambdas: self.n_lambdas,
            ratio: self.lambda_ratio,
        }
    }

    /// Hex SHA-256 of the canonical JSON encoding; stamped into every output
    /// file so artifacts trace back to the exact configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// The loaded benchmark data: encoded design plus the COMPAS column kept
/// alongside for the baseline.
#[derive(Debug, Clone)]
pub struct BenchmarkData {
    pub dataset: Dataset,
    pub compas: Vec<u8>,
    pub records: Vec<crate::dataset::DefendantRecord>,
    pub dropped_rows: usize,
}

impl BenchmarkData {
    pub fn load(cfg: &ExperimentConfig) -> Result<Self> {
        let report = load_csv(&cfg.data_path, &cfg.column_map)?;
        let dataset = to_dataset(&report.records, TargetColumn::TwoYearRecid)?;
        let compas = report.records.iter().map(|r| r.compas_prediction).collect();
        Ok(BenchmarkData {
            dataset,
            compas,
            records: report.records,
            dropped_rows: report.dropped,
        })
    }

    fn observed(&self, rows: &[usize]) -> Vec<u8> {
        rows.iter()
            .map(|&i| self.records[i].two_year_recid)
            .collect()
    }

    fn compas_at(&self, rows: &[usize]) -> Vec<u8> {
        rows.iter().map(|&i| self.compas[i]).collect()
    }
}

/// Per-model accuracy distribution over the protocol iterations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelAccuracyStats {
    pub model: ModelKind,
    pub mean_accuracy: f64,
    pub sd_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolResult {
    pub iterations: usize,
    pub stats: Vec<ModelAccuracyStats>,
}

impl ProtocolResult {
    pub fn stats_for(&self, model: ModelKind) -> Option<&ModelAccuracyStats> {
        self.stats.iter().find(|s| s.model == model)
    }
}

/// Seeds for each protocol iteration: successive outputs of a `SplitMix64`
/// seeded with the master seed, generated up front so that parallel and
/// serial execution produce identical results.
pub fn iteration_seeds(master_seed: u64, iterations: usize) -> Vec<u64> {
    let mut rng = SplitMix64::new(master_seed);
    (0..iterations).map(|_| rng.next_u64()).collect()
}

fn iteration_accuracies(
    cfg: &ExperimentConfig,
    data: &BenchmarkData,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = data.dataset.n_rows();
    let plan = split(n, seed, cfg.train_fraction)?;
    let train = data.dataset.subset(&plan.train_indices)?;
    let test = data.dataset.subset(&plan.test_indices)?;
    let fold_seed = fold_seed_for(seed);
    let obs = data.observed(&plan.test_indices);

    let mut train_std: Option<Dataset> = None;
    let mut accs = Vec::with_capacity(cfg.models.len());
    for model in &cfg.models {
        let acc = match model.alpha(cfg.pinned_alpha) {
            Some(alpha) => {
                let curve = cross_validate(&train, alpha, cfg.k_folds, fold_seed, cfg.grid())?;
                let lambda = curve.selected(cfg.lambda_rule);
                if train_std.is_none() {
                    train_std = Some(train.standardize()?);
                }
                let refit = fit(
                    train_std.as_ref().unwrap(),
                    PenaltySpec::new(lambda, alpha)?,
                    None,
                    DEFAULT_TOL,
                    DEFAULT_MAX_PASSES,
                )?;
                let scores = predict(&refit, test.x())?;
                let pred = classify(scores.as_slice(), CLASSIFICATION_THRESHOLD);
                accuracy(&pred, &obs)?
            }
            None => match model {
                ModelKind::Logistic => {
                    if train_std.is_none() {
                        train_std = Some(train.standardize()?);
                    }
                    logistic_baseline(
                        train_std.as_ref().unwrap(),
                        test.x(),
                        test.y().as_slice(),
                        LOGISTIC_MAX_ITER,
                        LOGISTIC_TOL,
                    )?
                    .accuracy
                }
                ModelKind::Compas => accuracy(&data.compas_at(&plan.test_indices), &obs)?,
                _ => unreachable!(),
            },
        };
        accs.push(acc);
    }
    Ok(accs)
}

/// Runs the repeated-split accuracy protocol: for each seeded iteration,
/// split 80/20, choose lambda by k-fold CV on the training side (alpha
/// pinned per model), refit on the full training split, and score the test
/// split at the 0.5 threshold. The logistic and COMPAS baselines are
/// evaluated under the same splits.
pub fn run_accuracy_protocol(
    cfg: &ExperimentConfig,
    data: &BenchmarkData,
) -> Result<ProtocolResult> {
    cfg.validate()?;
    let seeds = iteration_seeds(cfg.master_seed, cfg.iterations);
    let per_iteration: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&seed| iteration_accuracies(cfg, data, seed))
        .collect::<Result<_>>()?;

    let m = cfg.iterations as f64;
    let stats = cfg
        .models
        .iter()
        .enumerate()
        .map(|(idx, &model)| {
            let mean = per_iteration.iter().map(|row| row[idx]).sum::<f64>() / m;
            let sd = if cfg.iterations > 1 {
                (per_iteration
                    .iter()
                    .map(|row| (row[idx] - mean) * (row[idx] - mean))
                    .sum::<f64>()
                    / (m - 1.0))
                    .sqrt()
            } else {
                0.0
            };
            ModelAccuracyStats {
                model,
                mean_accuracy: mean,
                sd_accuracy: sd,
            }
        })
        .collect();

    Ok(ProtocolResult {
        iterations: cfg.iterations,
        stats,
    })
}

/// One seeded split examined in depth: CV curve, selected-lambda refit, test
/// confusion matrix and ROC, and the full coefficient path behind the
/// tuning plots.
#[derive(Debug, Clone, Serialize)]
pub struct RepresentativeFit {
    pub model: ModelKind,
    pub alpha: f64,
    pub lambda: f64,
    pub fit: FitResult,
    pub cv: CvCurve,
    pub confusion: ConfusionMatrix,
    pub roc: RocCurve,
    pub test_accuracy: f64,
    #[serde(skip)]
    pub path: LambdaPath,
}

impl RepresentativeFit {
    /// Names of features penalized to exactly zero.
    pub fn dropped_features(&self, feature_names: &[String]) -> Vec<String> {
        self.fit
            .coefficients
            .iter()
            .zip(feature_names)
            .filter(|(c, _)| **c == 0.0)
            .map(|(_, n)| n.clone())
            .collect()
    }
}

pub fn run_representative_fit(
    cfg: &ExperimentConfig,
    data: &BenchmarkData,
    model: ModelKind,
) -> Result<RepresentativeFit> {
    let alpha = model.alpha(cfg.pinned_alpha).ok_or_else(|| {
        Error::InvalidInput(format!(
            "{} has no penalized representative fit",
            model.label()
        ))
    })?;
    let n = data.dataset.n_rows();
    let plan = split(n, cfg.master_seed, cfg.train_fraction)?;
    let train = data.dataset.subset(&plan.train_indices)?;
    let test = data.dataset.subset(&plan.test_indices)?;
    let fold_seed = fold_seed_for(cfg.master_seed);

    let cv = cross_validate(&train, alpha, cfg.k_folds, fold_seed, cfg.grid())?;
    let lambda = cv.selected(cfg.lambda_rule);
    let train_std = train.standardize()?;
    let refit = fit(
        &train_std,
        PenaltySpec::new(lambda, alpha)?,
        None,
        DEFAULT_TOL,
        DEFAULT_MAX_PASSES,
    )?;
    let path = fit_path(
        &train_std,
        alpha,
        &cv.lambdas,
        DEFAULT_TOL,
        DEFAULT_MAX_PASSES,
    )?;

    let scores = predict(&refit, test.x())?;
    let pred = classify(scores.as_slice(), CLASSIFICATION_THRESHOLD);
    let obs = data.observed(&plan.test_indices);
    let conf = confusion(&pred, &obs)?;
    let roc_curve = roc(scores.as_slice(), &obs)?;
    let test_accuracy = accuracy(&pred, &obs)?;

    Ok(RepresentativeFit {
        model,
        alpha,
        lambda,
        fit: refit,
        cv,
        confusion: conf,
        roc: roc_curve,
        test_accuracy,
        path,
    })
}

/// The alpha sweep on the full dataset, with folds shared across alphas.
pub fn run_alpha_sweep(cfg: &ExperimentConfig, data: &BenchmarkData) -> Result<AlphaSearchResult> {
    alpha_search(
        &data.dataset,
        &cfg.alpha_grid,
        cfg.k_folds,
        fold_seed_for(cfg.master_seed),
        cfg.grid(),
        cfg.lambda_rule,
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub master_seed: u64,
    pub version: String,
    pub data_path: String,
    pub n_records: usize,
    pub dropped_rows: usize,
}

/// Everything a full run produces, traceable to the config hash and seed.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub feature_names: Vec<String>,
    /// COMPAS-column accuracy over the full dataset (split-independent).
    pub compas_full_accuracy: f64,
    pub protocol: ProtocolResult,
    pub representatives: Vec<RepresentativeFit>,
    pub alpha_search: AlphaSearchResult,
}

/// Executes the whole benchmark described by the config.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let data = BenchmarkData::load(cfg)?;
    run_with_data(cfg, &data)
}

pub fn run_with_data(cfg: &ExperimentConfig, data: &BenchmarkData) -> Result<RunReport> {
    cfg.validate()?;
    let compas_full_accuracy = compas_baseline(&data.records)?;
    let protocol = run_accuracy_protocol(cfg, data)?;
    let representatives = cfg
        .models
        .iter()
        .filter(|m| m.alpha(cfg.pinned_alpha).is_some())
        .map(|&m| run_representative_fit(cfg, data, m))
        .collect::<Result<Vec<_>>>()?;
    let alpha_search = run_alpha_sweep(cfg, data)?;
    Ok(RunReport {
        provenance: Provenance {
            config_hash: cfg.hash(),
            master_seed: cfg.master_seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            data_path: cfg.data_path.display().to_string(),
            n_records: data.dataset.n_rows(),
            dropped_rows: data.dropped_rows,
        },
        feature_names: data.dataset.feature_names().to_vec(),
        compas_full_accuracy,
        protocol,
        representatives,
        alpha_search,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::dataset::DefendantRecord;

    /// Synthetic records with a learnable signal, for fast harness tests.
    pub(crate) fn synthetic_data(n: usize, seed: u64) -> BenchmarkData {
        let mut rng = SplitMix64::new(seed);
        let records: Vec<DefendantRecord> = (0..n)
            .map(|_| {
                let age = 18 + rng.bounded(50) as u32;
                let priors = rng.bounded(12) as u32;
                let sex = rng.bounded(2) as u8;
                let signal = 0.05 * priors as f64 - 0.01 * (age as f64 - 40.0) + 0.35;
                let noise = rng.bounded(1000) as f64 / 1000.0;
                let recid = u8::from(noise < signal);
                DefendantRecord {
                    race: 1 + rng.bounded(6) as u8,
                    sex,
                    age,
                    juv_fel_count: rng.bounded(3) as u32,
                    juv_misd_count: rng.bounded(3) as u32,
                    juv_other_count: rng.bounded(3) as u32,
                    priors_count: priors,
                    charge_degree: rng.bounded(2) as u8,
                    two_year_recid: recid,
                    compas_prediction: if rng.bounded(4) == 0 {
                        1 - recid
                    } else {
                        recid
                    },
                }
            })
            .collect();
        let dataset = to_dataset(&records, TargetColumn::TwoYearRecid).unwrap();
        let compas = records.iter().map(|r| r.compas_prediction).collect();
        BenchmarkData {
            dataset,
            compas,
            records,
            dropped_rows: 0,
        }
    }

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig {
            iterations: 2,
            k_folds: 4,
            n_lambdas: 25,
            lambda_ratio: 1e-3,
            models: vec![
                ModelKind::Lasso,
                ModelKind::Ridge,
                ModelKind::ElasticNet,
                ModelKind::Logistic,
                ModelKind::Compas,
            ],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn protocol_is_deterministic() {
        let data = synthetic_data(300, 8);
        let cfg = small_cfg();
        let a = run_accuracy_protocol(&cfg, &data).unwrap();
        let b = run_accuracy_protocol(&cfg, &data).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn protocol_beats_chance_on_learnable_data() {
        let data = synthetic_data(600, 21);
        let cfg = ExperimentConfig {
            iterations: 3,
            ..small_cfg()
        };
        let result = run_accuracy_protocol(&cfg, &data).unwrap();
        for model in [ModelKind::Lasso, ModelKind::Ridge, ModelKind::ElasticNet] {
            let s = result.stats_for(model).unwrap();
            assert!(
                s.mean_accuracy > 0.55,
                "{:?} was {}",
                model,
                s.mean_accuracy
            );
        }
    }

    #[test]
    fn representative_fit_ridge_drops_nothing() {
        let data = synthetic_data(400, 5);
        let cfg = small_cfg();
        let rep = run_representative_fit(&cfg, &data, ModelKind::Ridge).unwrap();
        assert!(rep.fit.coefficients.iter().all(|&c| c != 0.0));
        assert_eq!(rep.cv.lambdas.len(), rep.path.fits.len());
        assert!(rep.test_accuracy > 0.0);
    }

    #[test]
    fn representative_fit_rejects_baselines() {
        let data = synthetic_data(100, 2);
        let cfg = small_cfg();
        assert!(run_representative_fit(&cfg, &data, ModelKind::Compas).is_err());
    }

    #[test]
    fn alpha_sweep_shares_folds_and_is_deterministic() {
        let data = synthetic_data(300, 4);
        let cfg = ExperimentConfig {
            alpha_grid: vec![0.0, 0.5, 1.0],
            ..small_cfg()
        };
        let a = run_alpha_sweep(&cfg, &data).unwrap();
        let b = run_alpha_sweep(&cfg, &data).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.alphas, vec![0.0, 0.5, 1.0]);
        assert!(a.alphas.contains(&a.best_alpha));
    }

    #[test]
    fn config_validation_catches_bad_setups() {
        let mut cfg = ExperimentConfig::default();
        cfg.models.clear();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let cfg = ExperimentConfig {
            iterations: 0,
            ..ExperimentConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let cfg = ExperimentConfig {
            pinned_alpha: 1.5,
            ..ExperimentConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn config_hash_tracks_content() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig {
            master_seed: 40,
            ..ExperimentConfig::default()
        };
        assert_eq!(a.hash(), ExperimentConfig::default().hash());
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn iteration_seeds_are_the_documented_stream() {
        let seeds = iteration_seeds(42, 3);
        assert_eq!(
            seeds,
            vec![
                0xbdd7_3226_2feb_6e95,
                0x28ef_e333_b266_f103,
                0x4752_6757_130f_9f52
            ]
        );
    }

    #[test]
    fn full_dataset_compas_baseline_independent_of_seed() {
        let data = synthetic_data(500, 77);
        let direct = compas_baseline(&data.records).unwrap();
        for seed in [1u64, 2, 3] {
            let cfg = ExperimentConfig {
                master_seed: seed,
                ..small_cfg()
            };
            let report = run_with_data(&cfg, &data).unwrap();
            assert_eq!(report.compas_full_accuracy, direct);
        }
    }
}
