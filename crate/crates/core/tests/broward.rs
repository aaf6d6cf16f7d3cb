//! Checks of published reference behavior on the bundled Broward County
//! extract, beyond what the acceptance suite asserts.

use std::path::PathBuf;
use std::sync::LazyLock;

use penrec::dataset::FEATURE_NAMES;
use penrec::evaluation::compas_baseline;
use penrec::harness::{BenchmarkData, ExperimentConfig};
use penrec::model_selection::{cross_validate, GridParams};
use penrec::solver::{fit, fit_path, lambda_grid, PenaltySpec, DEFAULT_MAX_PASSES, DEFAULT_TOL};
use penrec::{logistic_baseline, split, Dataset};

fn config() -> ExperimentConfig {
    ExperimentConfig {
        data_path: PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("../../data/broward_two_year.csv"),
        ..ExperimentConfig::default()
    }
}

static DATA: LazyLock<BenchmarkData> =
    LazyLock::new(|| BenchmarkData::load(&config()).expect("bundled data loads"));

static FULL_STD: LazyLock<Dataset> =
    LazyLock::new(|| DATA.dataset.standardize().expect("standardizes"));

#[test]
fn canonical_load_retains_7214_records() {
    assert_eq!(DATA.dataset.n_rows(), 7214);
    assert_eq!(DATA.dataset.n_features(), 8);
    assert_eq!(DATA.dropped_rows, 0);
}

#[test]
fn compas_column_accuracy_is_654() {
    let acc = compas_baseline(&DATA.records).unwrap();
    assert!((acc - 0.654).abs() < 0.005, "got {acc}");
}

#[test]
fn elastic_net_at_published_lambda_drops_only_juv_misd() {
    // The published representative elastic net (alpha 0.30, lambda 0.030)
    // zeroes exactly the juvenile misdemeanor count, with sex and age
    // negative and priors positive.
    let f = fit(
        &FULL_STD,
        PenaltySpec::new(0.030, 0.3).unwrap(),
        None,
        DEFAULT_TOL,
        DEFAULT_MAX_PASSES,
    )
    .unwrap();
    assert!(f.converged);
    let by_name: Vec<(&str, f64)> = FEATURE_NAMES
        .iter()
        .copied()
        .zip(f.coefficients.iter().copied())
        .collect();
    for (name, coef) in &by_name {
        match *name {
            "juv_misd_count" => assert_eq!(*coef, 0.0, "juv_misd_count should be dropped"),
            "sex" | "age" => assert!(*coef < 0.0, "{name} should be negative, got {coef}"),
            "priors_count" => assert!(*coef > 0.0, "priors should be positive, got {coef}"),
            _ => assert_ne!(*coef, 0.0, "{name} unexpectedly dropped"),
        }
    }
}

#[test]
fn lasso_path_drops_the_published_four_features_first() {
    // Along the LASSO path, race, juvenile felony count, juvenile
    // misdemeanor count, and charge degree reach zero before the remaining
    // features as lambda grows; equivalently they are the last to enter as
    // lambda decreases. Charge degree and juvenile other count enter within
    // ten percent of each other, so the grid must be fine enough to resolve
    // the ordering.
    let grid = lambda_grid(&FULL_STD, 1.0, 300, 1e-2).unwrap();
    let path = fit_path(&FULL_STD, 1.0, &grid, 1e-9, DEFAULT_MAX_PASSES).unwrap();
    let entry_index = |feature: &str| -> usize {
        let j = FEATURE_NAMES.iter().position(|f| *f == feature).unwrap();
        path.fits
            .iter()
            .position(|f| f.coefficients_std[j] != 0.0)
            .unwrap_or(path.fits.len())
    };
    let late = ["race", "juv_fel_count", "juv_misd_count", "charge_degree"];
    let early = ["sex", "age", "juv_other_count", "priors_count"];
    let late_min = late.iter().map(|f| entry_index(f)).min().unwrap();
    let early_max = early.iter().map(|f| entry_index(f)).max().unwrap();
    assert!(
        late_min > early_max,
        "published drop ordering violated: late features enter at {late_min}, early by {early_max}"
    );
}

#[test]
fn elastic_net_cv_error_sits_in_the_published_band() {
    let curve = cross_validate(&DATA.dataset, 0.3, 10, 2024, GridParams::default()).unwrap();
    let mse = curve.mean_mse[curve.one_se_index()];
    assert!((0.210..=0.222).contains(&mse), "cv mse {mse}");
    assert!(curve.lambda_1se >= curve.lambda_min);
}

#[test]
fn logistic_single_split_lands_near_two_thirds_accuracy() {
    let plan = split(DATA.dataset.n_rows(), 11, 0.8).unwrap();
    let train = DATA
        .dataset
        .subset(&plan.train_indices)
        .unwrap()
        .standardize()
        .unwrap();
    let test = DATA.dataset.subset(&plan.test_indices).unwrap();
    let fit = logistic_baseline(&train, test.x(), test.y().as_slice(), 100, 1e-8).unwrap();
    assert!(fit.converged);
    assert!(!fit.separation_warning);
    assert!(
        (0.63..0.72).contains(&fit.accuracy),
        "accuracy {}",
        fit.accuracy
    );
}
