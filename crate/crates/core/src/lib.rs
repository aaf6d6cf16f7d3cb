//! Penalized linear regression (ridge, LASSO, elastic net) solved by cyclic
//! coordinate descent, with k-fold cross-validated model selection and a
//! reproducible experiment harness for the Broward County two-year
//! recidivism benchmark against the COMPAS baseline.
//!
//! The pieces compose bottom-up:
//!
//! * [`dataset`] — CSV ingestion with role-based column mapping, feature
//!   encoding, standardization, and deterministic splits / fold assignment.
//! * [`solver`] — the coordinate-descent engine, a closed-form ridge
//!   cross-check, lambda grids, and warm-started paths.
//! * [`model_selection`] — k-fold cross-validation with the minimum and
//!   one-standard-error lambda rules, and the alpha grid search.
//! * [`evaluation`] — accuracy, confusion matrices, ROC/AUC, and the
//!   logistic / COMPAS reference classifiers.
//! * [`harness`] — the seeded repeated-split accuracy protocol,
//!   representative fits, and the alpha sweep behind one config.
//! * [`report`] — CSV / SVG / JSON emission with provenance stamps.
//!
//! Determinism is a design requirement throughout: all randomness flows
//! from the documented [`rng::SplitMix64`] generator, so identical
//! (data, config, seed) triples produce byte-identical outputs.

pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod harness;
pub mod model_selection;
pub mod report;
pub mod rng;
pub mod solver;
pub mod svg;

pub use dataset::{
    assign_folds, load_csv, split, to_dataset, ColumnMap, Dataset, DefendantRecord, SplitPlan,
    TargetColumn,
};
pub use error::{Error, Result};
pub use evaluation::{
    accuracy, classify, compas_baseline, confusion, logistic_baseline, roc, ConfusionMatrix,
    RocCurve,
};
pub use harness::{
    run, run_accuracy_protocol, run_alpha_sweep, run_representative_fit, run_with_data,
    BenchmarkData, ExperimentConfig, ModelKind, RunReport,
};
pub use model_selection::{
    alpha_search, cross_validate, AlphaSearchResult, CvCurve, GridParams, LambdaRule,
};
pub use report::emit_report;
pub use solver::{
    fit, fit_path, fit_traced, lambda_grid, predict, ridge_closed_form, soft_threshold, FitResult,
    LambdaPath, PenaltySpec,
};
