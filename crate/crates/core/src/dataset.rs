//! Broward County data ingestion, feature encoding, standardization, and
//! deterministic splits / fold assignment.

use std::collections::HashMap;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{permutation, SplitMix64};

/// Column order of the design matrix produced by [`to_dataset`].
pub const FEATURE_NAMES: [&str; 8] = [
    "race",
    "sex",
    "age",
    "juv_fel_count",
    "juv_misd_count",
    "juv_other_count",
    "priors_count",
    "charge_degree",
];

/// One row of the Broward County data.
///
/// Encodings follow the source analysis: race is a single numeric code
/// (1 = white, 2 = black, 3 = hispanic, 4 = asian, 5 = native american,
/// 6 = other), sex is 1 = female / 0 = male, charge degree is 1 = felony /
/// 0 = misdemeanor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefendantRecord {
    pub race: u8,
    pub sex: u8,
    pub age: u32,
    pub juv_fel_count: u32,
    pub juv_misd_count: u32,
    pub juv_other_count: u32,
    pub priors_count: u32,
    pub charge_degree: u8,
    pub two_year_recid: u8,
    pub compas_prediction: u8,
}

impl DefendantRecord {
    pub fn validate(&self) -> Result<()> {
        if !(1..=6).contains(&self.race) {
            return Err(Error::InvalidInput(format!(
                "race code {} out of 1..=6",
                self.race
            )));
        }
        for (name, v) in [
            ("sex", self.sex),
            ("charge_degree", self.charge_degree),
            ("two_year_recid", self.two_year_recid),
            ("compas_prediction", self.compas_prediction),
        ] {
            if v > 1 {
                return Err(Error::InvalidInput(format!(
                    "{name} must be 0 or 1, got {v}"
                )));
            }
        }
        if self.age == 0 {
            return Err(Error::InvalidInput("age must be positive".into()));
        }
        Ok(())
    }
}

/// Maps the ten record roles onto CSV column names.
///
/// Defaults match the ProPublica two-year file, with the COMPAS binary
/// prediction read from `score_text` (Low -> 0, Medium/High -> 1, the usual
/// decile >= 5 binarization).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub race: String,
    pub sex: String,
    pub age: String,
    pub juv_fel_count: String,
    pub juv_misd_count: String,
    pub juv_other_count: String,
    pub priors_count: String,
    pub charge_degree: String,
    pub two_year_recid: String,
    pub compas_prediction: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            race: "race".into(),
            sex: "sex".into(),
            age: "age".into(),
            juv_fel_count: "juv_fel_count".into(),
            juv_misd_count: "juv_misd_count".into(),
            juv_other_count: "juv_other_count".into(),
            priors_count: "priors_count".into(),
            charge_degree: "c_charge_degree".into(),
            two_year_recid: "two_year_recid".into(),
            compas_prediction: "score_text".into(),
        }
    }
}

fn parse_race(s: &str) -> Option<u8> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "white" | "caucasian" => Some(1),
        "2" | "black" | "african-american" => Some(2),
        "3" | "hispanic" => Some(3),
        "4" | "asian" => Some(4),
        "5" | "native american" => Some(5),
        "6" | "other" => Some(6),
        _ => None,
    }
}

fn parse_sex(s: &str) -> Option<u8> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "female" => Some(1),
        "0" | "male" => Some(0),
        _ => None,
    }
}

fn parse_charge_degree(s: &str) -> Option<u8> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "f" => Some(1),
        "0" | "m" => Some(0),
        _ => None,
    }
}

fn parse_binary(s: &str) -> Option<u8> {
    match s.trim() {
        "1" => Some(1),
        "0" => Some(0),
        _ => None,
    }
}

fn parse_compas_prediction(s: &str) -> Option<u8> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "medium" | "high" => Some(1),
        "0" | "low" => Some(0),
        _ => None,
    }
}

fn parse_count(s: &str) -> Option<u32> {
    s.trim().parse().ok()
}

/// Outcome of a CSV load: the retained records plus drop accounting.
#[derive(Debug, Clone)]
pub struct LoadReport {
    pub records: Vec<DefendantRecord>,
    pub retained: usize,
    pub dropped: usize,
}

/// Reads defendant records from a CSV file.
///
/// Rows with missing or unparseable mapped fields are dropped and counted.
/// More than 50% dropped rows is a [`Error::DataQuality`] error, except for
/// an empty (header-only) file, which loads as zero records.
pub fn load_csv(path: &Path, map: &ColumnMap) -> Result<LoadReport> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let index: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();

    let col = |name: &str| -> Result<usize> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::HeaderMissing(name.to_string()))
    };
    let c_race = col(&map.race)?;
    let c_sex = col(&map.sex)?;
    let c_age = col(&map.age)?;
    let c_jf = col(&map.juv_fel_count)?;
    let c_jm = col(&map.juv_misd_count)?;
    let c_jo = col(&map.juv_other_count)?;
    let c_pr = col(&map.priors_count)?;
    let c_cd = col(&map.charge_degree)?;
    let c_recid = col(&map.two_year_recid)?;
    let c_compas = col(&map.compas_prediction)?;

    let mut records = Vec::new();
    let mut dropped = 0usize;
    for row in reader.records() {
        let row = row?;
        let get = |i: usize| row.get(i).unwrap_or("");
        let parsed = (|| {
            let rec = DefendantRecord {
                race: parse_race(get(c_race))?,
                sex: parse_sex(get(c_sex))?,
                age: parse_count(get(c_age))?,
                juv_fel_count: parse_count(get(c_jf))?,
                juv_misd_count: parse_count(get(c_jm))?,
                juv_other_count: parse_count(get(c_jo))?,
                priors_count: parse_count(get(c_pr))?,
                charge_degree: parse_charge_degree(get(c_cd))?,
                two_year_recid: parse_binary(get(c_recid))?,
                compas_prediction: parse_compas_prediction(get(c_compas))?,
            };
            rec.validate().ok()?;
            Some(rec)
        })();
        match parsed {
            Some(rec) => records.push(rec),
            None => dropped += 1,
        }
    }

    let total = records.len() + dropped;
    if total > 0 && dropped * 2 > total {
        return Err(Error::DataQuality { dropped, total });
    }
    Ok(LoadReport {
        retained: records.len(),
        dropped,
        records,
    })
}

/// Per-column standardization statistics (population standard deviation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColumnStats {
    pub mean: f64,
    pub sd: f64,
}

/// Whether a dataset's columns are on their original or standardized scale.
#[derive(Debug, Clone, PartialEq)]
pub enum Standardization {
    Raw,
    /// Columns transformed to (x - mean) / sd; the stats map coefficients
    /// back to the original scale.
    Standardized(Vec<ColumnStats>),
}

/// A design matrix with its response and scale bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DVector<f64>,
    feature_names: Vec<String>,
    standardization: Standardization,
}

impl Dataset {
    /// Builds a raw dataset. `x` is n rows by p columns; `y` has length n.
    pub fn new(x: DMatrix<f64>, y: DVector<f64>, feature_names: Vec<String>) -> Result<Self> {
        if x.nrows() == 0 {
            return Err(Error::EmptyInput);
        }
        if x.nrows() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "x has {} rows but y has {} entries",
                x.nrows(),
                y.len()
            )));
        }
        if x.ncols() != feature_names.len() {
            return Err(Error::DimensionMismatch(format!(
                "x has {} columns but {} feature names given",
                x.ncols(),
                feature_names.len()
            )));
        }
        Ok(Dataset {
            x,
            y,
            feature_names,
            standardization: Standardization::Raw,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn standardization(&self) -> &Standardization {
        &self.standardization
    }

    pub fn is_standardized(&self) -> bool {
        matches!(self.standardization, Standardization::Standardized(_))
    }

    /// The stored per-column stats, if standardized.
    pub fn column_stats(&self) -> Option<&[ColumnStats]> {
        match &self.standardization {
            Standardization::Raw => None,
            Standardization::Standardized(stats) => Some(stats),
        }
    }

    /// Transforms every column to mean 0 and population sd 1, recording the
    /// (mean, sd) pairs. The response is left untouched.
    pub fn standardize(&self) -> Result<Dataset> {
        if self.is_standardized() {
            return Err(Error::InvalidInput(
                "dataset is already standardized".into(),
            ));
        }
        let n = self.n_rows() as f64;
        let mut x = self.x.clone();
        let mut stats = Vec::with_capacity(self.n_features());
        for j in 0..self.n_features() {
            let mut col = x.column_mut(j);
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let sd = var.sqrt();
            if sd <= 1e-12 * (1.0 + mean.abs()) {
                return Err(Error::ConstantColumn(self.feature_names[j].clone()));
            }
            for v in col.iter_mut() {
                *v = (*v - mean) / sd;
            }
            stats.push(ColumnStats { mean, sd });
        }
        Ok(Dataset {
            x,
            y: self.y.clone(),
            feature_names: self.feature_names.clone(),
            standardization: Standardization::Standardized(stats),
        })
    }

    /// Inverse of [`standardize`](Self::standardize): maps columns back to
    /// the original scale.
    pub fn destandardize(&self) -> Result<Dataset> {
        let stats = match &self.standardization {
            Standardization::Raw => {
                return Err(Error::InvalidInput("dataset is already raw".into()))
            }
            Standardization::Standardized(stats) => stats,
        };
        let mut x = self.x.clone();
        for (j, s) in stats.iter().enumerate() {
            for v in x.column_mut(j).iter_mut() {
                *v = *v * s.sd + s.mean;
            }
        }
        Ok(Dataset {
            x,
            y: self.y.clone(),
            feature_names: self.feature_names.clone(),
            standardization: Standardization::Raw,
        })
    }

    /// Row subset of a raw dataset, preserving the given order.
    pub fn subset(&self, rows: &[usize]) -> Result<Dataset> {
        if self.is_standardized() {
            return Err(Error::InvalidInput(
                "subset must be taken on raw data so per-subset statistics stay honest".into(),
            ));
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let p = self.n_features();
        let mut x = DMatrix::zeros(rows.len(), p);
        let mut y = DVector::zeros(rows.len());
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..p {
                x[(i, j)] = self.x[(r, j)];
            }
            y[i] = self.y[r];
        }
        Ok(Dataset {
            x,
            y,
            feature_names: self.feature_names.clone(),
            standardization: Standardization::Raw,
        })
    }
}

/// Response column selector for [`to_dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetColumn {
    TwoYearRecid,
}

/// Encodes records into a raw [`Dataset`] with the fixed column order of
/// [`FEATURE_NAMES`], preserving row order.
pub fn to_dataset(records: &[DefendantRecord], target: TargetColumn) -> Result<Dataset> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = records.len();
    let mut x = DMatrix::zeros(n, FEATURE_NAMES.len());
    let mut y = DVector::zeros(n);
    for (i, r) in records.iter().enumerate() {
        x[(i, 0)] = r.race as f64;
        x[(i, 1)] = r.sex as f64;
        x[(i, 2)] = r.age as f64;
        x[(i, 3)] = r.juv_fel_count as f64;
        x[(i, 4)] = r.juv_misd_count as f64;
        x[(i, 5)] = r.juv_other_count as f64;
        x[(i, 6)] = r.priors_count as f64;
        x[(i, 7)] = r.charge_degree as f64;
        y[i] = match target {
            TargetColumn::TwoYearRecid => r.two_year_recid as f64,
        };
    }
    Dataset::new(x, y, FEATURE_NAMES.iter().map(|s| s.to_string()).collect())
}

/// A deterministic train/test partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub train_fraction: f64,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

/// Splits `0..n` into train/test by a seeded uniform permutation; the first
/// `round(train_fraction * n)` permuted indices are the training side. Both
/// sides are returned in ascending order.
pub fn split(n: usize, seed: u64, train_fraction: f64) -> Result<SplitPlan> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need n >= 2 rows to split, got {n}"
        )));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidInput(format!(
            "train_fraction must be in (0, 1), got {train_fraction}"
        )));
    }
    let n_train = (train_fraction * n as f64).round() as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::DegenerateSplit { n, train_fraction });
    }
    let perm = permutation(n, seed);
    let mut train_indices = perm[..n_train].to_vec();
    let mut test_indices = perm[n_train..].to_vec();
    train_indices.sort_unstable();
    test_indices.sort_unstable();
    Ok(SplitPlan {
        seed,
        train_fraction,
        train_indices,
        test_indices,
    })
}

/// Assigns each of `n` rows to one of `k` folds; fold sizes differ by at
/// most one and the assignment is a pure function of `(n, k, seed)`.
pub fn assign_folds(n: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let perm = permutation(n, seed);
    let mut labels = vec![0usize; n];
    for (pos, &row) in perm.iter().enumerate() {
        labels[row] = pos % k;
    }
    Ok(labels)
}

/// Derives the fold-assignment seed used alongside a split seed: the first
/// output of a `SplitMix64` seeded with it.
pub fn fold_seed_for(split_seed: u64) -> u64 {
    SplitMix64::new(split_seed).next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::io::Write;

    fn sample_record() -> DefendantRecord {
        DefendantRecord {
            race: 2,
            sex: 0,
            age: 34,
            juv_fel_count: 0,
            juv_misd_count: 1,
            juv_other_count: 0,
            priors_count: 3,
            charge_degree: 1,
            two_year_recid: 1,
            compas_prediction: 1,
        }
    }

    fn write_csv(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    const HEADER: &str =
        "sex,age,race,juv_fel_count,juv_misd_count,juv_other_count,priors_count,c_charge_degree,two_year_recid,score_text";

    #[test]
    fn load_translates_propublica_vocabulary() {
        let f = write_csv(&format!(
            "{HEADER}\nMale,69,Other,0,0,0,0,F,0,Low\nFemale,25,Caucasian,1,2,3,4,M,1,High\n"
        ));
        let report = load_csv(f.path(), &ColumnMap::default()).unwrap();
        assert_eq!(report.retained, 2);
        assert_eq!(report.dropped, 0);
        let r = &report.records[1];
        assert_eq!(
            (r.race, r.sex, r.age, r.charge_degree, r.compas_prediction),
            (1, 1, 25, 0, 1)
        );
    }

    #[test]
    fn load_drops_bad_rows_and_counts_them() {
        let f = write_csv(&format!(
            "{HEADER}\nMale,69,Other,0,0,0,0,F,0,Low\nMale,,Other,0,0,0,0,F,0,Low\nMale,30,Other,0,0,0,0,F,1,High\n"
        ));
        let report = load_csv(f.path(), &ColumnMap::default()).unwrap();
        assert_eq!(report.retained, 2);
        assert_eq!(report.dropped, 1);
    }

    #[test]
    fn load_empty_file_is_not_a_quality_error() {
        let f = write_csv(&format!("{HEADER}\n"));
        let report = load_csv(f.path(), &ColumnMap::default()).unwrap();
        assert_eq!(report.retained, 0);
        assert_eq!(report.dropped, 0);
    }

    #[test]
    fn load_majority_dropped_is_a_quality_error() {
        let f = write_csv(&format!(
            "{HEADER}\nMale,69,Other,0,0,0,0,F,0,Low\nMale,,Other,0,0,0,0,F,0,Low\nMale,,Other,0,0,0,0,F,1,High\n"
        ));
        match load_csv(f.path(), &ColumnMap::default()) {
            Err(Error::DataQuality {
                dropped: 2,
                total: 3,
            }) => {}
            other => panic!("expected DataQuality, got {other:?}"),
        }
    }

    #[test]
    fn load_missing_header_column() {
        let f = write_csv("sex,age\nMale,30\n");
        match load_csv(f.path(), &ColumnMap::default()) {
            Err(Error::HeaderMissing(col)) => assert_eq!(col, "race"),
            other => panic!("expected HeaderMissing, got {other:?}"),
        }
    }

    #[test]
    fn load_missing_file() {
        let err = load_csv(Path::new("/nonexistent/file.csv"), &ColumnMap::default());
        assert!(matches!(err, Err(Error::FileNotFound(_))));
    }

    #[test]
    fn to_dataset_encodes_single_record_exactly() {
        let mut rec = sample_record();
        rec.juv_fel_count = 0;
        rec.juv_misd_count = 0;
        rec.juv_other_count = 0;
        rec.priors_count = 0;
        let d = to_dataset(&[rec], TargetColumn::TwoYearRecid).unwrap();
        let row: Vec<f64> = (0..8).map(|j| d.x()[(0, j)]).collect();
        assert_eq!(row, vec![2.0, 0.0, 34.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(d.y()[0], 1.0);
    }

    #[test]
    fn to_dataset_column_means_match_hand_computation() {
        // Five records chosen so every column mean is an exact decimal.
        let base = sample_record();
        let recs: Vec<DefendantRecord> = [
            (1u8, 0u8, 20u32, 0u32, 0u32, 0u32, 0u32, 0u8, 0u8),
            (2, 1, 30, 1, 2, 1, 5, 1, 1),
            (3, 0, 40, 0, 0, 0, 10, 0, 0),
            (4, 1, 50, 2, 1, 2, 3, 1, 1),
            (5, 0, 60, 2, 2, 2, 2, 0, 0),
        ]
        .iter()
        .map(
            |&(race, sex, age, jf, jm, jo, pr, cd, recid)| DefendantRecord {
                race,
                sex,
                age,
                juv_fel_count: jf,
                juv_misd_count: jm,
                juv_other_count: jo,
                priors_count: pr,
                charge_degree: cd,
                two_year_recid: recid,
                ..base.clone()
            },
        )
        .collect();
        let d = to_dataset(&recs, TargetColumn::TwoYearRecid).unwrap();
        // Hand-computed: sums are 15, 2, 200, 5, 5, 5, 20, 2 over 5 rows.
        let expected = [3.0, 0.4, 40.0, 1.0, 1.0, 1.0, 4.0, 0.4];
        for (j, &want) in expected.iter().enumerate() {
            let mean = d.x().column(j).iter().sum::<f64>() / 5.0;
            assert_abs_diff_eq!(mean, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn to_dataset_preserves_row_order() {
        let mut a = sample_record();
        a.age = 21;
        let mut b = sample_record();
        b.age = 63;
        let d = to_dataset(&[a, b], TargetColumn::TwoYearRecid).unwrap();
        assert_eq!(d.x()[(0, 2)], 21.0);
        assert_eq!(d.x()[(1, 2)], 63.0);
    }

    #[test]
    fn to_dataset_empty_errors() {
        assert!(matches!(
            to_dataset(&[], TargetColumn::TwoYearRecid),
            Err(Error::EmptyInput)
        ));
    }

    fn small_dataset() -> Dataset {
        // 4 rows, 2 columns; hand-checkable statistics.
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 10.0, 2.0, 20.0, 3.0, 30.0, 4.0, 40.0]);
        let y = DVector::from_vec(vec![0.0, 1.0, 0.0, 1.0]);
        Dataset::new(x, y, vec!["a".into(), "b".into()]).unwrap()
    }

    #[test]
    fn standardize_hits_mean_zero_sd_one() {
        let s = small_dataset().standardize().unwrap();
        let n = 4.0;
        for j in 0..2 {
            let mean = s.x().column(j).iter().sum::<f64>() / n;
            let sd = (s
                .x()
                .column(j)
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .sum::<f64>()
                / n)
                .sqrt();
            assert!(mean.abs() < 1e-10);
            assert!((sd - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn standardize_stores_hand_computed_stats() {
        let s = small_dataset().standardize().unwrap();
        let stats = s.column_stats().unwrap();
        // Column a: mean 2.5, population sd = sqrt(5/4).
        assert_abs_diff_eq!(stats[0].mean, 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(stats[0].sd, (5.0f64 / 4.0).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(stats[1].mean, 25.0, epsilon = 1e-12);
        assert_abs_diff_eq!(stats[1].sd, (500.0f64 / 4.0).sqrt(), epsilon = 1e-12);
        // y untouched
        assert_eq!(s.y(), small_dataset().y());
    }

    #[test]
    fn standardize_is_identity_on_already_scaled_column() {
        let x = DMatrix::from_row_slice(4, 1, &[1.0, -1.0, 1.0, -1.0]);
        let y = DVector::zeros(4);
        let d = Dataset::new(x.clone(), y, vec!["a".into()]).unwrap();
        let s = d.standardize().unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(s.x()[(i, 0)], x[(i, 0)], epsilon = 1e-12);
        }
    }

    #[test]
    fn standardize_rejects_constant_column() {
        let x = DMatrix::from_row_slice(3, 1, &[5.0, 5.0, 5.0]);
        let y = DVector::zeros(3);
        let d = Dataset::new(x, y, vec!["c".into()]).unwrap();
        match d.standardize() {
            Err(Error::ConstantColumn(name)) => assert_eq!(name, "c"),
            other => panic!("expected ConstantColumn, got {other:?}"),
        }
    }

    #[test]
    fn destandardize_round_trips() {
        let d = small_dataset();
        let back = d.standardize().unwrap().destandardize().unwrap();
        for i in 0..4 {
            for j in 0..2 {
                assert_abs_diff_eq!(back.x()[(i, j)], d.x()[(i, j)], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn split_frozen_vector() {
        // Pins the permutation contract; matches the documented generator.
        let plan = split(10, 1, 0.8).unwrap();
        assert_eq!(plan.train_indices, vec![0, 1, 2, 3, 4, 7, 8, 9]);
        assert_eq!(plan.test_indices, vec![5, 6]);
    }

    #[test]
    fn split_is_a_partition_and_deterministic() {
        let a = split(10, 1, 0.8).unwrap();
        let b = split(10, 1, 0.8).unwrap();
        assert_eq!(a, b);
        let mut all: Vec<usize> = a
            .train_indices
            .iter()
            .chain(a.test_indices.iter())
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(a.train_indices.len(), 8);
    }

    #[test]
    fn split_broward_sized_test_side() {
        let plan = split(7214, 123, 0.8).unwrap();
        assert_eq!(plan.test_indices.len(), 1443);
    }

    #[test]
    fn split_degenerate_errors() {
        assert!(matches!(
            split(2, 0, 0.8),
            Err(Error::DegenerateSplit { .. })
        ));
        assert!(matches!(
            split(5, 0, 0.05),
            Err(Error::DegenerateSplit { .. })
        ));
    }

    #[test]
    fn folds_frozen_vector() {
        assert_eq!(
            assign_folds(10, 10, 7).unwrap(),
            vec![8, 4, 5, 9, 6, 1, 3, 7, 2, 0]
        );
    }

    #[test]
    fn fold_sizes_differ_by_at_most_one() {
        let labels = assign_folds(7214, 10, 3).unwrap();
        let mut counts = [0usize; 10];
        for &l in &labels {
            counts[l] += 1;
        }
        assert_eq!(counts.iter().filter(|&&c| c == 722).count(), 4);
        assert_eq!(counts.iter().filter(|&&c| c == 721).count(), 6);
    }

    #[test]
    fn folds_deterministic_and_k_validated() {
        assert_eq!(
            assign_folds(100, 7, 9).unwrap(),
            assign_folds(100, 7, 9).unwrap()
        );
        assert!(matches!(
            assign_folds(10, 1, 0),
            Err(Error::InvalidK { .. })
        ));
        assert!(matches!(
            assign_folds(10, 11, 0),
            Err(Error::InvalidK { .. })
        ));
    }
}
