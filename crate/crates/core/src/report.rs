//! Writes a [`RunReport`] to disk: CSV tables, figure data with rendered
//! SVGs, and a consolidated JSON report. Every file starts with a
//! provenance stamp (config hash + master seed) and is written atomically
//! (write to a temp sibling, then rename).

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::harness::{RepresentativeFit, RunReport};
use crate::svg::{LinePlot, Series};

fn provenance_line(report: &RunReport) -> String {
    format!(
        "# config_hash={} master_seed={}",
        report.provenance.config_hash, report.provenance.master_seed
    )
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{ext}.tmp"),
        None => "tmp".to_string(),
    });
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// CSV body builder with CRLF line endings (RFC 4180) under a `#` provenance
/// header line.
struct CsvDoc {
    buf: String,
}

impl CsvDoc {
    fn new(report: &RunReport, header: &[&str]) -> Self {
        let mut buf = provenance_line(report);
        buf.push_str("\r\n");
        buf.push_str(&header.join(","));
        buf.push_str("\r\n");
        CsvDoc { buf }
    }

    fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push_str("\r\n");
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn table1(report: &RunReport) -> String {
    let mut doc = CsvDoc::new(report, &["model", "mean_accuracy", "sd_accuracy"]);
    for s in &report.protocol.stats {
        doc.row(&[
            s.model.label().to_string(),
            num(s.mean_accuracy),
            num(s.sd_accuracy),
        ]);
    }
    doc.row(&[
        "compas_full_baseline".to_string(),
        num(report.compas_full_accuracy),
        String::new(),
    ]);
    doc.buf
}

fn table5(report: &RunReport) -> String {
    let mut doc = CsvDoc::new(report, &["model", "term", "value"]);
    for rep in &report.representatives {
        let label = rep.model.label().to_string();
        doc.row(&[label.clone(), "alpha".into(), num(rep.alpha)]);
        doc.row(&[label.clone(), "lambda".into(), num(rep.lambda)]);
        doc.row(&[label.clone(), "intercept".into(), num(rep.fit.intercept)]);
        for (name, coef) in report.feature_names.iter().zip(&rep.fit.coefficients) {
            doc.row(&[label.clone(), format!("coef:{name}"), num(*coef)]);
        }
        doc.row(&[
            label.clone(),
            "test_accuracy".into(),
            num(rep.test_accuracy),
        ]);
        doc.row(&[label.clone(), "auc".into(), num(rep.roc.auc)]);
    }
    doc.buf
}

fn table6(report: &RunReport) -> String {
    let mut doc = CsvDoc::new(report, &["alpha", "cv_mse_at_selected_lambda"]);
    for (a, mse) in report
        .alpha_search
        .alphas
        .iter()
        .zip(&report.alpha_search.cv_mse_at_selected_lambda)
    {
        doc.row(&[num(*a), num(*mse)]);
    }
    doc.row(&["best_alpha".into(), num(report.alpha_search.best_alpha)]);
    doc.buf
}

fn fig1_csv(report: &RunReport, rep: &RepresentativeFit) -> String {
    let mut doc = CsvDoc::new(report, &["feature", "log_lambda", "coefficient"]);
    for (j, name) in report.feature_names.iter().enumerate() {
        for (lambda, f) in rep.path.lambdas.iter().zip(&rep.path.fits) {
            doc.row(&[name.clone(), num(lambda.ln()), num(f.coefficients[j])]);
        }
    }
    doc.buf
}

fn fig1_svg(report: &RunReport, rep: &RepresentativeFit) -> String {
    let series = report
        .feature_names
        .iter()
        .enumerate()
        .map(|(j, name)| Series {
            label: name.clone(),
            points: rep
                .path
                .lambdas
                .iter()
                .zip(&rep.path.fits)
                .map(|(l, f)| (l.ln(), f.coefficients[j]))
                .collect(),
        })
        .collect();
    LinePlot {
        title: format!("Coefficient paths: {}", rep.model.label()),
        x_label: "log(lambda)".into(),
        y_label: "coefficient".into(),
        series,
        v_lines: vec![(
            rep.lambda.ln(),
            format!("selected lambda = {:.4}", rep.lambda),
        )],
        comment: provenance_line(report).trim_start_matches("# ").to_string(),
    }
    .render()
}

fn fig2_csv(report: &RunReport) -> String {
    let mut doc = CsvDoc::new(report, &["model", "fpr", "tpr"]);
    for rep in &report.representatives {
        for &(fpr, tpr) in &rep.roc.points {
            doc.row(&[rep.model.label().to_string(), num(fpr), num(tpr)]);
        }
    }
    doc.buf
}

fn fig2_svg(report: &RunReport) -> String {
    let mut series: Vec<Series> = report
        .representatives
        .iter()
        .map(|rep| Series {
            label: format!("{} (auc {:.4})", rep.model.label(), rep.roc.auc),
            points: rep.roc.points.clone(),
        })
        .collect();
    series.push(Series {
        label: "chance".into(),
        points: vec![(0.0, 0.0), (1.0, 1.0)],
    });
    LinePlot {
        title: "ROC curves".into(),
        x_label: "false positive rate".into(),
        y_label: "true positive rate".into(),
        series,
        v_lines: vec![],
        comment: provenance_line(report).trim_start_matches("# ").to_string(),
    }
    .render()
}

fn fig3_csv(report: &RunReport, rep: &RepresentativeFit) -> String {
    let mut doc = CsvDoc::new(
        report,
        &[
            "log_lambda",
            "mean_mse",
            "se_mse",
            "is_lambda_min",
            "is_lambda_1se",
        ],
    );
    for (i, lambda) in rep.cv.lambdas.iter().enumerate() {
        doc.row(&[
            num(lambda.ln()),
            num(rep.cv.mean_mse[i]),
            num(rep.cv.se_mse[i]),
            u8::from(*lambda == rep.cv.lambda_min).to_string(),
            u8::from(*lambda == rep.cv.lambda_1se).to_string(),
        ]);
    }
    doc.buf
}

fn fig3_svg(report: &RunReport, rep: &RepresentativeFit) -> String {
    let xs: Vec<f64> = rep.cv.lambdas.iter().map(|l| l.ln()).collect();
    let mean = Series {
        label: "mean cv mse".into(),
        points: xs
            .iter()
            .copied()
            .zip(rep.cv.mean_mse.iter().copied())
            .collect(),
    };
    let upper = Series {
        label: "+1 se".into(),
        points: xs
            .iter()
            .zip(rep.cv.mean_mse.iter().zip(&rep.cv.se_mse))
            .map(|(&x, (&m, &s))| (x, m + s))
            .collect(),
    };
    let lower = Series {
        label: "-1 se".into(),
        points: xs
            .iter()
            .zip(rep.cv.mean_mse.iter().zip(&rep.cv.se_mse))
            .map(|(&x, (&m, &s))| (x, m - s))
            .collect(),
    };
    LinePlot {
        title: format!("Cross-validation curve: {}", rep.model.label()),
        x_label: "log(lambda)".into(),
        y_label: "mean squared error".into(),
        series: vec![mean, upper, lower],
        v_lines: vec![
            (
                rep.cv.lambda_min.ln(),
                format!("lambda_min = {:.4}", rep.cv.lambda_min),
            ),
            (
                rep.cv.lambda_1se.ln(),
                format!("lambda_1se = {:.4}", rep.cv.lambda_1se),
            ),
        ],
        comment: provenance_line(report).trim_start_matches("# ").to_string(),
    }
    .render()
}

/// Writes every table and figure into `output_dir`, returning the paths
/// written. Reruns replace previous outputs atomically.
pub fn emit_report(report: &RunReport, output_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(output_dir)?;
    let mut written = Vec::new();
    let mut emit = |name: String, contents: String| -> Result<()> {
        let path = output_dir.join(name);
        write_atomic(&path, &contents)?;
        written.push(path);
        Ok(())
    };

    emit("table1_accuracy.csv".into(), table1(report))?;
    if !report.representatives.is_empty() {
        emit("table5_coefficients.csv".into(), table5(report))?;
    }
    emit("table6_alpha_mse.csv".into(), table6(report))?;
    for rep in &report.representatives {
        emit(
            format!("fig1_{}_paths.csv", rep.model.label()),
            fig1_csv(report, rep),
        )?;
        emit(
            format!("fig1_{}_paths.svg", rep.model.label()),
            fig1_svg(report, rep),
        )?;
        emit(
            format!("fig3_{}_cv.csv", rep.model.label()),
            fig3_csv(report, rep),
        )?;
        emit(
            format!("fig3_{}_cv.svg", rep.model.label()),
            fig3_svg(report, rep),
        )?;
    }
    if !report.representatives.is_empty() {
        emit("fig2_roc.csv".into(), fig2_csv(report))?;
        emit("fig2_roc.svg".into(), fig2_svg(report))?;
    }
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    emit("report.json".into(), json)?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::tests::synthetic_data;
    use crate::harness::{run_with_data, ExperimentConfig, ModelKind};

    fn tiny_report() -> RunReport {
        let data = synthetic_data(250, 12);
        let cfg = ExperimentConfig {
            iterations: 1,
            k_folds: 3,
            n_lambdas: 12,
            lambda_ratio: 1e-2,
            alpha_grid: vec![0.0, 1.0],
            models: vec![ModelKind::Lasso, ModelKind::Compas],
            ..ExperimentConfig::default()
        };
        run_with_data(&cfg, &data).unwrap()
    }

    #[test]
    fn emits_the_contracted_file_set() {
        let report = tiny_report();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_report(&report, dir.path()).unwrap();
        let names: Vec<String> = files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        for expected in [
            "table1_accuracy.csv",
            "table5_coefficients.csv",
            "table6_alpha_mse.csv",
            "fig1_lasso_paths.csv",
            "fig1_lasso_paths.svg",
            "fig3_lasso_cv.csv",
            "fig3_lasso_cv.svg",
            "fig2_roc.csv",
            "fig2_roc.svg",
            "report.json",
        ] {
            assert!(names.contains(&expected.to_string()), "missing {expected}");
        }
        // no stray temp files
        for entry in fs::read_dir(dir.path()).unwrap() {
            let name = entry.unwrap().file_name();
            assert!(!name.to_string_lossy().ends_with(".tmp"));
        }
    }

    #[test]
    fn every_file_carries_the_provenance_stamp() {
        let report = tiny_report();
        let dir = tempfile::tempdir().unwrap();
        for path in emit_report(&report, dir.path()).unwrap() {
            let contents = fs::read_to_string(&path).unwrap();
            assert!(
                contents.contains(&report.provenance.config_hash),
                "{} lacks config hash",
                path.display()
            );
        }
    }

    #[test]
    fn rerun_replaces_outputs() {
        let report = tiny_report();
        let dir = tempfile::tempdir().unwrap();
        emit_report(&report, dir.path()).unwrap();
        let marker = dir.path().join("table1_accuracy.csv");
        fs::write(&marker, "garbage").unwrap();
        emit_report(&report, dir.path()).unwrap();
        let contents = fs::read_to_string(&marker).unwrap();
        assert!(contents.starts_with("# config_hash="));
    }

    #[test]
    fn emission_is_byte_deterministic() {
        let report = tiny_report();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let files_a = emit_report(&report, dir_a.path()).unwrap();
        let files_b = emit_report(&report, dir_b.path()).unwrap();
        for (a, b) in files_a.iter().zip(&files_b) {
            assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
        }
    }
}
