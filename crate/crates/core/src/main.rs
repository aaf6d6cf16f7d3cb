//! Command-line front end: runs the configured benchmark and writes the
//! report files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use penrec::harness::{run_with_data, BenchmarkData, ExperimentConfig, ModelKind};
use penrec::model_selection::LambdaRule;
use penrec::report::emit_report;
use penrec::{Error, Result};

#[derive(Parser)]
#[command(
    name = "penrec",
    version,
    about = "Penalized-regression recidivism benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the benchmark described by a config file (plus overrides).
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML config file; omitted fields fall back to defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Input CSV path (overrides the config).
    #[arg(long)]
    data: Option<PathBuf>,

    /// Comma-separated subset of lasso,ridge,elastic_net,logistic,compas.
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,

    /// Number of protocol iterations.
    #[arg(long)]
    iterations: Option<usize>,

    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Pinned elastic-net alpha.
    #[arg(long)]
    alpha: Option<f64>,

    /// Cross-validation fold count.
    #[arg(long)]
    folds: Option<usize>,

    /// Lambda selection rule: one_se or min.
    #[arg(long)]
    lambda_rule: Option<String>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(data) = &args.data {
        cfg.data_path = data.clone();
    }
    if let Some(models) = &args.models {
        cfg.models = models
            .iter()
            .map(|m| m.parse::<ModelKind>())
            .collect::<Result<Vec<_>>>()?;
    }
    if let Some(iterations) = args.iterations {
        cfg.iterations = iterations;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(alpha) = args.alpha {
        cfg.pinned_alpha = alpha;
    }
    if let Some(folds) = args.folds {
        cfg.k_folds = folds;
    }
    if let Some(rule) = &args.lambda_rule {
        cfg.lambda_rule = match rule.trim().to_ascii_lowercase().as_str() {
            "one_se" | "1se" => LambdaRule::OneSe,
            "min" => LambdaRule::Min,
            other => return Err(Error::Config(format!("unknown lambda rule '{other}'"))),
        };
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_command(args: &RunArgs) -> Result<()> {
    let cfg = load_config(args)?;
    eprintln!("loading {}", cfg.data_path.display());
    let data = BenchmarkData::load(&cfg)?;
    eprintln!(
        "loaded {} records ({} dropped); running {} iterations over {:?}",
        data.dataset.n_rows(),
        data.dropped_rows,
        cfg.iterations,
        cfg.models.iter().map(|m| m.label()).collect::<Vec<_>>()
    );
    let report = run_with_data(&cfg, &data)?;

    println!(
        "COMPAS baseline (full data): {:.4}",
        report.compas_full_accuracy
    );
    for s in &report.protocol.stats {
        println!(
            "{:<12} mean accuracy {:.4} (sd {:.4}) over {} iterations",
            s.model.label(),
            s.mean_accuracy,
            s.sd_accuracy,
            report.protocol.iterations
        );
    }
    for rep in &report.representatives {
        let dropped = rep.dropped_features(&report.feature_names);
        println!(
            "{:<12} representative: lambda {:.4}, auc {:.4}, dropped [{}]",
            rep.model.label(),
            rep.lambda,
            rep.roc.auc,
            dropped.join(", ")
        );
        print!("{}", rep.confusion.render_percent());
    }
    println!(
        "alpha sweep best alpha: {} (cv mse {:.6})",
        report.alpha_search.best_alpha,
        report
            .alpha_search
            .cv_mse_at_selected_lambda
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    );

    let files = emit_report(&report, &cfg.output_dir)?;
    println!(
        "wrote {} files to {}",
        files.len(),
        cfg.output_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run_command(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
