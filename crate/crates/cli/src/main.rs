//! `gloshkit`: GLOSH outlier scores over a whole `min_pts` range, automatic
//! `min_pts` selection at the rank-dissimilarity elbow, and automatic score
//! thresholding, plus a synthetic-outlier generator and an evaluation command.
//!
//! Exit codes: 0 success, 1 internal failure, 2 usage or input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gloshkit_core::glosh::LambdaMode;
use gloshkit_core::neighbors::Metric;
use gloshkit_core::synthgen::OutlierKind;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or unusable configuration; exit code 2.
    Input(anyhow::Error),
    /// Unexpected failure (e.g. cannot write outputs); exit code 1.
    Internal(anyhow::Error),
}

impl CliError {
    fn input(e: gloshkit_core::Error) -> Self {
        CliError::Input(e.into())
    }

    fn input_msg(message: String) -> Self {
        CliError::Input(anyhow::anyhow!(message))
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "gloshkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full detection pipeline on a CSV of points.
    Pipeline(PipelineArgs),
    /// Inject synthetic outliers into an inlier dataset.
    Generate(GenerateArgs),
    /// Score pipeline labels against ground truth.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Manhattan,
}

impl From<MetricArg> for Metric {
    fn from(value: MetricArg) -> Self {
        match value {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Manhattan => Metric::Manhattan,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LambdaModeArg {
    CoreDistance,
    DepartureLevel,
}

impl From<LambdaModeArg> for LambdaMode {
    fn from(value: LambdaModeArg) -> Self {
        match value {
            LambdaModeArg::CoreDistance => LambdaMode::CoreDistance,
            LambdaModeArg::DepartureLevel => LambdaMode::DepartureLevel,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Local,
    Clump,
    Global,
    Mixed,
}

impl From<KindArg> for OutlierKind {
    fn from(value: KindArg) -> Self {
        match value {
            KindArg::Local => OutlierKind::Local,
            KindArg::Clump => OutlierKind::Clump,
            KindArg::Global => OutlierKind::Global,
            KindArg::Mixed => OutlierKind::Mixed,
        }
    }
}

#[derive(Debug, clap::Args)]
struct PipelineArgs {
    /// Input CSV of points, one row per point.
    input: PathBuf,
    /// Label column (header name or zero-based index); 1 marks outliers.
    #[arg(long)]
    label_column: Option<String>,
    /// The input file starts with a header row.
    #[arg(long)]
    has_header: bool,
    /// Columns to drop before parsing (e.g. the generator's kind tag).
    #[arg(long, value_delimiter = ',')]
    ignore_columns: Vec<String>,
    /// Upper bound of the min_pts range; clamped to the dataset size.
    #[arg(long, default_value_t = 100)]
    mmax: usize,
    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    metric: MetricArg,
    #[arg(long, value_enum, default_value_t = LambdaModeArg::CoreDistance)]
    lambda_mode: LambdaModeArg,
    /// Min-max scale every feature to [0, 1] before computing distances.
    #[arg(long)]
    scale: bool,
    /// Build every MST from the complete graph instead of the CORE-SG.
    #[arg(long)]
    naive: bool,
    /// Echoed into the report so runs are reproducible from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Directory for report.json, labels.csv and optional dumps.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Also write profile.csv and ord.csv.
    #[arg(long)]
    emit_profiles: bool,
    /// Also write mst.csv (the MST at the selected min_pts).
    #[arg(long)]
    emit_mst: bool,
    /// Include stage timings in report.json (breaks byte-for-byte
    /// reproducibility of the report).
    #[arg(long)]
    emit_timings: bool,
}

#[derive(Debug, clap::Args)]
struct GenerateArgs {
    /// Inlier dataset CSV.
    inliers: PathBuf,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Outliers to generate; defaults to 5% of the inlier count.
    #[arg(long)]
    count: Option<usize>,
    /// Scale factor for covariances (local), means (clumps), or the
    /// bounding box (global).
    #[arg(long, default_value_t = 5.0, value_parser = positive_f64)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest component count tried when fitting the GMM.
    #[arg(long, default_value_t = 5)]
    gmm_max_k: usize,
    /// Candidate-draw budget for global generation (default 50x count).
    #[arg(long)]
    max_attempts: Option<usize>,
    #[arg(long)]
    has_header: bool,
    /// Label column to strip from the inlier file, if any.
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long, value_delimiter = ',')]
    ignore_columns: Vec<String>,
    /// Combined output CSV: inliers plus generated outliers, with `label`
    /// and `kind` columns. A JSON report lands next to it.
    #[arg(long, default_value = "outliers.csv")]
    output: PathBuf,
}

#[derive(Debug, clap::Args)]
struct EvaluateArgs {
    /// labels.csv as written by the pipeline command.
    labels: PathBuf,
    /// Ground-truth CSV with a binary label column.
    truth: PathBuf,
    #[arg(long, default_value = "label")]
    truth_label_column: String,
    #[arg(long)]
    truth_has_header: bool,
    /// Columns of the truth file to drop before parsing.
    #[arg(long, value_delimiter = ',')]
    ignore_columns: Vec<String>,
    #[arg(long, default_value = "metrics.json")]
    output: PathBuf,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let value: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err("must be a positive finite number".to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pipeline(args) => commands::cmd_pipeline(args),
        Command::Generate(args) => commands::cmd_generate(args),
        Command::Evaluate(args) => commands::cmd_evaluate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
