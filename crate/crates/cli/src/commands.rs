//! Implementations of the three subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use gloshkit_core::dataset::{load_csv, ColumnSelector, GroundTruth, LoadOptions};
use gloshkit_core::eval::{precision_at_n, threshold_metrics};
use gloshkit_core::pipeline::{self, PipelineConfig};
use gloshkit_core::synthgen::{self, OutlierKind, SyntheticOutlierSpec};

use crate::report::{
    ConfigEcho, EvaluateReport, GenerateReport, MetricsSection, PerPointReport, PipelineReport,
    PolarReport, SelectionReport, SCHEMA_VERSION,
};
use crate::{CliError, CliResult, EvaluateArgs, GenerateArgs, PipelineArgs};

fn load_options(
    label_column: &Option<String>,
    ignore_columns: &[String],
    has_header: bool,
) -> LoadOptions {
    LoadOptions {
        label_column: label_column.as_deref().map(ColumnSelector::parse),
        has_header,
        ignore_columns: ignore_columns
            .iter()
            .map(|s| ColumnSelector::parse(s))
            .collect(),
    }
}

fn create_output<P: AsRef<Path>>(path: P) -> CliResult<BufWriter<fs::File>> {
    let file = fs::File::create(path.as_ref())
        .with_context(|| format!("cannot create {}", path.as_ref().display()))
        .map_err(CliError::Internal)?;
    Ok(BufWriter::new(file))
}

fn write_json<T: serde::Serialize, P: AsRef<Path>>(value: &T, path: P) -> CliResult<()> {
    let mut out = create_output(path.as_ref())?;
    serde_json::to_writer_pretty(&mut out, value)
        .context("serializing report")
        .map_err(CliError::Internal)?;
    out.write_all(b"\n")
        .and_then(|_| out.flush())
        .with_context(|| format!("writing {}", path.as_ref().display()))
        .map_err(CliError::Internal)
}

pub fn cmd_pipeline(args: &PipelineArgs) -> CliResult<()> {
    let options = load_options(&args.label_column, &args.ignore_columns, args.has_header);
    let (data, truth) = load_csv(&args.input, &options).map_err(CliError::input)?;

    let config = PipelineConfig {
        m_max: args.mmax,
        metric: args.metric.into(),
        lambda_mode: args.lambda_mode.into(),
        scale: args.scale,
        naive: args.naive,
    };
    let outcome = match args.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .context("building thread pool")
                .map_err(CliError::Internal)?;
            pool.install(|| pipeline::run(&data, &config))
        }
        None => pipeline::run(&data, &config),
    }
    .map_err(CliError::input)?;

    let mut warnings = outcome.warnings.clone();
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    for (stage, duration) in &outcome.timings.stages {
        eprintln!("stage {stage}: {:.1} ms", duration.as_secs_f64() * 1e3);
    }

    let metrics = match &truth {
        Some(truth) if truth.outlier_count() == 0 => {
            let warning = "ground truth has no outliers; metrics skipped".to_string();
            eprintln!("warning: {warning}");
            warnings.push(warning);
            None
        }
        Some(truth) => {
            let p =
                precision_at_n(&outcome.scores_at_m_star, truth, None).map_err(CliError::input)?;
            let knee =
                threshold_metrics(&outcome.polar.labels_knee, truth).map_err(CliError::input)?;
            let adjusted = threshold_metrics(&outcome.polar.labels_adjusted, truth)
                .map_err(CliError::input)?;
            Some(MetricsSection {
                precision_at_n: p,
                n_used: truth.outlier_count(),
                knee,
                adjusted,
            })
        }
        None => None,
    };

    let polar = &outcome.polar;
    let report = PipelineReport {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            input: args.input.display().to_string(),
            label_column: args.label_column.clone(),
            ignore_columns: args.ignore_columns.clone(),
            has_header: args.has_header,
            m_max_requested: args.mmax,
            m_max_effective: outcome.m_max_effective,
            metric: config.metric.name(),
            lambda_mode: config.lambda_mode.name(),
            scale: args.scale,
            naive: args.naive,
            seed: args.seed,
            threads: args.threads,
        },
        selection: SelectionReport {
            m_star: outcome.selection.m_star,
            elbow_index: outcome.selection.elbow_index,
            peak_index: outcome.selection.peak_index,
            degenerate: outcome.selection.degenerate,
        },
        polar: PolarReport {
            knee_index: polar.knee_index,
            knee_score: polar.knee_score,
            beta0: polar.trend.map(|t| t.beta0),
            beta1: polar.trend.map(|t| t.beta1),
            r_extrapolated: polar.trend.map(|t| t.r_extrapolated),
            adjusted_threshold: polar.adjusted_threshold,
            degenerate: polar.degenerate,
            outliers_knee: polar.labels_knee.iter().filter(|&&l| l).count(),
            outliers_adjusted: polar.labels_adjusted.iter().filter(|&&l| l).count(),
        },
        metrics,
        per_point: outcome
            .scores_at_m_star
            .iter()
            .enumerate()
            .map(|(id, &score)| PerPointReport {
                id,
                score,
                label_knee: polar.labels_knee[id],
                label_adjusted: polar.labels_adjusted[id],
            })
            .collect(),
        timings_ms: args.emit_timings.then(|| {
            outcome
                .timings
                .stages
                .iter()
                .map(|(stage, duration)| (stage.to_string(), duration.as_secs_f64() * 1e3))
                .collect::<BTreeMap<_, _>>()
        }),
        warnings,
    };

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))
        .map_err(CliError::Internal)?;
    write_json(&report, args.out_dir.join("report.json"))?;

    let mut labels = create_output(args.out_dir.join("labels.csv"))?;
    gloshkit_core::polar::write_labels_csv(&outcome.scores_at_m_star, polar, &mut labels)
        .and_then(|_| labels.flush())
        .context("writing labels.csv")
        .map_err(CliError::Internal)?;

    if args.emit_profiles {
        let mut profile = create_output(args.out_dir.join("profile.csv"))?;
        outcome
            .profiles
            .write_csv(&mut profile)
            .and_then(|_| profile.flush())
            .context("writing profile.csv")
            .map_err(CliError::Internal)?;
        let mut ord = create_output(args.out_dir.join("ord.csv"))?;
        outcome
            .ord
            .write_csv(&mut ord)
            .and_then(|_| ord.flush())
            .context("writing ord.csv")
            .map_err(CliError::Internal)?;
    }
    if args.emit_mst {
        let mut mst = create_output(args.out_dir.join("mst.csv"))?;
        outcome
            .mst_at_m_star
            .write_csv(&mut mst)
            .and_then(|_| mst.flush())
            .context("writing mst.csv")
            .map_err(CliError::Internal)?;
    }

    println!(
        "m_star={} knee_score={} adjusted_threshold={} outliers_knee={} outliers_adjusted={}",
        outcome.selection.m_star,
        polar.knee_score,
        polar.adjusted_threshold,
        report.polar.outliers_knee,
        report.polar.outliers_adjusted,
    );
    Ok(())
}

pub fn cmd_generate(args: &GenerateArgs) -> CliResult<()> {
    let options = load_options(&args.label_column, &args.ignore_columns, args.has_header);
    let (inliers, _) = load_csv(&args.inliers, &options).map_err(CliError::input)?;
    let count = args.count.unwrap_or_else(|| (inliers.n() / 20).max(1));

    let spec = SyntheticOutlierSpec {
        kind: args.kind.into(),
        count,
        alpha: args.alpha,
        seed: args.seed,
        gmm_k_range: 1..=args.gmm_max_k,
        max_attempts: args.max_attempts,
    };
    let generated = synthgen::generate(&inliers, &spec).map_err(CliError::input)?;
    for warning in &generated.warnings {
        eprintln!("warning: {warning}");
    }

    let mut out = create_output(&args.output)?;
    generated
        .write_combined_csv(&inliers, &mut out)
        .and_then(|_| out.flush())
        .with_context(|| format!("writing {}", args.output.display()))
        .map_err(CliError::Internal)?;

    let mut counts_by_kind = BTreeMap::new();
    for kind in &generated.kinds {
        *counts_by_kind.entry(kind.name()).or_insert(0) += 1;
    }
    let report = GenerateReport {
        schema_version: SCHEMA_VERSION,
        input: args.inliers.display().to_string(),
        kind: OutlierKind::from(args.kind).name(),
        count_requested: count,
        count_generated: generated.count(),
        counts_by_kind,
        alpha: args.alpha,
        seed: args.seed,
        gmm_max_k: args.gmm_max_k,
        warnings: generated.warnings.clone(),
    };
    write_json(&report, report_path(&args.output))?;

    println!(
        "generated {} outliers ({} requested) into {}",
        generated.count(),
        count,
        args.output.display()
    );
    Ok(())
}

/// `outliers.csv` -> `outliers.report.json`, next to the output file.
fn report_path(output: &Path) -> PathBuf {
    let mut name = output.file_stem().unwrap_or_default().to_os_string();
    name.push(".report.json");
    output.with_file_name(name)
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> CliResult<()> {
    let (scores, labels_knee, labels_adjusted) = read_labels(&args.labels)?;
    let truth = read_truth(args)?;

    let report = EvaluateReport {
        schema_version: SCHEMA_VERSION,
        n: truth.len(),
        outlier_count: truth.outlier_count(),
        precision_at_n: precision_at_n(&scores, &truth, None).map_err(CliError::input)?,
        knee: threshold_metrics(&labels_knee, &truth).map_err(CliError::input)?,
        adjusted: threshold_metrics(&labels_adjusted, &truth).map_err(CliError::input)?,
    };
    write_json(&report, &args.output)?;
    println!(
        "P@n={} knee_recall={} adjusted_f={}",
        report.precision_at_n, report.knee.recall, report.adjusted.f_measure
    );
    Ok(())
}

/// Reads a pipeline `labels.csv`: `point_id,score,label_knee,label_adjusted`.
fn read_labels(path: &Path) -> CliResult<(Vec<f64>, Vec<bool>, Vec<bool>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(CliError::Input)?;
    let mut scores = Vec::new();
    let mut knee = Vec::new();
    let mut adjusted = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record
            .with_context(|| format!("reading {}", path.display()))
            .map_err(CliError::Input)?;
        if record.len() != 4 {
            return Err(CliError::input_msg(format!(
                "{}: row {} has {} columns, expected 4 (point_id,score,label_knee,label_adjusted)",
                path.display(),
                row + 1,
                record.len()
            )));
        }
        let parse_f64 = |idx: usize| -> CliResult<f64> {
            record[idx].parse().map_err(|_| {
                CliError::input_msg(format!(
                    "{}: non-numeric cell {:?} at row {}, column {}",
                    path.display(),
                    &record[idx],
                    row + 1,
                    idx + 1
                ))
            })
        };
        scores.push(parse_f64(1)?);
        knee.push(parse_f64(2)? != 0.0);
        adjusted.push(parse_f64(3)? != 0.0);
    }
    if scores.is_empty() {
        return Err(CliError::input_msg(format!(
            "{}: no prediction rows",
            path.display()
        )));
    }
    Ok((scores, knee, adjusted))
}

fn read_truth(args: &EvaluateArgs) -> CliResult<GroundTruth> {
    let options = LoadOptions {
        label_column: Some(ColumnSelector::parse(&args.truth_label_column)),
        has_header: args.truth_has_header,
        ignore_columns: args
            .ignore_columns
            .iter()
            .map(|s| ColumnSelector::parse(s))
            .collect(),
    };
    let (_, truth) = load_csv(&args.truth, &options).map_err(CliError::input)?;
    truth.ok_or_else(|| CliError::input_msg("truth file has no label column".to_string()))
}
