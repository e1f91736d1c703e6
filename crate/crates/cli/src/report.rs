//! JSON report schemas. Field order is declaration order and every value is
//! derived from inputs and flags, so identical runs serialize byte-identically
//! (stage timings are only included on request).

use std::collections::BTreeMap;

use gloshkit_core::eval::MetricsReport;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct PipelineReport {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub selection: SelectionReport,
    pub polar: PolarReport,
    pub metrics: Option<MetricsSection>,
    pub per_point: Vec<PerPointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
    pub warnings: Vec<String>,
}

/// Everything needed to reproduce the run byte for byte.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub input: String,
    pub label_column: Option<String>,
    pub ignore_columns: Vec<String>,
    pub has_header: bool,
    pub m_max_requested: usize,
    pub m_max_effective: usize,
    pub metric: &'static str,
    pub lambda_mode: &'static str,
    pub scale: bool,
    pub naive: bool,
    pub seed: u64,
    pub threads: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct SelectionReport {
    pub m_star: usize,
    pub elbow_index: usize,
    pub peak_index: usize,
    pub degenerate: bool,
}

#[derive(Debug, Serialize)]
pub struct PolarReport {
    pub knee_index: usize,
    pub knee_score: f64,
    pub beta0: Option<f64>,
    pub beta1: Option<f64>,
    pub r_extrapolated: Option<f64>,
    pub adjusted_threshold: f64,
    pub degenerate: bool,
    pub outliers_knee: usize,
    pub outliers_adjusted: usize,
}

#[derive(Debug, Serialize)]
pub struct MetricsSection {
    pub precision_at_n: f64,
    pub n_used: usize,
    pub knee: MetricsReport,
    pub adjusted: MetricsReport,
}

#[derive(Debug, Serialize)]
pub struct PerPointReport {
    pub id: usize,
    pub score: f64,
    pub label_knee: bool,
    pub label_adjusted: bool,
}

#[derive(Debug, Serialize)]
pub struct GenerateReport {
    pub schema_version: u32,
    pub input: String,
    pub kind: &'static str,
    pub count_requested: usize,
    pub count_generated: usize,
    pub counts_by_kind: BTreeMap<&'static str, usize>,
    pub alpha: f64,
    pub seed: u64,
    pub gmm_max_k: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct EvaluateReport {
    pub schema_version: u32,
    pub n: usize,
    pub outlier_count: usize,
    pub precision_at_n: f64,
    pub knee: MetricsReport,
    pub adjusted: MetricsReport,
}
