//! End-to-end composition: distances, core distances, per-`min_pts` MSTs,
//! GLOSH profiles, `min_pts` selection, and POLAR labeling.

use std::time::{Duration, Instant};

use crate::autoglosh::{self, MinPtsSelection, OrdProfile};
use crate::dataset::{min_max_scale, Dataset};
use crate::error::Result;
use crate::glosh::{self, GloshProfileMatrix, LambdaMode};
use crate::mstgraph::{self, MstEdges};
use crate::neighbors::{self, Metric};
use crate::polar::{self, PolarResult};

/// Settings for one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Upper bound of the `min_pts` range; clamped to n with a warning.
    pub m_max: usize,
    pub metric: Metric,
    pub lambda_mode: LambdaMode,
    /// Min-max scale features before computing distances.
    pub scale: bool,
    /// Build every MST from the complete graph instead of the CORE-SG.
    pub naive: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            m_max: 100,
            metric: Metric::Euclidean,
            lambda_mode: LambdaMode::CoreDistance,
            scale: false,
            naive: false,
        }
    }
}

/// Wall-clock duration of each pipeline stage.
#[derive(Debug, Clone)]
pub struct StageTimings {
    pub stages: Vec<(&'static str, Duration)>,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub m_max_effective: usize,
    pub m_max_clamped: bool,
    pub profiles: GloshProfileMatrix,
    pub ord: OrdProfile,
    pub selection: MinPtsSelection,
    /// Per-point GLOSH scores at the selected `min_pts`, in point order.
    pub scores_at_m_star: Vec<f64>,
    pub mst_at_m_star: MstEdges,
    pub polar: PolarResult,
    pub timings: StageTimings,
    pub warnings: Vec<String>,
}

/// Runs the full pipeline on an in-memory dataset.
pub fn run(data: &Dataset, config: &PipelineConfig) -> Result<PipelineOutcome> {
    let mut warnings = Vec::new();
    let mut stages: Vec<(&'static str, Duration)> = Vec::new();

    let scaled;
    let data = if config.scale {
        let start = Instant::now();
        scaled = min_max_scale(data);
        stages.push(("scale", start.elapsed()));
        &scaled
    } else {
        data
    };

    let m_max_clamped = config.m_max > data.n();
    let m_max = config.m_max.min(data.n());
    if m_max_clamped {
        warnings.push(format!(
            "m_max {} exceeds the dataset size; clamped to {}",
            config.m_max,
            data.n()
        ));
    }
    if m_max < 4 {
        return Err(crate::error::Error::MmaxTooSmall { m_max });
    }

    let start = Instant::now();
    let dist = neighbors::pairwise_distances(data, config.metric);
    stages.push(("distances", start.elapsed()));

    let start = Instant::now();
    let core = neighbors::core_distance_table(&dist, m_max)?;
    stages.push(("core_distances", start.elapsed()));

    let start = Instant::now();
    let (profiles, mst_source) = if config.naive {
        let profiles = glosh::glosh_profile_matrix_naive(&dist, &core, config.lambda_mode)?;
        (profiles, None)
    } else {
        let sg = mstgraph::build_core_sg(&dist, &core, m_max)?;
        let profiles = glosh::glosh_profile_matrix(&sg, &core, config.lambda_mode)?;
        (profiles, Some(sg))
    };
    stages.push(("glosh_profiles", start.elapsed()));

    let start = Instant::now();
    let ord = autoglosh::ord_profile(&profiles)?;
    let selection = autoglosh::find_elbow(&ord)?;
    stages.push(("min_pts_selection", start.elapsed()));

    let start = Instant::now();
    let scores_at_m_star = profiles.column(selection.m_star);
    let mst_at_m_star = match &mst_source {
        Some(sg) => mstgraph::mst_from_core_sg(sg, &core, selection.m_star)?,
        None => mstgraph::mst_complete(&dist, &core, selection.m_star)?,
    };
    let polar = polar::polar_result(&scores_at_m_star, selection.m_star)?;
    stages.push(("polar", start.elapsed()));

    Ok(PipelineOutcome {
        m_max_effective: m_max,
        m_max_clamped,
        profiles,
        ord,
        selection,
        scores_at_m_star,
        mst_at_m_star,
        polar,
        timings: StageTimings { stages },
        warnings,
    })
}
