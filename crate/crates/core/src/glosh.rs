//! GLOSH outlier scores from a mutual-reachability MST, and score profiles over
//! the whole `min_pts` range.
//!
//! A single union-find sweep over the MST edges in ascending weight order
//! reconstructs, for every point, the hierarchy component it belongs to at its
//! reference level and that component's smallest core distance. The score
//! compares the point's density against the density of that densest member.
//!
//! In `core_distance` mode (the default) the reference is the cluster the
//! point is assigned to at the minimum level that makes it a core point.
//! Components with fewer than `min_pts` members are noise, not clusters, so
//! the reference resolves at the point's own core distance when its component
//! already holds `min_pts` points there, and otherwise at the first larger
//! level where it does. Those cluster references are local at small `min_pts`
//! and jump around as the neighborhood size changes, which is what makes
//! scores fluctuate across small `min_pts` values and settle once core
//! distances dominate the mutual-reachability weights. In `departure_level`
//! mode the reference is simply the component the point first merges into,
//! at the weight of that first MST attachment.
//!
//! Both references depend only on the threshold components of the
//! mutual-reachability graph, never on which tied MST edge realized them, so
//! scores are identical for any valid MST of the same weights.

use std::io::Write;
use std::str::FromStr;

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mstgraph::{self, CoreSg, MstEdges};
use crate::neighbors::CoreDistanceTable;

/// Which density estimate plays the role of `lambda(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMode {
    /// `lambda(x) = 1 / core(x)`: the point's own core distance (default).
    CoreDistance,
    /// `lambda(x) = 1 / attach_level(x)`: the level where x first joins a
    /// component in the hierarchy.
    DepartureLevel,
}

impl LambdaMode {
    pub fn name(&self) -> &'static str {
        match self {
            LambdaMode::CoreDistance => "core_distance",
            LambdaMode::DepartureLevel => "departure_level",
        }
    }
}

impl FromStr for LambdaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core_distance" | "core-distance" => Ok(LambdaMode::CoreDistance),
            "departure_level" | "departure-level" => Ok(LambdaMode::DepartureLevel),
            other => Err(Error::UnknownLambdaMode(other.to_string())),
        }
    }
}

/// GLOSH scores at one `min_pts`, plus the per-point hierarchy diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GloshScores {
    scores: Vec<f64>,
    min_pts: usize,
    attach_level: Vec<f64>,
    comp_min_core: Vec<f64>,
}

impl GloshScores {
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn min_pts(&self) -> usize {
        self.min_pts
    }

    /// Edge weight at which the point first joined a multi-point component.
    pub fn attach_level(&self) -> &[f64] {
        &self.attach_level
    }

    /// Smallest core distance of the point's component at its reference level
    /// (own core distance or attach level, depending on the lambda mode).
    pub fn comp_min_core(&self) -> &[f64] {
        &self.comp_min_core
    }
}

/// Scores every point from an MST computed at the same `min_pts`.
pub fn glosh_scores(
    mst: &MstEdges,
    core: &CoreDistanceTable,
    min_pts: usize,
    lambda_mode: LambdaMode,
) -> Result<GloshScores> {
    if mst.min_pts() != min_pts {
        return Err(Error::MstMinPtsMismatch {
            mst_min_pts: mst.min_pts(),
            requested: min_pts,
        });
    }
    core.check_min_pts(min_pts)?;
    let n = mst.n();
    let cores: Vec<f64> = (0..n).map(|i| core.core(i, min_pts)).collect();

    // Points are queried at their own core level, interleaved with the edge
    // sweep so a query at level t sees every edge with weight <= t. Edges with
    // equal weight are processed as one batch: cluster membership and sizes
    // are properties of the level, not of individual tied edges.
    let mut queries: Vec<usize> = (0..n).collect();
    queries.sort_unstable_by(|&a, &b| cores[a].total_cmp(&cores[b]).then(a.cmp(&b)));

    let mut uf = mstgraph::UnionFindMinCore::new(cores.clone());
    let mut pending: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut attach_level = vec![f64::NAN; n];
    let mut attach_min_core = vec![f64::NAN; n];
    let mut cluster_min_core = vec![f64::NAN; n];

    let mut next_query = 0usize;
    let answer = |q: usize,
                  uf: &mut mstgraph::UnionFindMinCore,
                  pending: &mut Vec<Vec<usize>>,
                  cluster_min_core: &mut Vec<f64>| {
        if uf.component_size(q) >= min_pts {
            cluster_min_core[q] = uf.component_min_core(q);
        } else {
            let root = uf.root(q);
            pending[root].push(q);
        }
    };

    let edges = mst.edges();
    let mut start = 0usize;
    let mut touched: Vec<usize> = Vec::new();
    while start < edges.len() {
        let weight = edges[start].weight;
        // Queries strictly below this level have seen every edge they can.
        while next_query < n && cores[queries[next_query]] < weight {
            answer(
                queries[next_query],
                &mut uf,
                &mut pending,
                &mut cluster_min_core,
            );
            next_query += 1;
        }
        let mut end = start;
        touched.clear();
        while end < edges.len() && edges[end].weight == weight {
            let e = &edges[end];
            let u_single = uf.component_size(e.u) == 1;
            let v_single = uf.component_size(e.v) == 1;
            let merged_min = uf.merged_min_core(e.u, e.v);
            if u_single {
                attach_level[e.u] = e.weight;
                attach_min_core[e.u] = merged_min;
            }
            if v_single {
                attach_level[e.v] = e.weight;
                attach_min_core[e.v] = merged_min;
            }
            let (ra, rb) = (uf.root(e.u), uf.root(e.v));
            uf.union(e.u, e.v);
            let root = uf.root(e.u);
            let mut waiting = std::mem::take(&mut pending[ra]);
            waiting.append(&mut pending[rb]);
            pending[root] = waiting;
            touched.push(root);
            end += 1;
        }
        // Noise points whose component reached min_pts members at this level
        // are assigned to the cluster the level formed.
        for &r in &touched {
            let root = uf.root(r);
            if uf.component_size(root) >= min_pts && !pending[root].is_empty() {
                let min_core = uf.component_min_core(root);
                for q in std::mem::take(&mut pending[root]) {
                    cluster_min_core[q] = min_core;
                }
            }
        }
        start = end;
    }
    while next_query < n {
        answer(
            queries[next_query],
            &mut uf,
            &mut pending,
            &mut cluster_min_core,
        );
        next_query += 1;
    }
    debug_assert!(
        pending.iter().all(|p| p.is_empty()),
        "the full tree has n >= min_pts members, every query resolves"
    );

    let (scores, comp_min_core) = match lambda_mode {
        LambdaMode::CoreDistance => {
            let scores = (0..n)
                .map(|i| score_from_ratio(cluster_min_core[i], cores[i]))
                .collect();
            (scores, cluster_min_core)
        }
        LambdaMode::DepartureLevel => {
            let scores = (0..n)
                .map(|i| score_from_ratio(attach_min_core[i], attach_level[i]))
                .collect();
            (scores, attach_min_core)
        }
    };

    Ok(GloshScores {
        scores,
        min_pts,
        attach_level,
        comp_min_core,
    })
}

/// `1 - comp_min_core / denominator` with the degenerate conventions: a zero
/// denominator (duplicate points) scores 0, a zero numerator with a positive
/// denominator scores 1.
fn score_from_ratio(comp_min_core: f64, denominator: f64) -> f64 {
    if denominator == 0.0 {
        0.0
    } else {
        1.0 - comp_min_core / denominator
    }
}

/// GLOSH scores for every point at every `min_pts` in `[2, m_max]`:
/// `profiles[(i, m - 2)]` is the score of point i at `min_pts = m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GloshProfileMatrix {
    profiles: Array2<f64>,
    m_max: usize,
}

impl GloshProfileMatrix {
    /// Wraps an n x (m_max - 1) score matrix; column `m - 2` holds the scores
    /// at `min_pts = m`.
    pub fn from_matrix(profiles: Array2<f64>, m_max: usize) -> Result<Self> {
        if m_max < 2 || profiles.ncols() != m_max - 1 {
            return Err(Error::LengthMismatch {
                left: profiles.ncols(),
                right: m_max.saturating_sub(1),
            });
        }
        Ok(Self { profiles, m_max })
    }

    pub fn n(&self) -> usize {
        self.profiles.nrows()
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.profiles
    }

    /// Scores at one `min_pts`, in point order.
    pub fn column(&self, min_pts: usize) -> Vec<f64> {
        self.profiles.column(min_pts - 2).to_vec()
    }

    /// CSV export with header `point_id,minpts_2,...,minpts_{m_max}`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "point_id")?;
        for m in 2..=self.m_max {
            write!(w, ",minpts_{m}")?;
        }
        writeln!(w)?;
        for i in 0..self.n() {
            write!(w, "{i}")?;
            for value in self.profiles.row(i) {
                write!(w, ",{value}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    fn from_columns(columns: Vec<GloshScores>, m_max: usize) -> Self {
        let n = columns[0].scores().len();
        let mut profiles = Array2::<f64>::zeros((n, m_max - 1));
        for (c, scores) in columns.iter().enumerate() {
            for (i, &s) in scores.scores().iter().enumerate() {
                profiles[[i, c]] = s;
            }
        }
        Self { profiles, m_max }
    }
}

/// Profile matrix via the CORE-SG path: one sparse graph built at `m_max`,
/// then independent per-`min_pts` extractions (parallel, deterministic).
pub fn glosh_profile_matrix(
    sg: &CoreSg,
    core: &CoreDistanceTable,
    lambda_mode: LambdaMode,
) -> Result<GloshProfileMatrix> {
    let m_max = sg.m_max();
    let columns: Vec<GloshScores> = (2..=m_max)
        .into_par_iter()
        .map(|min_pts| {
            let mst = mstgraph::mst_from_core_sg(sg, core, min_pts)?;
            glosh_scores(&mst, core, min_pts, lambda_mode)
        })
        .collect::<Result<_>>()?;
    Ok(GloshProfileMatrix::from_columns(columns, m_max))
}

/// Convenience: distances, core distances, CORE-SG and profiles in one call.
pub fn profile_matrix(
    data: &crate::dataset::Dataset,
    m_max: usize,
    metric: crate::neighbors::Metric,
    lambda_mode: LambdaMode,
) -> Result<GloshProfileMatrix> {
    let dist = crate::neighbors::pairwise_distances(data, metric);
    let core = crate::neighbors::core_distance_table(&dist, m_max)?;
    let sg = mstgraph::build_core_sg(&dist, &core, m_max)?;
    glosh_profile_matrix(&sg, &core, lambda_mode)
}

/// Profile matrix via repeated complete-graph MSTs; the reference path.
pub fn glosh_profile_matrix_naive(
    dist: &crate::neighbors::DistanceMatrix,
    core: &CoreDistanceTable,
    lambda_mode: LambdaMode,
) -> Result<GloshProfileMatrix> {
    let m_max = core.m_max();
    let columns: Vec<GloshScores> = (2..=m_max)
        .into_par_iter()
        .map(|min_pts| {
            let mst = mstgraph::mst_complete(dist, core, min_pts)?;
            glosh_scores(&mst, core, min_pts, lambda_mode)
        })
        .collect::<Result<_>>()?;
    Ok(GloshProfileMatrix::from_columns(columns, m_max))
}
