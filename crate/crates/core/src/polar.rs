//! POLAR: turn the sorted GLOSH score curve at `m*` into a knee threshold and
//! a regression-adjusted threshold, then label potential outliers.

use std::io::Write;

use serde::Serialize;

use crate::autoglosh::SortedScoreSequence;
use crate::error::{Error, Result};

/// Inlier-trend line fitted to the scores before the knee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendLine {
    pub beta0: f64,
    pub beta1: f64,
    /// The line evaluated at the final rank index, the score the curve would
    /// reach if only inliers were present.
    pub r_extrapolated: f64,
}

/// Knee position, thresholds, and per-point labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarResult {
    pub knee_index: usize,
    pub knee_score: f64,
    pub trend: Option<TrendLine>,
    pub adjusted_threshold: f64,
    /// `true` marks a potential outlier, aligned with the original point order.
    pub labels_knee: Vec<bool>,
    pub labels_adjusted: Vec<bool>,
    /// Set when the sorted curve is flat or exactly collinear end to end.
    pub degenerate: bool,
}

/// Maximum-orthogonal-distance knee of an ascending score sequence. A is the
/// first score, B the last; the knee is the interior point farthest from AB.
/// A curve with no geometry (all interior distances zero) is degenerate and
/// returns the final index, which labels nothing.
pub fn find_knee(scores: &SortedScoreSequence) -> Result<(usize, f64, bool)> {
    let s = scores.values();
    let n = s.len();
    if n < 3 {
        return Err(Error::SequenceTooShort {
            needed: 3,
            found: n,
        });
    }
    let a = (0.0, s[0]);
    let b = ((n - 1) as f64, s[n - 1]);
    let ab = (b.0 - a.0, b.1 - a.1);
    let ab_norm = (ab.0 * ab.0 + ab.1 * ab.1).sqrt();
    let mut best = (0usize, 0.0f64);
    for (j, &sj) in s.iter().enumerate().take(n - 1).skip(1) {
        let ad = (j as f64 - a.0, sj - a.1);
        let orth = (ad.0 * ab.1 - ad.1 * ab.0).abs() / ab_norm;
        if orth > best.1 {
            best = (j, orth);
        }
    }
    if best.1 == 0.0 {
        return Ok((n - 1, s[n - 1], true));
    }
    Ok((best.0, s[best.0], false))
}

/// Ordinary least squares on the pairs `(j, scores[j])` for `j < knee_index`.
/// The ranks are centered but the scores are left raw: the centered ranks sum
/// to zero exactly, so the slope is unchanged and the arithmetic stays exact
/// on exactly-linear prefixes.
pub fn fit_inlier_trend(scores: &SortedScoreSequence, knee_index: usize) -> Result<(f64, f64)> {
    if knee_index < 2 {
        return Err(Error::TrendUnfittable { knee_index });
    }
    let ys = &scores.values()[..knee_index];
    let n = ys.len() as f64;
    let mean_x = (knee_index - 1) as f64 / 2.0;
    let sum_x = n * mean_x;
    let sum_y: f64 = ys.iter().sum();
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (j, &y) in ys.iter().enumerate() {
        let dx = j as f64 - mean_x;
        sxx += dx * dx;
        sxy += dx * y;
    }
    let beta1 = sxy / sxx;
    let beta0 = (sum_y - beta1 * sum_x) / n;
    Ok((beta0, beta1))
}

/// Extrapolates the trend to the final rank index and picks the observed score
/// between the knee and the end that is closest to it; ties go to the smaller
/// score.
pub fn adjusted_threshold(
    scores: &SortedScoreSequence,
    knee_index: usize,
    beta0: f64,
    beta1: f64,
) -> (f64, f64) {
    let s = scores.values();
    let n = s.len();
    let r = beta0 + beta1 * (n - 1) as f64;
    let mut best = (f64::INFINITY, s[knee_index]);
    for &candidate in &s[knee_index..] {
        let gap = (candidate - r).abs();
        if gap < best.0 {
            best = (gap, candidate);
        }
    }
    (r, best.1)
}

/// Strict-greater labeling: the threshold point itself stays an inlier.
pub fn label(scores: &[f64], threshold: f64) -> Vec<bool> {
    scores.iter().map(|&s| s > threshold).collect()
}

/// Runs the full POLAR sequence on per-point scores (any order).
pub fn polar_result(scores: &[f64], min_pts: usize) -> Result<PolarResult> {
    let sorted = SortedScoreSequence::from_scores(scores, min_pts);
    let (knee_index, knee_score, degenerate) = find_knee(&sorted)?;
    let trend = match fit_inlier_trend(&sorted, knee_index) {
        Ok((beta0, beta1)) => {
            let (r_extrapolated, _) = adjusted_threshold(&sorted, knee_index, beta0, beta1);
            Some(TrendLine {
                beta0,
                beta1,
                r_extrapolated,
            })
        }
        Err(Error::TrendUnfittable { .. }) => None,
        Err(other) => return Err(other),
    };
    let threshold = match trend {
        Some(t) => adjusted_threshold(&sorted, knee_index, t.beta0, t.beta1).1,
        None => knee_score,
    };
    Ok(PolarResult {
        knee_index,
        knee_score,
        trend,
        adjusted_threshold: threshold,
        labels_knee: label(scores, knee_score),
        labels_adjusted: label(scores, threshold),
        degenerate,
    })
}

/// CSV export: `point_id,score,label_knee,label_adjusted` with 1 for outliers.
pub fn write_labels_csv<W: Write>(
    scores: &[f64],
    result: &PolarResult,
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "point_id,score,label_knee,label_adjusted")?;
    for (i, &score) in scores.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            i,
            score,
            u8::from(result.labels_knee[i]),
            u8::from(result.labels_adjusted[i])
        )?;
    }
    Ok(())
}
