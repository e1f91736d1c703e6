//! Detection-quality metrics against ground truth.

use serde::Serialize;

use crate::dataset::GroundTruth;
use crate::error::{Error, Result};

/// Confusion counts for binary outlier predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

/// Threshold-based metrics derived from a confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub g_mean: f64,
    pub confusion: Confusion,
}

/// Fraction of true outliers among the `n` highest-scoring points; `n`
/// defaults to the ground-truth outlier count.
///
/// Score ties at the cut are credited by expected value: with `r` slots left
/// among `t` tied points carrying `o` true outliers, the tied group
/// contributes `o * r / t`, the average over all tie orderings.
pub fn precision_at_n(scores: &[f64], truth: &GroundTruth, n: Option<usize>) -> Result<f64> {
    if scores.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: truth.len(),
        });
    }
    let n = n.unwrap_or_else(|| truth.outlier_count());
    if n < 1 || n > scores.len() {
        return Err(Error::PrecisionNOutOfRange {
            n,
            len: scores.len(),
        });
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let cut_score = scores[order[n - 1]];

    let mut above = 0usize;
    let mut above_outliers = 0usize;
    let mut tied = 0usize;
    let mut tied_outliers = 0usize;
    for (&s, i) in scores.iter().zip(0..) {
        if s > cut_score {
            above += 1;
            above_outliers += usize::from(truth.is_outlier(i));
        } else if s == cut_score {
            tied += 1;
            tied_outliers += usize::from(truth.is_outlier(i));
        }
    }
    let remaining = n - above;
    let credit = above_outliers as f64 + tied_outliers as f64 * remaining as f64 / tied as f64;
    Ok(credit / n as f64)
}

/// Confusion counts plus precision, recall, F-measure, and G-Mean.
pub fn threshold_metrics(predicted: &[bool], truth: &GroundTruth) -> Result<MetricsReport> {
    if predicted.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: truth.len(),
        });
    }
    let mut c = Confusion {
        tp: 0,
        fp: 0,
        tn: 0,
        fn_: 0,
    };
    for (&pred, i) in predicted.iter().zip(0..) {
        match (pred, truth.is_outlier(i)) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let specificity = ratio(c.tn, c.tn + c.fp);
    let f_measure = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let g_mean = (recall * specificity).sqrt();
    Ok(MetricsReport {
        precision,
        recall,
        f_measure,
        g_mean,
        confusion: c,
    })
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}
