//! Automatic `min_pts` selection: Pearson dissimilarity between sorted score
//! sequences at consecutive `min_pts` values, and the elbow of that profile.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::glosh::GloshProfileMatrix;

/// Variances below this are treated as zero when correlating sequences.
const VARIANCE_TOLERANCE: f64 = 1e-12;

/// GLOSH scores at one `min_pts`, in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedScoreSequence {
    values: Vec<f64>,
    min_pts: usize,
}

impl SortedScoreSequence {
    /// Sorts a score array ascending.
    pub fn from_scores(scores: &[f64], min_pts: usize) -> Self {
        let mut values = scores.to_vec();
        values.sort_unstable_by(f64::total_cmp);
        Self { values, min_pts }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min_pts(&self) -> usize {
        self.min_pts
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Pearson dissimilarity `1 - |corr(a, b)|` between two equal-length sorted
/// sequences, using population moments. When both sequences are constant the
/// dissimilarity is 0; when exactly one is constant it is 1.
pub fn pearson_dissimilarity(a: &SortedScoreSequence, b: &SortedScoreSequence) -> Result<f64> {
    pearson_dissimilarity_raw(a.values(), b.values())
}

pub(crate) fn pearson_dissimilarity_raw(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::SequenceTooShort {
            needed: 2,
            found: a.len(),
        });
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b.iter()) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    cov /= n;
    var_a /= n;
    var_b /= n;

    let a_flat = var_a <= VARIANCE_TOLERANCE;
    let b_flat = var_b <= VARIANCE_TOLERANCE;
    let delta = match (a_flat, b_flat) {
        (true, true) => 0.0,
        (true, false) | (false, true) => 1.0,
        (false, false) => 1.0 - (cov / (var_a * var_b).sqrt()).abs(),
    };
    Ok(delta.clamp(0.0, 1.0))
}

/// Dissimilarities between sorted score sequences at consecutive `min_pts`
/// values: `deltas[i]` compares `min_pts = i + 2` against `i + 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdProfile {
    deltas: Vec<f64>,
    m_max: usize,
}

impl OrdProfile {
    /// Wraps raw dissimilarities; `deltas[i]` must compare `min_pts = i + 2`
    /// against `i + 3`.
    pub fn from_deltas(deltas: Vec<f64>) -> Result<Self> {
        if deltas.len() < 2 {
            return Err(Error::SequenceTooShort {
                needed: 2,
                found: deltas.len(),
            });
        }
        let m_max = deltas.len() + 2;
        Ok(Self { deltas, m_max })
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// CSV export: rows `minpts_pair,delta` such as `2-3,0.41`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "minpts_pair,delta")?;
        for (i, delta) in self.deltas.iter().enumerate() {
            writeln!(w, "{}-{},{}", i + 2, i + 3, delta)?;
        }
        Ok(())
    }
}

/// Builds the profile of rank dissimilarities from a GLOSH profile matrix.
/// Needs `m_max >= 4` so the elbow geometry has at least two deltas.
pub fn ord_profile(profiles: &GloshProfileMatrix) -> Result<OrdProfile> {
    let m_max = profiles.m_max();
    if m_max < 4 {
        return Err(Error::MmaxTooSmall { m_max });
    }
    let sorted: Vec<SortedScoreSequence> = (2..=m_max)
        .map(|m| SortedScoreSequence::from_scores(&profiles.column(m), m))
        .collect();
    let deltas = sorted
        .windows(2)
        .map(|pair| pearson_dissimilarity(&pair[0], &pair[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrdProfile { deltas, m_max })
}

/// The selected `min_pts` and the elbow geometry behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinPtsSelection {
    /// `elbow_index + 3`.
    pub m_star: usize,
    /// Index into the delta array with the largest orthogonal distance.
    pub elbow_index: usize,
    /// Index of the maximum delta (first occurrence).
    pub peak_index: usize,
    /// Orthogonal distances for candidates `peak_index..=last`, in order.
    pub orth_distances: Vec<f64>,
    /// Set when the profile offers no elbow geometry (flat from the peak on,
    /// or the peak sits at the end).
    pub degenerate: bool,
}

/// Finds the elbow: the delta between the profile's peak B and its final value
/// A with the largest orthogonal distance to the segment AB.
pub fn find_elbow(profile: &OrdProfile) -> Result<MinPtsSelection> {
    let deltas = profile.deltas();
    if deltas.len() < 2 {
        return Err(Error::SequenceTooShort {
            needed: 2,
            found: deltas.len(),
        });
    }
    let peak_index = argmax_first(deltas);
    let last = deltas.len() - 1;
    if peak_index == last {
        return Ok(MinPtsSelection {
            m_star: peak_index + 3,
            elbow_index: peak_index,
            peak_index,
            orth_distances: vec![0.0],
            degenerate: true,
        });
    }

    let a = (last as f64, deltas[last]);
    let b = (peak_index as f64, deltas[peak_index]);
    let ab = (b.0 - a.0, b.1 - a.1);
    let ab_norm = (ab.0 * ab.0 + ab.1 * ab.1).sqrt();
    let orth_distances: Vec<f64> = (peak_index..=last)
        .map(|j| {
            let ad = (j as f64 - a.0, deltas[j] - a.1);
            (ad.0 * ab.1 - ad.1 * ab.0).abs() / ab_norm
        })
        .collect();
    let best = argmax_first(&orth_distances);
    let degenerate = orth_distances[best] == 0.0;
    let elbow_index = if degenerate {
        peak_index
    } else {
        peak_index + best
    };
    Ok(MinPtsSelection {
        m_star: elbow_index + 3,
        elbow_index,
        peak_index,
        orth_distances,
        degenerate,
    })
}

fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(values: &[f64]) -> SortedScoreSequence {
        SortedScoreSequence::from_scores(values, 2)
    }

    fn profile(deltas: &[f64]) -> OrdProfile {
        OrdProfile::from_deltas(deltas.to_vec()).unwrap()
    }

    #[test]
    fn perfectly_linear_sequences_have_zero_dissimilarity() {
        let d = pearson_dissimilarity(&seq(&[0.0, 1.0, 2.0]), &seq(&[0.0, 2.0, 4.0])).unwrap();
        assert!(d.abs() <= 1e-15);
    }

    #[test]
    fn half_correlated_sequences_score_one_half() {
        let d = pearson_dissimilarity(&seq(&[1.0, 1.0, 2.0]), &seq(&[1.0, 2.0, 2.0])).unwrap();
        assert!((d - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn degenerate_variance_rules() {
        let flat = seq(&[0.3, 0.3, 0.3]);
        let rising = seq(&[0.1, 0.2, 0.9]);
        assert_eq!(pearson_dissimilarity(&flat, &flat).unwrap(), 0.0);
        assert_eq!(pearson_dissimilarity(&flat, &rising).unwrap(), 1.0);
        assert_eq!(pearson_dissimilarity(&rising, &flat).unwrap(), 1.0);
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let err = pearson_dissimilarity(&seq(&[0.0, 1.0]), &seq(&[0.0, 1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
        let err = pearson_dissimilarity(&seq(&[0.0]), &seq(&[1.0])).unwrap_err();
        assert!(matches!(err, Error::SequenceTooShort { .. }));
    }

    #[test]
    fn ord_profile_from_a_matrix() {
        use crate::dataset::Dataset;
        use crate::glosh::{profile_matrix, LambdaMode};
        use crate::neighbors::Metric;
        use ndarray::Array2;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let values: Vec<f64> = (0..40).map(|_| rng.random_range(-8.0..8.0)).collect();
        let data = Dataset::new(Array2::from_shape_vec((20, 2), values).unwrap()).unwrap();
        let profiles =
            profile_matrix(&data, 5, Metric::Euclidean, LambdaMode::CoreDistance).unwrap();
        let ord = ord_profile(&profiles).unwrap();
        assert_eq!(ord.deltas().len(), 3);
        // Each delta must match a direct evaluation on the sorted columns.
        for (i, &delta) in ord.deltas().iter().enumerate() {
            let a = SortedScoreSequence::from_scores(&profiles.column(i + 2), i + 2);
            let b = SortedScoreSequence::from_scores(&profiles.column(i + 3), i + 3);
            assert_eq!(delta, pearson_dissimilarity(&a, &b).unwrap());
        }
    }

    #[test]
    fn identical_columns_give_zero_dissimilarity_everywhere() {
        use crate::glosh::GloshProfileMatrix;
        let matrix = ndarray::Array2::from_shape_fn((10, 4), |(i, _)| i as f64 / 10.0);
        let profiles = GloshProfileMatrix::from_matrix(matrix, 5).unwrap();
        let ord = ord_profile(&profiles).unwrap();
        assert_eq!(ord.deltas(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn small_m_max_is_rejected() {
        use crate::glosh::GloshProfileMatrix;
        let matrix = ndarray::Array2::zeros((6, 1));
        let profiles = GloshProfileMatrix::from_matrix(matrix, 2).unwrap();
        assert!(matches!(
            ord_profile(&profiles),
            Err(Error::MmaxTooSmall { m_max: 2 })
        ));
    }

    #[test]
    fn elbow_on_the_hand_profile() {
        let selection = find_elbow(&profile(&[0.9, 0.4, 0.1, 0.05, 0.0])).unwrap();
        assert_eq!(selection.peak_index, 0);
        assert_eq!(selection.elbow_index, 2);
        assert_eq!(selection.m_star, 5);
        assert!(!selection.degenerate);
        let expected = [0.0, 1.1, 1.4, 0.7, 0.0].map(|c: f64| c / 16.81f64.sqrt());
        for (got, want) in selection.orth_distances.iter().zip(expected.iter()) {
            assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn two_deltas_force_the_peak() {
        let selection = find_elbow(&profile(&[0.5, 0.0])).unwrap();
        assert_eq!(selection.elbow_index, 0);
        assert_eq!(selection.m_star, 3);
    }

    #[test]
    fn flat_profile_is_degenerate() {
        let selection = find_elbow(&profile(&[0.2, 0.2, 0.2, 0.2])).unwrap();
        assert!(selection.degenerate);
        assert_eq!(selection.elbow_index, 0);
        assert_eq!(selection.m_star, 3);
    }

    #[test]
    fn peak_at_the_end_is_degenerate() {
        let selection = find_elbow(&profile(&[0.1, 0.2, 0.9])).unwrap();
        assert!(selection.degenerate);
        assert_eq!(selection.elbow_index, 2);
        assert_eq!(selection.m_star, 5);
    }

    #[test]
    fn single_delta_is_rejected() {
        assert!(OrdProfile::from_deltas(vec![0.4]).is_err());
    }

    #[test]
    fn ord_csv_labels_pairs() {
        let mut out = Vec::new();
        profile(&[0.25, 0.5]).write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "minpts_pair,delta\n2-3,0.25\n3-4,0.5\n");
    }

    proptest! {
        #[test]
        fn dissimilarity_is_symmetric(
            pairs in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..40),
        ) {
            let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let (sa, sb) = (seq(&a), seq(&b));
            let d1 = pearson_dissimilarity(&sa, &sb).unwrap();
            let d2 = pearson_dissimilarity(&sb, &sa).unwrap();
            prop_assert_eq!(d1, d2);
            prop_assert!((0.0..=1.0).contains(&d1));
        }

        #[test]
        fn dissimilarity_ignores_positive_affine_transforms(
            pairs in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3..40),
            scale in 0.1f64..10.0,
            shift in -5.0f64..5.0,
        ) {
            let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let transformed: Vec<f64> = a.iter().map(|v| scale * v + shift).collect();
            let base = pearson_dissimilarity(&seq(&a), &seq(&b)).unwrap();
            let after = pearson_dissimilarity(&seq(&transformed), &seq(&b)).unwrap();
            prop_assert!((base - after).abs() <= 1e-12);
        }

        #[test]
        fn elbow_matches_brute_force_and_m_star_stays_in_range(
            deltas in proptest::collection::vec(0.0f64..1.0, 2..30),
        ) {
            let prof = profile(&deltas);
            let selection = find_elbow(&prof).unwrap();
            prop_assert!(selection.m_star >= 3);
            prop_assert!(selection.m_star <= prof.m_max());
            prop_assert!(selection.peak_index <= selection.elbow_index);
            prop_assert!(selection.elbow_index < deltas.len());

            // Independent re-computation of the orthogonal distances.
            let peak = (0..deltas.len())
                .max_by(|&i, &j| {
                    deltas[i].total_cmp(&deltas[j]).then(j.cmp(&i))
                })
                .unwrap();
            let last = deltas.len() - 1;
            if peak != last && !selection.degenerate {
                let (ax, ay) = (last as f64, deltas[last]);
                let (bx, by) = (peak as f64, deltas[peak]);
                let norm = ((bx - ax).powi(2) + (by - ay).powi(2)).sqrt();
                let mut best = (peak, -1.0f64);
                for (j, &delta) in deltas.iter().enumerate().take(last + 1).skip(peak) {
                    let cross = (j as f64 - ax) * (by - ay) - (delta - ay) * (bx - ax);
                    let orth = cross.abs() / norm;
                    if orth > best.1 {
                        best = (j, orth);
                    }
                }
                prop_assert_eq!(selection.elbow_index, best.0);
            }
        }
    }
}
