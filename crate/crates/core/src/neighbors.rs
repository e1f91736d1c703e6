//! Pairwise distances and core distances for a whole range of `min_pts` values.

use std::str::FromStr;

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Distance metric for the underlying space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Euclidean,
    Manhattan,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan => "manhattan",
        }
    }

    fn eval(&self, a: ndarray::ArrayView1<'_, f64>, b: ndarray::ArrayView1<'_, f64>) -> f64 {
        match self {
            Metric::Euclidean => a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Metric::Manhattan => a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum(),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "manhattan" => Ok(Metric::Manhattan),
            other => Err(Error::UnknownMetric(other.to_string())),
        }
    }
}

/// Full symmetric matrix of pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    dist: Array2<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.dist.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[[i, j]]
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.dist
    }
}

/// Materializes the n x n distance matrix. Rows are computed independently, so
/// the result is identical regardless of worker count; symmetry is exact because
/// (i, j) and (j, i) evaluate the same expression.
pub fn pairwise_distances(data: &Dataset, metric: Metric) -> DistanceMatrix {
    let n = data.n();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = data.row(i);
            (0..n).map(|j| metric.eval(a, data.row(j))).collect()
        })
        .collect();
    let mut dist = Array2::<f64>::zeros((n, n));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            dist[[i, j]] = v;
        }
    }
    DistanceMatrix { dist }
}

/// Core distances for every `min_pts` in `[2, m_max]`.
///
/// `core(i, m)` is the distance from point i to its m-th nearest neighbor,
/// the point itself counting as the 1st, so `min_pts = 2` gives the distance
/// to the nearest other point.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreDistanceTable {
    core: Array2<f64>,
    m_max: usize,
}

impl CoreDistanceTable {
    pub fn n(&self) -> usize {
        self.core.nrows()
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// Core distance of point `i` at the given `min_pts`.
    #[inline]
    pub fn core(&self, i: usize, min_pts: usize) -> f64 {
        self.core[[i, min_pts - 2]]
    }

    pub fn check_min_pts(&self, min_pts: usize) -> Result<()> {
        if min_pts < 2 || min_pts > self.m_max {
            return Err(Error::MinPtsOutOfRange {
                min_pts,
                m_max: self.m_max,
            });
        }
        Ok(())
    }
}

/// Builds the full core-distance table in one sorting pass per point.
pub fn core_distance_table(dist: &DistanceMatrix, m_max: usize) -> Result<CoreDistanceTable> {
    let n = dist.n();
    if m_max < 2 || m_max > n {
        return Err(Error::MmaxOutOfRange { m_max, n });
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let others = sorted_others(dist, i);
            (2..=m_max).map(|m| others[m - 2].0).collect()
        })
        .collect();
    let mut core = Array2::<f64>::zeros((n, m_max - 1));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            core[[i, j]] = v;
        }
    }
    Ok(CoreDistanceTable { core, m_max })
}

/// For every point, the ids of its k nearest other points, ascending by
/// (distance, id). `k` must be at most n - 1.
pub fn nearest_neighbor_lists(dist: &DistanceMatrix, k: usize) -> Vec<Vec<usize>> {
    (0..dist.n())
        .into_par_iter()
        .map(|i| {
            sorted_others(dist, i)
                .into_iter()
                .take(k)
                .map(|(_, id)| id)
                .collect()
        })
        .collect()
}

/// All other points sorted by (distance to i, id); ties break toward the
/// smaller id so neighbor lists are deterministic.
fn sorted_others(dist: &DistanceMatrix, i: usize) -> Vec<(f64, usize)> {
    let n = dist.n();
    let mut others: Vec<(f64, usize)> = (0..n)
        .filter(|&j| j != i)
        .map(|j| (dist.get(i, j), j))
        .collect();
    others.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    others
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use ndarray::array;
    use proptest::prelude::*;

    fn one_d(values: &[f64]) -> Dataset {
        let n = values.len();
        Dataset::new(Array2::from_shape_vec((n, 1), values.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn euclidean_is_the_default_triangle() {
        let data = Dataset::new(array![[0.0, 0.0], [3.0, 4.0]]).unwrap();
        let dist = pairwise_distances(&data, Metric::Euclidean);
        assert_eq!(dist.get(0, 1), 5.0);
        assert_eq!(dist.get(1, 0), 5.0);
        assert_eq!(dist.get(0, 0), 0.0);
    }

    #[test]
    fn manhattan_sums_coordinates() {
        let data = Dataset::new(array![[0.0, 0.0], [3.0, 4.0]]).unwrap();
        let dist = pairwise_distances(&data, Metric::Manhattan);
        assert_eq!(dist.get(0, 1), 7.0);
    }

    #[test]
    fn identical_points_have_zero_distance() {
        let data = Dataset::new(array![[1.5, -2.0], [1.5, -2.0]]).unwrap();
        let dist = pairwise_distances(&data, Metric::Euclidean);
        assert_eq!(dist.get(0, 1), 0.0);
    }

    #[test]
    fn unknown_metric_name_is_rejected() {
        assert!(matches!(
            "cosine".parse::<Metric>(),
            Err(Error::UnknownMetric(_))
        ));
    }

    #[test]
    fn core_distances_on_a_line() {
        let data = one_d(&[0.0, 1.0, 3.0]);
        let dist = pairwise_distances(&data, Metric::Euclidean);
        let table = core_distance_table(&dist, 3).unwrap();
        assert_eq!(
            (0..3).map(|i| table.core(i, 2)).collect::<Vec<_>>(),
            vec![1.0, 1.0, 2.0]
        );
        assert_eq!(
            (0..3).map(|i| table.core(i, 3)).collect::<Vec<_>>(),
            vec![3.0, 2.0, 3.0]
        );
    }

    #[test]
    fn duplicates_have_zero_core_distance() {
        let data = one_d(&[4.0, 4.0, 9.0]);
        let dist = pairwise_distances(&data, Metric::Euclidean);
        let table = core_distance_table(&dist, 2).unwrap();
        assert_eq!(table.core(0, 2), 0.0);
        assert_eq!(table.core(1, 2), 0.0);
    }

    #[test]
    fn m_max_out_of_range_is_rejected() {
        let data = one_d(&[0.0, 1.0, 3.0]);
        let dist = pairwise_distances(&data, Metric::Euclidean);
        assert!(core_distance_table(&dist, 4).is_err());
        assert!(core_distance_table(&dist, 1).is_err());
    }

    /// Independent oracle: full sort of the distance row, self included.
    fn brute_force_core(dist: &DistanceMatrix, i: usize, m: usize) -> f64 {
        let mut row: Vec<f64> = (0..dist.n()).map(|j| dist.get(i, j)).collect();
        row.sort_unstable_by(f64::total_cmp);
        row[m - 1]
    }

    proptest! {
        #[test]
        fn core_table_matches_brute_force_and_is_monotone(
            values in proptest::collection::vec(-100.0f64..100.0, 8..50),
            d in 1usize..4,
        ) {
            let n = values.len() / d;
            prop_assume!(n >= 4);
            let data = Dataset::new(
                Array2::from_shape_vec((n, d), values[..n * d].to_vec()).unwrap(),
            ).unwrap();
            let dist = pairwise_distances(&data, Metric::Euclidean);
            let m_max = n.min(8);
            let table = core_distance_table(&dist, m_max).unwrap();
            for i in 0..n {
                for m in 2..=m_max {
                    prop_assert_eq!(table.core(i, m), brute_force_core(&dist, i, m));
                    if m > 2 {
                        prop_assert!(table.core(i, m) >= table.core(i, m - 1));
                    }
                }
            }
        }
    }
}
