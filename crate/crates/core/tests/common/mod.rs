//! Shared fixtures for the integration suites.

use gloshkit_core::dataset::{Dataset, GroundTruth};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Two interleaved banana-shaped clusters with Gaussian noise, centered so the
/// data straddles the origin in both coordinates (like the classic benchmark).
pub fn banana_clusters(n: usize, noise: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(n * 2);
    for i in 0..n {
        let t = std::f64::consts::PI * rng.random::<f64>();
        let (x, y) = if i % 2 == 0 {
            (t.cos(), t.sin())
        } else {
            (1.0 - t.cos(), 0.5 - t.sin())
        };
        let nx: f64 = rng.sample(StandardNormal);
        let ny: f64 = rng.sample(StandardNormal);
        values.push(x + noise * nx - 0.5);
        values.push(y + noise * ny - 0.25);
    }
    Dataset::new(Array2::from_shape_vec((n, 2), values).unwrap()).unwrap()
}

/// Banana clusters measured at evenly spaced sites with `multiplicity`
/// repeated readings per site, the way quantized benchmark tables repeat
/// rows. The tie structure keeps score rankings churning until `min_pts`
/// passes the repeat count, which is where the dissimilarity elbow belongs.
pub fn stacked_banana_clusters(
    positions: usize,
    multiplicity: usize,
    band: f64,
    seed: u64,
) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_cluster = positions / 2;
    let arc = 1.15 * std::f64::consts::PI;
    let mut values = Vec::with_capacity(positions * multiplicity * 2);
    for cluster in 0..2 {
        for site in 0..per_cluster {
            let jitter: f64 = rng.random_range(-0.2..0.2);
            let t = arc * (site as f64 + 0.5 + jitter) / per_cluster as f64;
            let (x, y) = if cluster == 0 {
                (t.cos(), t.sin())
            } else {
                (1.0 - t.cos(), 0.5 - t.sin())
            };
            let nx: f64 = rng.sample(StandardNormal);
            let ny: f64 = rng.sample(StandardNormal);
            let (x, y) = (x + band * nx - 0.5, y + band * ny - 0.25);
            for _ in 0..multiplicity {
                values.push(x);
                values.push(y);
            }
        }
    }
    let n = per_cluster * 2 * multiplicity;
    Dataset::new(Array2::from_shape_vec((n, 2), values).unwrap()).unwrap()
}

/// Uniformly random points in a box; the stock random-dataset generator.
pub fn uniform_cloud(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Dataset {
    let values: Vec<f64> = (0..n * d).map(|_| rng.random_range(-50.0..50.0)).collect();
    Dataset::new(Array2::from_shape_vec((n, d), values).unwrap()).unwrap()
}

/// Appends outlier rows to the inliers and builds the matching ground truth.
pub fn with_outliers(inliers: &Dataset, outliers: &Array2<f64>) -> (Dataset, GroundTruth) {
    let mut points = inliers.points().clone();
    points
        .append(ndarray::Axis(0), outliers.view())
        .expect("same dimensionality");
    let mut labels = vec![false; inliers.n()];
    labels.extend(std::iter::repeat_n(true, outliers.nrows()));
    (Dataset::new(points).unwrap(), GroundTruth::new(labels))
}
