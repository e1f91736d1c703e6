//! Shared fixtures for the benchmark targets.

use gloshkit_core::dataset::Dataset;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A handful of Gaussian-ish blobs plus uniform background noise.
pub fn clustered_points(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..4)
        .map(|_| (0..d).map(|_| rng.random_range(-10.0..10.0)).collect())
        .collect();
    let mut values = Vec::with_capacity(n * d);
    for i in 0..n {
        if i % 10 == 9 {
            for _ in 0..d {
                values.push(rng.random_range(-15.0..15.0));
            }
        } else {
            let center = &centers[i % centers.len()];
            for &c in center {
                values.push(c + rng.random_range(-1.0..1.0));
            }
        }
    }
    Dataset::new(Array2::from_shape_vec((n, d), values).unwrap()).unwrap()
}
