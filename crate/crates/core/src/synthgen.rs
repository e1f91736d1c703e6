//! Synthetic outlier generation on an inlier dataset: GMM-based local outliers
//! and clumps, uniform-box global outliers filtered by Tomek links, and mixed
//! batches. All draws come from a seeded ChaCha stream, so identical inputs
//! produce identical outputs byte for byte.

use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;

use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

const EM_MAX_ITERATIONS: usize = 200;
const EM_TOLERANCE: f64 = 1e-6;
const EM_RESEEDS: usize = 3;
const RIDGE_FACTOR: f64 = 1e-6;
pub const DEFAULT_ALPHA: f64 = 5.0;
pub const DEFAULT_K_RANGE: RangeInclusive<usize> = 1..=5;

/// Kind of synthetic outlier to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutlierKind {
    Local,
    Clump,
    Global,
    Mixed,
}

impl OutlierKind {
    pub fn name(&self) -> &'static str {
        match self {
            OutlierKind::Local => "local",
            OutlierKind::Clump => "clump",
            OutlierKind::Global => "global",
            OutlierKind::Mixed => "mixed",
        }
    }
}

impl FromStr for OutlierKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "local" => Ok(OutlierKind::Local),
            "clump" => Ok(OutlierKind::Clump),
            "global" => Ok(OutlierKind::Global),
            "mixed" => Ok(OutlierKind::Mixed),
            other => Err(format!("unknown outlier kind {other:?}")),
        }
    }
}

/// A Gaussian mixture fitted to the inliers.
#[derive(Debug, Clone)]
pub struct GmmModel {
    weights: Vec<f64>,
    means: Vec<Array1<f64>>,
    covariances: Vec<Array2<f64>>,
    log_likelihood: f64,
}

impl GmmModel {
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn d(&self) -> usize {
        self.means[0].len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn means(&self) -> &[Array1<f64>] {
        &self.means
    }

    pub fn covariances(&self) -> &[Array2<f64>] {
        &self.covariances
    }

    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }

    /// Mean of the mixture distribution.
    pub fn mixture_mean(&self) -> Array1<f64> {
        let mut mean = Array1::<f64>::zeros(self.d());
        for (w, mu) in self.weights.iter().zip(self.means.iter()) {
            mean.scaled_add(*w, mu);
        }
        mean
    }

    /// Per-dimension variance of the mixture distribution.
    pub fn mixture_variance(&self) -> Array1<f64> {
        let mean = self.mixture_mean();
        let mut var = Array1::<f64>::zeros(self.d());
        for ((w, mu), cov) in self
            .weights
            .iter()
            .zip(self.means.iter())
            .zip(self.covariances.iter())
        {
            for dim in 0..self.d() {
                var[dim] += w * (cov[[dim, dim]] + mu[dim] * mu[dim]);
            }
        }
        for dim in 0..self.d() {
            var[dim] -= mean[dim] * mean[dim];
        }
        var
    }
}

/// Generated outlier points plus their kinds and any generation warnings.
#[derive(Debug, Clone)]
pub struct SyntheticOutliers {
    pub points: Array2<f64>,
    pub kinds: Vec<OutlierKind>,
    pub warnings: Vec<String>,
}

impl SyntheticOutliers {
    fn empty(d: usize) -> Self {
        Self {
            points: Array2::zeros((0, d)),
            kinds: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn count(&self) -> usize {
        self.points.nrows()
    }

    /// Writes inliers followed by the generated outliers as CSV with a binary
    /// `label` column (1 = synthetic outlier) and a `kind` tag column.
    pub fn write_combined_csv<W: Write>(&self, inliers: &Dataset, mut w: W) -> std::io::Result<()> {
        let d = inliers.d();
        for dim in 0..d {
            write!(w, "f{dim},")?;
        }
        writeln!(w, "label,kind")?;
        for row in inliers.points().rows() {
            for value in row {
                write!(w, "{value},")?;
            }
            writeln!(w, "0,inlier")?;
        }
        for (row, kind) in self.points.rows().into_iter().zip(self.kinds.iter()) {
            for value in row {
                write!(w, "{value},")?;
            }
            writeln!(w, "1,{}", kind.name())?;
        }
        Ok(())
    }
}

/// What to generate; `alpha` is the scale factor applied to the covariance
/// (local), the mean (clumps), or the bounding box (global).
#[derive(Debug, Clone)]
pub struct SyntheticOutlierSpec {
    pub kind: OutlierKind,
    pub count: usize,
    pub alpha: f64,
    pub seed: u64,
    pub gmm_k_range: RangeInclusive<usize>,
    /// Total candidate draws allowed for global generation; default 50x count.
    pub max_attempts: Option<usize>,
}

impl SyntheticOutlierSpec {
    pub fn new(kind: OutlierKind, count: usize, seed: u64) -> Self {
        Self {
            kind,
            count,
            alpha: DEFAULT_ALPHA,
            seed,
            gmm_k_range: DEFAULT_K_RANGE,
            max_attempts: None,
        }
    }
}

/// Generates outliers for a spec, fitting a GMM first when the kind needs one.
pub fn generate(inliers: &Dataset, spec: &SyntheticOutlierSpec) -> Result<SyntheticOutliers> {
    if spec.count == 0 {
        return Err(Error::ZeroCount);
    }
    if spec.alpha <= 0.0 {
        return Err(Error::NonPositiveAlpha { alpha: spec.alpha });
    }
    match spec.kind {
        OutlierKind::Local => {
            let model = fit_gmm(inliers, spec.gmm_k_range.clone(), spec.seed)?;
            gen_local(&model, spec.count, spec.alpha, derive_seed(spec.seed, 1))
        }
        OutlierKind::Clump => {
            let model = fit_gmm(inliers, spec.gmm_k_range.clone(), spec.seed)?;
            gen_clumps(&model, spec.count, spec.alpha, derive_seed(spec.seed, 2))
        }
        OutlierKind::Global => gen_global(
            inliers,
            spec.count,
            spec.alpha,
            derive_seed(spec.seed, 3),
            spec.max_attempts,
        ),
        OutlierKind::Mixed => gen_mixed(inliers, spec.count, spec.alpha, spec.seed),
    }
}

/// Fits a GMM by EM for every k in `k_range` and keeps the best BIC. Each k
/// gets a k-means++-style initialization and up to three re-seeded retries.
pub fn fit_gmm(inliers: &Dataset, k_range: RangeInclusive<usize>, seed: u64) -> Result<GmmModel> {
    let n = inliers.n();
    let d = inliers.d();
    if n < d + 2 {
        return Err(Error::GmmTooFewPoints {
            needed: d + 2,
            found: n,
        });
    }
    let mut best: Option<(f64, GmmModel)> = None;
    for k in k_range {
        if k == 0 || k > n {
            continue;
        }
        let mut fitted = None;
        for attempt in 0..=EM_RESEEDS {
            let rng_seed = derive_seed(seed, (k as u64) << 8 | attempt as u64);
            if let Some(model) = em_fit(inliers, k, rng_seed) {
                fitted = Some(model);
                break;
            }
        }
        let Some(model) = fitted else { continue };
        let params = (k - 1) + k * d + k * d * (d + 1) / 2;
        let bic = -2.0 * model.log_likelihood + params as f64 * (n as f64).ln();
        if best.as_ref().is_none_or(|(b, _)| bic < *b) {
            best = Some((bic, model));
        }
    }
    best.map(|(_, model)| model).ok_or(Error::GmmFitFailed {
        attempts: EM_RESEEDS + 1,
    })
}

/// Local outliers: mixture samples with covariances scaled by `alpha`.
pub fn gen_local(
    model: &GmmModel,
    count: usize,
    alpha: f64,
    seed: u64,
) -> Result<SyntheticOutliers> {
    if alpha <= 0.0 {
        return Err(Error::NonPositiveAlpha { alpha });
    }
    let cholesky_factors = scaled_cholesky_factors(model, alpha)?;
    let points = sample_mixture(model, &cholesky_factors, |mu| mu.clone(), count, seed);
    Ok(SyntheticOutliers {
        points,
        kinds: vec![OutlierKind::Local; count],
        warnings: Vec::new(),
    })
}

/// Clumps: mixture samples around means scaled by `alpha`.
pub fn gen_clumps(
    model: &GmmModel,
    count: usize,
    alpha: f64,
    seed: u64,
) -> Result<SyntheticOutliers> {
    if alpha <= 0.0 {
        return Err(Error::NonPositiveAlpha { alpha });
    }
    let cholesky_factors = scaled_cholesky_factors(model, 1.0)?;
    let points = sample_mixture(model, &cholesky_factors, |mu| mu * alpha, count, seed);
    let mut warnings = Vec::new();
    let max_mean_norm = model
        .means
        .iter()
        .map(|mu| mu.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    if max_mean_norm <= 1e-9 {
        warnings.push("all component means are ~0; scaled clumps overlap the inliers".to_string());
    }
    Ok(SyntheticOutliers {
        points,
        kinds: vec![OutlierKind::Clump; count],
        warnings,
    })
}

/// Global outliers: uniform draws from the per-feature box spanned by
/// `alpha * min` and `alpha * max` of the inlier features, rejecting any
/// candidate that forms a Tomek link with an inlier. Rejected candidates are
/// redrawn until `count` survive or the attempt budget is spent, in which case
/// a partial set is returned with a warning.
pub fn gen_global(
    inliers: &Dataset,
    count: usize,
    alpha: f64,
    seed: u64,
    max_attempts: Option<usize>,
) -> Result<SyntheticOutliers> {
    if alpha <= 0.0 {
        return Err(Error::NonPositiveAlpha { alpha });
    }
    let d = inliers.d();
    if count == 0 {
        return Ok(SyntheticOutliers::empty(d));
    }
    let budget = max_attempts.unwrap_or(50 * count);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Element-wise min/max of the two scaled bounds: with negative minima,
    // alpha*min can exceed alpha*max.
    let bounds: Vec<(f64, f64)> = (0..d)
        .map(|dim| {
            let column = inliers.points().column(dim);
            let lo = column.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let (a, b) = (alpha * lo, alpha * hi);
            (a.min(b), a.max(b))
        })
        .collect();
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        bounds
            .iter()
            .map(|&(lo, hi)| {
                if lo < hi {
                    rng.random_range(lo..hi)
                } else {
                    lo
                }
            })
            .collect()
    };

    let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut drawn = 0usize;
    while candidates.len() < count && drawn < budget {
        candidates.push(draw(&mut rng));
        drawn += 1;
    }
    loop {
        // Settle: removing a linked candidate can unshield another, so the
        // rejection rounds repeat until no link remains.
        loop {
            let linked = tomek_linked(inliers, &candidates);
            if linked.iter().all(|&l| !l) {
                break;
            }
            candidates = candidates
                .into_iter()
                .zip(linked)
                .filter(|(_, l)| !*l)
                .map(|(c, _)| c)
                .collect();
        }
        if candidates.len() == count || drawn >= budget {
            break;
        }
        while candidates.len() < count && drawn < budget {
            candidates.push(draw(&mut rng));
            drawn += 1;
        }
    }

    let mut warnings = Vec::new();
    if candidates.len() < count {
        warnings.push(format!(
            "global generation exhausted {budget} attempts; emitted {} of {count} requested",
            candidates.len()
        ));
    }
    let produced = candidates.len();
    let flat: Vec<f64> = candidates.into_iter().flatten().collect();
    Ok(SyntheticOutliers {
        points: Array2::from_shape_vec((produced, d), flat).expect("rows are d wide"),
        kinds: vec![OutlierKind::Global; produced],
        warnings,
    })
}

/// Splits `count` as evenly as possible across local, clumps and global (the
/// remainder goes to the earlier kinds, in that order) and concatenates the
/// tagged batches.
pub fn gen_mixed(
    inliers: &Dataset,
    count: usize,
    alpha: f64,
    seed: u64,
) -> Result<SyntheticOutliers> {
    if count < 3 {
        return Err(Error::MixedCountTooSmall { count });
    }
    let base = count / 3;
    let remainder = count % 3;
    let n_local = base + usize::from(remainder >= 1);
    let n_clump = base + usize::from(remainder >= 2);
    let n_global = base;

    let model = fit_gmm(inliers, DEFAULT_K_RANGE, seed)?;
    let local = gen_local(&model, n_local, alpha, derive_seed(seed, 1))?;
    let clumps = gen_clumps(&model, n_clump, alpha, derive_seed(seed, 2))?;
    let global = gen_global(inliers, n_global, alpha, derive_seed(seed, 3), None)?;

    let d = inliers.d();
    let mut points = Vec::with_capacity(count * d);
    let mut kinds = Vec::with_capacity(count);
    let mut warnings = Vec::new();
    for batch in [local, clumps, global] {
        points.extend(batch.points.iter().copied());
        kinds.extend(batch.kinds);
        warnings.extend(batch.warnings);
    }
    let produced = kinds.len();
    Ok(SyntheticOutliers {
        points: Array2::from_shape_vec((produced, d), points).expect("rows are d wide"),
        kinds,
        warnings,
    })
}

/// Marks candidates that form a Tomek link with an inlier: the candidate's
/// nearest inlier has that candidate as its own nearest point among the
/// inliers and all current candidates.
fn tomek_linked(inliers: &Dataset, candidates: &[Vec<f64>]) -> Vec<bool> {
    candidates
        .iter()
        .map(|c| {
            let p = nearest_inlier(inliers, c);
            let p_row = inliers.row(p);
            let mut best_other = f64::INFINITY;
            for (j, row) in inliers.points().rows().into_iter().enumerate() {
                if j == p {
                    continue;
                }
                best_other = best_other.min(sq_dist_views(p_row, row));
            }
            let d_to_c = sq_dist_slice(p_row, c);
            for other in candidates {
                if std::ptr::eq(other.as_ptr(), c.as_ptr()) {
                    continue;
                }
                best_other = best_other.min(sq_dist_slice(p_row, other));
            }
            d_to_c < best_other
        })
        .collect()
}

fn nearest_inlier(inliers: &Dataset, point: &[f64]) -> usize {
    let mut best = (0usize, f64::INFINITY);
    for (j, row) in inliers.points().rows().into_iter().enumerate() {
        let d = sq_dist_slice(row, point);
        if d < best.1 {
            best = (j, d);
        }
    }
    best.0
}

fn sq_dist_slice(a: ndarray::ArrayView1<'_, f64>, b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn sq_dist_views(a: ndarray::ArrayView1<'_, f64>, b: ndarray::ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn derive_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 step keeps derived streams well separated.
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn scaled_cholesky_factors(model: &GmmModel, cov_scale: f64) -> Result<Vec<Array2<f64>>> {
    model
        .covariances
        .iter()
        .map(|cov| cholesky(&(cov * cov_scale)).ok_or(Error::GmmFitFailed { attempts: 1 }))
        .collect()
}

fn sample_mixture<F>(
    model: &GmmModel,
    cholesky_factors: &[Array2<f64>],
    mean_map: F,
    count: usize,
    seed: u64,
) -> Array2<f64>
where
    F: Fn(&Array1<f64>) -> Array1<f64>,
{
    let d = model.d();
    let means: Vec<Array1<f64>> = model.means.iter().map(&mean_map).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Array2::<f64>::zeros((count, d));
    for mut row in out.rows_mut() {
        let j = sample_component(&mut rng, &model.weights);
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        for dim in 0..d {
            let mut value = means[j][dim];
            for k in 0..=dim {
                value += cholesky_factors[j][[dim, k]] * z[k];
            }
            row[dim] = value;
        }
    }
    out
}

fn sample_component(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let draw: f64 = rng.random();
    let mut cumulative = 0.0;
    for (j, w) in weights.iter().enumerate() {
        cumulative += w;
        if draw < cumulative {
            return j;
        }
    }
    weights.len() - 1
}

/// Lower-triangular Cholesky factor; None when the matrix is not positive
/// definite.
fn cholesky(a: &Array2<f64>) -> Option<Array2<f64>> {
    let d = a.nrows();
    let mut l = Array2::<f64>::zeros((d, d));
    for i in 0..d {
        for j in 0..=i {
            let mut sum = a[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[[i, j]] = sum.sqrt();
            } else {
                l[[i, j]] = sum / l[[j, j]];
            }
        }
    }
    Some(l)
}

/// Solves L z = v for lower-triangular L.
fn forward_solve(l: &Array2<f64>, v: &[f64]) -> Vec<f64> {
    let d = v.len();
    let mut z = vec![0.0; d];
    for i in 0..d {
        let mut sum = v[i];
        for k in 0..i {
            sum -= l[[i, k]] * z[k];
        }
        z[i] = sum / l[[i, i]];
    }
    z
}

struct Component {
    log_weight: f64,
    mean: Array1<f64>,
    chol: Array2<f64>,
    log_det: f64,
}

impl Component {
    fn log_pdf(&self, x: ndarray::ArrayView1<'_, f64>) -> f64 {
        let d = x.len() as f64;
        let diff: Vec<f64> = x.iter().zip(self.mean.iter()).map(|(a, b)| a - b).collect();
        let z = forward_solve(&self.chol, &diff);
        let quad: f64 = z.iter().map(|v| v * v).sum();
        -0.5 * (d * (2.0 * std::f64::consts::PI).ln() + self.log_det + quad)
    }
}

/// One EM run; None signals a failed attempt (degenerate covariance or an
/// emptied component) so the caller can re-seed.
fn em_fit(data: &Dataset, k: usize, seed: u64) -> Option<GmmModel> {
    let n = data.n();
    let d = data.d();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut means = kmeans_plus_plus(data, k, &mut rng);
    let global_cov = ridged(&sample_covariance(data));
    let mut covariances = vec![global_cov; k];
    let mut weights = vec![1.0 / k as f64; k];

    let mut responsibilities = Array2::<f64>::zeros((n, k));
    let mut previous_avg = f64::NEG_INFINITY;
    let mut log_likelihood = f64::NEG_INFINITY;

    for _ in 0..EM_MAX_ITERATIONS {
        // E step
        let components: Vec<Component> = (0..k)
            .map(|j| {
                let chol = cholesky(&covariances[j])?;
                let log_det = 2.0 * (0..d).map(|i| chol[[i, i]].ln()).sum::<f64>();
                Some(Component {
                    log_weight: weights[j].ln(),
                    mean: means[j].clone(),
                    chol,
                    log_det,
                })
            })
            .collect::<Option<_>>()?;

        let mut total = 0.0;
        for i in 0..n {
            let x = data.row(i);
            let logs: Vec<f64> = components
                .iter()
                .map(|c| c.log_weight + c.log_pdf(x))
                .collect();
            let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if !max.is_finite() {
                return None;
            }
            let sum_exp: f64 = logs.iter().map(|&l| (l - max).exp()).sum();
            let log_norm = max + sum_exp.ln();
            total += log_norm;
            for j in 0..k {
                responsibilities[[i, j]] = (logs[j] - log_norm).exp();
            }
        }
        log_likelihood = total;
        if !log_likelihood.is_finite() {
            return None;
        }
        let avg = log_likelihood / n as f64;
        if (avg - previous_avg).abs() < EM_TOLERANCE {
            break;
        }
        previous_avg = avg;

        // M step
        for j in 0..k {
            let nk: f64 = (0..n).map(|i| responsibilities[[i, j]]).sum();
            if nk < 1e-10 {
                return None;
            }
            weights[j] = nk / n as f64;
            let mut mean = Array1::<f64>::zeros(d);
            for i in 0..n {
                mean.scaled_add(responsibilities[[i, j]], &data.row(i));
            }
            mean /= nk;
            let mut cov = Array2::<f64>::zeros((d, d));
            for i in 0..n {
                let r = responsibilities[[i, j]];
                let diff = &data.row(i) - &mean;
                for a in 0..d {
                    for b in 0..=a {
                        cov[[a, b]] += r * diff[a] * diff[b];
                    }
                }
            }
            for a in 0..d {
                for b in 0..a {
                    cov[[a, b]] /= nk;
                    cov[[b, a]] = cov[[a, b]];
                }
                cov[[a, a]] /= nk;
            }
            means[j] = mean;
            covariances[j] = ridged(&cov);
        }
    }

    Some(GmmModel {
        weights,
        means,
        covariances,
        log_likelihood,
    })
}

/// Adds `1e-6 * trace / d` to the diagonal, with an absolute floor for
/// all-duplicate data.
fn ridged(cov: &Array2<f64>) -> Array2<f64> {
    let d = cov.nrows();
    let trace: f64 = (0..d).map(|i| cov[[i, i]]).sum();
    let ridge = (RIDGE_FACTOR * trace / d as f64).max(1e-12);
    let mut out = cov.clone();
    for i in 0..d {
        out[[i, i]] += ridge;
    }
    out
}

fn sample_covariance(data: &Dataset) -> Array2<f64> {
    let n = data.n();
    let d = data.d();
    let mean = data.points().mean_axis(ndarray::Axis(0)).expect("n >= 2");
    let mut cov = Array2::<f64>::zeros((d, d));
    for i in 0..n {
        let diff = &data.row(i) - &mean;
        for a in 0..d {
            for b in 0..=a {
                cov[[a, b]] += diff[a] * diff[b];
            }
        }
    }
    for a in 0..d {
        for b in 0..=a {
            cov[[a, b]] /= n as f64;
            cov[[b, a]] = cov[[a, b]];
        }
    }
    cov
}

/// k-means++ seeding: the first center uniform, the rest sampled with
/// probability proportional to the squared distance to the nearest chosen
/// center.
fn kmeans_plus_plus(data: &Dataset, k: usize, rng: &mut ChaCha8Rng) -> Vec<Array1<f64>> {
    let n = data.n();
    let mut centers: Vec<Array1<f64>> = Vec::with_capacity(k);
    let first = rng.random_range(0..n);
    centers.push(data.row(first).to_owned());
    let mut nearest_sq: Vec<f64> = (0..n)
        .map(|i| sq_dist_views(data.row(i), centers[0].view()))
        .collect();
    while centers.len() < k {
        let total: f64 = nearest_sq.iter().sum();
        let choice = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut picked = n - 1;
            for (i, &w) in nearest_sq.iter().enumerate() {
                if target < w {
                    picked = i;
                    break;
                }
                target -= w;
            }
            picked
        } else {
            rng.random_range(0..n)
        };
        let center = data.row(choice).to_owned();
        for (i, slot) in nearest_sq.iter_mut().enumerate() {
            *slot = slot.min(sq_dist_views(data.row(i), center.view()));
        }
        centers.push(center);
    }
    centers
}
