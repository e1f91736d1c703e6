use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gloshkit_bench::clustered_points;
use gloshkit_core::autoglosh::{find_elbow, ord_profile};
use gloshkit_core::glosh::{glosh_profile_matrix, glosh_profile_matrix_naive, LambdaMode};
use gloshkit_core::mstgraph::build_core_sg;
use gloshkit_core::neighbors::{core_distance_table, pairwise_distances, Metric};
use gloshkit_core::polar::polar_result;

/// The paper's acceleration claim in bench form: one CORE-SG build plus sparse
/// extractions versus a complete-graph MST per min_pts value.
fn bench_profile_paths(c: &mut Criterion) {
    let mut group = c.benchmark_group("profile_matrix");
    for &n in &[200usize, 400] {
        let data = clustered_points(n, 3, 17);
        let dist = pairwise_distances(&data, Metric::Euclidean);
        let core = core_distance_table(&dist, 30).unwrap();
        group.bench_with_input(BenchmarkId::new("core_sg", n), &n, |b, _| {
            b.iter(|| {
                let sg = build_core_sg(&dist, &core, 30).unwrap();
                glosh_profile_matrix(&sg, &core, LambdaMode::CoreDistance).unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("naive", n), &n, |b, _| {
            b.iter(|| glosh_profile_matrix_naive(&dist, &core, LambdaMode::CoreDistance).unwrap())
        });
    }
    group.finish();
}

fn bench_selection_and_thresholding(c: &mut Criterion) {
    let data = clustered_points(400, 3, 23);
    let dist = pairwise_distances(&data, Metric::Euclidean);
    let core = core_distance_table(&dist, 30).unwrap();
    let sg = build_core_sg(&dist, &core, 30).unwrap();
    let profiles = glosh_profile_matrix(&sg, &core, LambdaMode::CoreDistance).unwrap();

    c.bench_function("ord_profile_and_elbow", |b| {
        b.iter(|| {
            let ord = ord_profile(&profiles).unwrap();
            find_elbow(&ord).unwrap()
        })
    });

    let ord = ord_profile(&profiles).unwrap();
    let selection = find_elbow(&ord).unwrap();
    let scores = profiles.column(selection.m_star);
    c.bench_function("polar_thresholding", |b| {
        b.iter(|| polar_result(&scores, selection.m_star).unwrap())
    });
}

criterion_group!(
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_profile_paths, bench_selection_and_thresholding
);
criterion_main!(benches);
