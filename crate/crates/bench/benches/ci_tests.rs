use bnbench_bench::fixture;
use bnbench_core::ci::{correlation_matrix, CiTest, CiTestKind, GaussianCiTest, TestKind};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn ci_tests(c: &mut Criterion) {
    let (_, data) = fixture(64, 1.0, 3);
    let cols: Vec<usize> = (0..64).collect();
    c.bench_function("correlation_matrix_64x1024", |b| b.iter(|| correlation_matrix(&data, black_box(&cols))));

    let mut group = c.benchmark_group("ci_test");
    for kind in [TestKind::FisherZ, TestKind::MiGaussian] {
        let test = GaussianCiTest::new(&data, CiTestKind::new(kind, 0.05).unwrap());
        for k in [0usize, 1, 3, 6] {
            let z: Vec<usize> = (10..10 + k).collect();
            group.bench_with_input(BenchmarkId::new(kind.as_str(), k), &z, |b, z| b.iter(|| test.test(black_box(2), black_box(5), z)));
        }
    }
    group.finish();
}

criterion_group!(benches, ci_tests);
criterion_main!(benches);
