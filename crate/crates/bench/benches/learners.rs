use bnbench_bench::fixture;
use bnbench_core::ci::{CiTestKind, GaussianCiTest, TestKind};
use bnbench_core::learn::{learn_with, Algorithm, LearnParams};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn learners(c: &mut Criterion) {
    let kind = CiTestKind::new(TestKind::FisherZ, 0.05).unwrap();
    let mut group = c.benchmark_group("learn_48_nodes");
    for (label, gamma) in [("B", 0.25), ("L", 1.0), ("U", 1.25)] {
        let (_, data) = fixture(48, gamma, 7);
        let test = GaussianCiTest::new(&data, kind);
        for alg in Algorithm::ALL {
            let mut params = LearnParams::new(alg, kind);
            params.max_condset = Some(3);
            group.bench_with_input(BenchmarkId::new(alg.as_str(), label), &params, |b, p| b.iter(|| learn_with(&test, p, false)));
        }
    }
    group.finish();
}

criterion_group!(benches, learners);
criterion_main!(benches);
