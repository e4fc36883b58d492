use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tcss_core::analysis::{
    enumerate_linear_combination, ipa_success_probability, subset_component_leakage,
    AnalysisConfig, ForgeStrategy, TinyScheme,
};
use tcss_core::Execution;

fn paths() -> Vec<(&'static str, Execution)> {
    vec![
        ("sequential", Execution::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Execution::Parallel),
    ]
}

fn config(execution: Execution) -> AnalysisConfig {
    AnalysisConfig {
        execution,
        fallback_samples: None,
        ..AnalysisConfig::default()
    }
}

fn linear(c: &mut Criterion) {
    let mut group = c.benchmark_group("linear_combination_p31_k3");
    for (name, exec) in paths() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                enumerate_linear_combination(black_box(&[3, 5, 7]), 31, &config(exec)).unwrap()
            })
        });
    }
    group.finish();
}

fn subsets(c: &mut Criterion) {
    let scheme = TinyScheme::new(79, 5, 2, 3).unwrap();
    let mut group = c.benchmark_group("subset_leakage_79_5_m3_j2");
    group.sample_size(10);
    for (name, exec) in paths() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| subset_component_leakage(black_box(&scheme), 3, 2, &config(exec)).unwrap())
        });
    }
    group.finish();
}

fn impersonation(c: &mut Criterion) {
    let scheme = TinyScheme::new(79, 5, 2, 3).unwrap();
    let mut group = c.benchmark_group("ipa_exhaustive_79_5_m3");
    group.sample_size(10);
    for (name, exec) in paths() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                ipa_success_probability(
                    black_box(&scheme),
                    3,
                    ForgeStrategy::Exhaustive,
                    &config(exec),
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, linear, subsets, impersonation);
criterion_main!(benches);
