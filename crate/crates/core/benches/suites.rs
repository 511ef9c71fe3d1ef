use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use whitehead_sl3::par::Exec;
use whitehead_sl3::verify::{
    suite_cayley_hamilton, suite_closed_forms, suite_k_equals_f, suite_skew_lemmas,
};

type Suite = fn(u64, usize, Exec) -> whitehead_sl3::SuiteReport;

fn bench_suites(c: &mut Criterion) {
    let seed = 42;
    let suites: &[(&str, Suite)] = &[
        ("cayley_hamilton", suite_cayley_hamilton as fn(_, _, _) -> _),
        ("skew_lemmas", suite_skew_lemmas),
        ("closed_forms", suite_closed_forms),
        ("k_equals_f", suite_k_equals_f),
    ];
    for &(name, suite) in suites {
        let mut group = c.benchmark_group(name);
        for samples in [200usize, 1000] {
            group.bench_with_input(
                BenchmarkId::new("serial", samples),
                &samples,
                |b, &n| b.iter(|| suite(seed, n, Exec::Serial)),
            );
            group.bench_with_input(
                BenchmarkId::new("parallel", samples),
                &samples,
                |b, &n| b.iter(|| suite(seed, n, Exec::Parallel)),
            );
        }
        group.finish();
    }
}

criterion_group!(benches, bench_suites);
criterion_main!(benches);
