//! Sequential vs block-parallel execution of the bulk kernels.
//!
//!     cargo bench -p pretentious-core
//!     cargo bench -p pretentious-core --no-default-features   # both arms sequential

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pretentious_core::exponent::checkpoint_partial_sums_with;
use pretentious_core::multiplicative::coefficient_stream_with;
use pretentious_core::{DerivedFunctionKind, Execution, FactorSieve, PrimeFunctionSpec, Schedule};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn sieve_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("sieve_build");
    group.sample_size(10);
    for limit in [1_000_000u64, 10_000_000] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, limit), &limit, |b, &limit| {
                b.iter(|| FactorSieve::build_with(limit, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn partial_sums(c: &mut Criterion) {
    let limit = 10_000_000;
    let sieve = FactorSieve::build(limit).unwrap();
    let lam = PrimeFunctionSpec::liouville();
    let decay = PrimeFunctionSpec::power_decay(1.0, 0.5).unwrap();
    let schedule = Schedule::default();
    let mut group = c.benchmark_group("partial_sums");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("liouville_integer", name), |b| {
            b.iter(|| {
                checkpoint_partial_sums_with(
                    &lam,
                    DerivedFunctionKind::FPlain,
                    limit,
                    &schedule,
                    &sieve,
                    exec,
                )
                .unwrap()
            })
        });
        group.bench_function(BenchmarkId::new("power_decay_compensated", name), |b| {
            b.iter(|| {
                checkpoint_partial_sums_with(
                    &decay,
                    DerivedFunctionKind::HConv,
                    limit,
                    &schedule,
                    &sieve,
                    exec,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn streams(c: &mut Criterion) {
    let limit = 1_000_000;
    let sieve = FactorSieve::build(limit).unwrap();
    let spec = PrimeFunctionSpec::power_decay(1.0, 0.5).unwrap();
    let mut group = c.benchmark_group("coefficient_stream");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                coefficient_stream_with(&spec, DerivedFunctionKind::GConv, limit, &sieve, exec)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sieve_build, partial_sums, streams);
criterion_main!(benches);
