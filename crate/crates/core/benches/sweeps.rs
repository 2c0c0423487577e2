use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cloning_core::cloner::{tau_grid, Cloner};
use cloning_core::exec::Exec;
use cloning_core::model::{BiasMode, QubitState};
use cloning_core::C64;

fn bloch_average(c: &mut Criterion) {
    let taus = tau_grid(6.0, 601);
    let cloner = Cloner::new(1, BiasMode::Lab(C64::new(0.0, 0.0), C64::new(8.0, 0.0)));
    let mut group = c.benchmark_group("bloch_average_16x16");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| black_box(cloner.with_exec(exec).averaged_tables(&taus, (16, 16)).unwrap()))
        });
    }
    group.finish();
}

fn two_atom_curve(c: &mut Criterion) {
    let taus = tau_grid(12.0, 1001);
    let q = QubitState::horizontal();
    let cloner = Cloner::new(2, BiasMode::Matched(3.0));
    let mut group = c.benchmark_group("two_atom_fidelity_curve");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| black_box(cloner.with_exec(exec).fidelity_curve(&q, &taus).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bloch_average, two_atom_curve);
criterion_main!(benches);
