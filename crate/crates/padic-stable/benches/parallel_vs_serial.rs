//! Compares the crate's data-parallel execution path against a plain
//! sequential baseline on the two ensemble-style workloads: path simulation
//! and full character sweeps.  Build with `--no-default-features` to measure
//! the sequential fallback of the dispatch layer itself.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use padic_stable::par::{exec_mode, indexed_map};
use padic_stable::simulate::{DeltaCache, StopRule};
use padic_stable::{TowerConfig, TowerSpec};

fn t1() -> TowerSpec {
    let mut cfg = TowerConfig::new(2, 1.0, vec![(1, 1), (1, 2), (1, 4)]);
    cfg.seed = Some(17);
    TowerSpec::build(&cfg).unwrap()
}

fn bench_path_ensemble(c: &mut Criterion) {
    let tw = t1();
    let levy = tw.levy_table(3).unwrap();
    let samples = 256usize;
    let mut group = c.benchmark_group("path_ensemble");
    group.bench_with_input(
        BenchmarkId::new(exec_mode(), samples),
        &samples,
        |b, &k| {
            b.iter(|| {
                let paths = indexed_map(k, |i| {
                    tw.simulate_path_with(
                        &levy,
                        StopRule::Horizon(1.0),
                        i as u64,
                        &mut DeltaCache::new(),
                    )
                    .unwrap()
                });
                paths.len()
            })
        },
    );
    group.bench_with_input(
        BenchmarkId::new("sequential_baseline", samples),
        &samples,
        |b, &k| {
            b.iter(|| {
                let paths: Vec<_> = (0..k)
                    .map(|i| {
                        tw.simulate_path_with(
                            &levy,
                            StopRule::Horizon(1.0),
                            i as u64,
                            &mut DeltaCache::new(),
                        )
                        .unwrap()
                    })
                    .collect();
                paths.len()
            })
        },
    );
    group.finish();
}

fn bench_character_sweep(c: &mut Criterion) {
    let tw = t1();
    let lvl = tw.exact_level(3).unwrap();
    let count = lvl.duals.len();
    let mut group = c.benchmark_group("character_sweep");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new(exec_mode(), count), &count, |b, &k| {
        b.iter(|| {
            let exps = indexed_map(k, |i| lvl.char_exponent(i));
            exps.len()
        })
    });
    group.bench_with_input(
        BenchmarkId::new("sequential_baseline", count),
        &count,
        |b, &k| {
            b.iter(|| {
                let exps: Vec<_> = (0..k).map(|i| lvl.char_exponent(i)).collect();
                exps.len()
            })
        },
    );
    group.finish();
}

criterion_group!(benches, bench_path_ensemble, bench_character_sweep);
criterion_main!(benches);
