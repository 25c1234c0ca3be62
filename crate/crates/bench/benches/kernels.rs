use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use parisian_core::fbm::{build_grid, cholesky_factor, grid_covariance, sample_bm_paths, sample_paths, FbmSampler};
use parisian_core::mc_ruin::{simulate_one_dim_parisian, RuinMCConfig};
use parisian_core::piterbarg::{simulate_piterbarg, DriftSpec};
use parisian_core::SimConfig;

fn cholesky(c: &mut Criterion) {
    let mut g = c.benchmark_group("cholesky");
    g.sample_size(10);
    for points in [250, 1000, 2000] {
        let grid = build_grid(0.0, 1.0, 1.0 / points as f64).unwrap();
        let cov = grid_covariance(0.3, &grid);
        g.bench_with_input(BenchmarkId::from_parameter(points), &cov, |b, cov| {
            b.iter(|| cholesky_factor(black_box(cov)).unwrap())
        });
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let grid = build_grid(-5.0, 5.0, 0.005).unwrap();
    c.bench_function("bm 100 paths x 2001 points", |b| b.iter(|| sample_bm_paths(&grid, 100, black_box(1))));
    let small = build_grid(0.0, 5.0, 0.01).unwrap();
    let sampler = FbmSampler::for_grid(0.3, &small).unwrap();
    c.bench_function("fbm 100 paths x 501 points", |b| {
        b.iter(|| sample_paths(&sampler, &small, 100, black_box(1)).unwrap())
    });
}

fn estimators(c: &mut Criterion) {
    let mut g = c.benchmark_group("estimators");
    g.sample_size(10);
    let d = DriftSpec::new(1.0, 1.0).unwrap();
    let cfg = SimConfig::new(7.0, 0.01, 1000, 1);
    g.bench_function("piterbarg n=1000 M=7 tau=0.01", |b| b.iter(|| simulate_piterbarg(&d, 0.5, &cfg).unwrap()));
    let mc = RuinMCConfig::new(2000, 1);
    g.bench_function("bm parisian ruin n=2000", |b| {
        b.iter(|| simulate_one_dim_parisian(0.5, 1.0, 1.0, 0.5, 0.2, &mc).unwrap())
    });
    g.finish();
}

criterion_group!(benches, cholesky, sampling, estimators);
criterion_main!(benches);
