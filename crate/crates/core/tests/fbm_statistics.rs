use parisian_core::fbm::{build_grid, sample_bm_paths, sample_paths, FbmSampler};

/// Two-sample Kolmogorov–Smirnov statistic.
fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

#[test]
fn self_similar_marginals() {
    // B_H(2t)/2^H against B_H(t) at three times, independent path sets
    let grid = build_grid(0.0, 2.0, 0.05).unwrap();
    let n = 4000;
    let crit = 1.628 * (2.0 / n as f64).sqrt();
    for h in [0.2, 0.5, 0.8] {
        let sampler = FbmSampler::for_grid(h, &grid).unwrap();
        let first = sample_paths(&sampler, &grid, n, 21).unwrap();
        let second = sample_paths(&sampler, &grid, n, 22).unwrap();
        let scale = 2f64.powf(h);
        for (k, k2) in [(4, 8), (10, 20), (20, 40)] {
            assert!((grid.time(k2) - 2.0 * grid.time(k)).abs() < 1e-12);
            let scaled: Vec<f64> = (0..n).map(|i| first.value(i, k2) / scale).collect();
            let plain: Vec<f64> = (0..n).map(|i| second.value(i, k)).collect();
            let d = ks_statistic(scaled, plain);
            assert!(d < crit, "H={h} t={}: KS {d} >= {crit}", grid.time(k));
        }
    }
}

#[test]
fn brownian_increments_are_independent_with_the_right_variance() {
    let grid = build_grid(0.0, 1.0, 0.1).unwrap();
    let n = 20_000;
    let batch = sample_bm_paths(&grid, n, 3);
    let inc = |i: usize, k: usize| batch.value(i, k + 1) - batch.value(i, k);
    let var: f64 = (0..n).map(|i| inc(i, 3).powi(2)).sum::<f64>() / n as f64;
    let cov: f64 = (0..n).map(|i| inc(i, 3) * inc(i, 6)).sum::<f64>() / n as f64;
    // se of a sample variance is 0.1·√(2/n), of the cross moment 0.1/√n
    assert!((var - 0.1).abs() < 4.0 * 0.1 * (2.0 / n as f64).sqrt(), "{var}");
    assert!(cov.abs() < 4.0 * 0.1 / (n as f64).sqrt(), "{cov}");
}

#[test]
fn paths_do_not_depend_on_the_thread_count() {
    let grid = build_grid(-1.0, 1.0, 0.02).unwrap();
    let sampler = FbmSampler::for_grid(0.7, &grid).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| sample_paths(&sampler, &grid, 64, 5).unwrap())
    };
    let (a, b) = (run(1), run(3));
    for i in 0..64 {
        assert_eq!(a.path(i), b.path(i));
    }
    assert!(a.path(0).iter().any(|v| *v != 0.0));
}
