use parisian_core::asymptotics::parisian_bm_exact;
use parisian_core::mc_ruin::{simulate_one_dim_parisian, simulate_two_dim_parisian, DelaySchedule, RuinMCConfig};
use parisian_core::model::normalize_quota_share;
use parisian_core::{ModelParams, QuotaShareInputs};

const N: u64 = 20_000;

fn one_dim(c: f64, q: f64, u: f64, t: f64, cfg: &RuinMCConfig) -> parisian_core::mc_ruin::RuinEstimate {
    simulate_one_dim_parisian(0.5, c, q, u, t, cfg).unwrap()
}

#[test]
fn brownian_fixtures_match_the_closed_form() {
    let cfg = RuinMCConfig::new(N, 11);
    for &(c, q, u, t) in &[
        (1.0, 1.0, 0.5, 0.0),
        (1.0, 1.0, 0.5, 0.2),
        (0.5, 1.0, 1.0, 0.5),
        (2.0, 0.5, 0.5, 0.1),
        (1.0, 2.0, 0.25, 1.0),
        (0.25, 1.0, 2.0, 0.3),
    ] {
        let e = one_dim(c, q, u, t, &cfg);
        let exact = parisian_bm_exact(c, q * u, t);
        assert!(
            (e.p_hat - exact).abs() <= 3.0 * e.ci95_half_width,
            "c={c} q={q} u={u} T={t}: {} vs {exact} (ci {})",
            e.p_hat,
            e.ci95_half_width
        );
    }
}

#[test]
fn tiny_delay_is_continuous_with_no_delay() {
    // a 1e-6 window resolves the path near the barrier very finely, so fewer paths
    let cfg = RuinMCConfig::new(4000, 12);
    let a = one_dim(1.0, 1.0, 0.5, 0.0, &cfg);
    let b = one_dim(1.0, 1.0, 0.5, 1e-6, &cfg);
    let ci = a.ci95_half_width.max(b.ci95_half_width);
    assert!((a.p_hat - b.p_hat).abs() <= 2.0 * ci, "{} vs {}", a.p_hat, b.p_hat);
}

#[test]
fn monotone_in_capital_and_delay() {
    let cfg = RuinMCConfig::new(N, 13);
    let by_u: Vec<f64> = [0.5, 0.75, 1.0].iter().map(|&u| one_dim(1.0, 1.0, u, 0.2, &cfg).p_hat).collect();
    assert!(by_u.windows(2).all(|w| w[1] <= w[0]), "{by_u:?}");
    let by_t: Vec<f64> = [0.0, 0.2, 0.5].iter().map(|&t| one_dim(1.0, 1.0, 0.5, t, &cfg).p_hat).collect();
    assert!(by_t.windows(2).all(|w| w[1] <= w[0]), "{by_t:?}");
}

#[test]
fn joint_ruin_is_rarer_than_either_company_alone() {
    let p = ModelParams::new(1.0, 0.75, 0.5, 1.0, 0.5, 0.5).unwrap();
    let cfg = RuinMCConfig::new(N, 14);
    let joint = simulate_two_dim_parisian(&p, 1.0, &cfg).unwrap();
    for i in [1, 2] {
        let single = one_dim(p.c(i), p.q(i), 1.0, 0.5, &cfg);
        assert!(
            joint.p_hat <= single.p_hat + 2.0 * single.ci95_half_width.max(joint.ci95_half_width),
            "company {i}: joint {} single {}",
            joint.p_hat,
            single.p_hat
        );
    }
}

#[test]
fn rescaling_the_capital_gives_identical_estimates() {
    // capitals scaled by κ together with the reference capital; a power of
    // two keeps the normalized barriers bit-identical
    let base = QuotaShareInputs { x1: 1.0, x2: 3.0, rho1: 2.0, rho2: 1.5, delta1: 0.4, delta2: 0.6 };
    let kappa = 8.0;
    let scaled = QuotaShareInputs { x1: kappa * base.x1, x2: kappa * base.x2, ..base };
    let p = normalize_quota_share(&base, 0.5, 0.5, 1.0).unwrap();
    let ps = normalize_quota_share(&scaled, 0.5, 0.5, kappa).unwrap();
    assert_eq!(p, ps);
    let cfg = RuinMCConfig::new(2000, 15);
    let a = simulate_two_dim_parisian(&p, 1.0, &cfg).unwrap();
    let b = simulate_two_dim_parisian(&ps, 1.0, &cfg).unwrap();
    assert_eq!(a.hits, b.hits);
    assert_eq!(a.p_hat.to_bits(), b.p_hat.to_bits());
}

#[test]
fn refining_the_step_stays_within_the_interval() {
    let coarse = RuinMCConfig::new(N, 16);
    let a = one_dim(1.0, 1.0, 0.5, 0.2, &coarse);
    let fine = RuinMCConfig { step: Some(a.step / 2.0), ..coarse };
    let b = one_dim(1.0, 1.0, 0.5, 0.2, &fine);
    assert!((a.p_hat - b.p_hat).abs() <= 2.0 * a.ci95_half_width, "{} vs {}", a.p_hat, b.p_hat);
}

#[test]
fn longer_horizon_barely_moves_the_estimate() {
    let cfg = RuinMCConfig::new(N, 17);
    let a = one_dim(1.0, 1.0, 0.5, 0.2, &cfg);
    let longer = RuinMCConfig { horizon: Some(1.5 * a.horizon), ..cfg };
    let b = one_dim(1.0, 1.0, 0.5, 0.2, &longer);
    assert!((a.p_hat - b.p_hat).abs() <= 2.0 * a.ci95_half_width, "{} vs {}", a.p_hat, b.p_hat);
}

#[test]
fn fractional_paths_use_the_cholesky_grid() {
    let cfg = RuinMCConfig { schedule: DelaySchedule::Fixed, ..RuinMCConfig::new(2000, 18) };
    let e = simulate_one_dim_parisian(0.3, 1.0, 1.0, 0.5, 0.2, &cfg).unwrap();
    assert_eq!(e.method, "cholesky");
    assert!(e.p_hat > 0.0 && e.p_hat < 1.0);
    assert!(e.ci95.0 <= e.p_hat && e.p_hat <= e.ci95.1);
}
