//! Parisian Pickands constant 𝓕_{2H}(L) by the ratio representation
//! E[ sup_t inf_{s∈[t,t+L]} e^{W(s)} / ∫ e^{W(t)} dt ],
//! W(t) = √2 B_H(t) − |t|^{2H}.

use serde::{Deserialize, Serialize};

use crate::asymptotics::normal_cdf;
use crate::error::{Error, Result};
use crate::estimate::{Estimate, SimConfig};
use crate::fbm::{build_grid, check_hurst, LatticeSampler};
use crate::window::{column, log_sum_exp, replicate, whole_steps, SupInfPlan};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PickandsQuery {
    pub h: f64,
    pub l: f64,
}

impl PickandsQuery {
    pub fn new(h: f64, l: f64) -> Result<Self> {
        check_hurst(h)?;
        if !(l >= 0.0 && l.is_finite()) {
            return Err(Error::invalid(format!("window length must be >= 0, got {l}")));
        }
        Ok(PickandsQuery { h, l })
    }
}

/// M = max(10L, 5).
pub fn default_truncation_pickands(l: f64) -> f64 {
    (10.0 * l).max(5.0)
}

pub fn default_config_pickands(l: f64, seed: u64) -> SimConfig {
    SimConfig::new(
        default_truncation_pickands(l),
        SimConfig::DEFAULT_TAU,
        SimConfig::DEFAULT_N,
        seed,
    )
}

/// Exact 𝓕_1(L):
/// (e^{−L/4} − √(πL) Φ(−√(L/2))) / (e^{−L/4} + √(πL) Φ(√(L/2))).
pub fn exact_f1(l: f64) -> f64 {
    let e = (-l / 4.0).exp();
    let r = (std::f64::consts::PI * l).sqrt();
    let x = (l / 2.0).sqrt();
    (e - r * normal_cdf(-x)) / (e + r * normal_cdf(x))
}

/// W(t) = √2 B_H(t) − |t|^{2H}.
#[inline]
fn w_trend(h: f64, t: f64) -> f64 {
    -t.abs().powf(2.0 * h)
}

/// Number of τ-steps in one η-step; η must be a whole multiple of τ.
fn eta_steps(cfg: &SimConfig) -> Result<usize> {
    let eta = cfg.eta.unwrap_or(cfg.tau);
    let k = whole_steps(eta, cfg.tau);
    if k < 1 || (k as f64 * cfg.tau - eta).abs() > 1e-9 * eta {
        return Err(Error::invalid(format!(
            "eta = {eta} must be a whole multiple of tau = {}",
            cfg.tau
        )));
    }
    Ok(k as usize)
}

/// Estimates 𝓕_{2H}(L) for every `(M, L)` pair from one set of paths.
/// Returns `result[m][l]`.
///
/// The denominator η Σ_{k∈[−M,M]_η} e^{W(kη)} uses the numerator's path.
pub fn simulate_pickands_sweep(h: f64, ls: &[f64], ms: &[f64], cfg: &SimConfig) -> Result<Vec<Vec<Estimate>>> {
    check_hurst(h)?;
    cfg.validate()?;
    let every = eta_steps(cfg)?;
    let eta = every as f64 * cfg.tau;
    let plan = SupInfPlan::new(cfg.tau, ms, ls)?;
    let sampler = plan.sampler(h)?;
    let grid = &plan.grid;
    let zero = grid.zero_index().expect("symmetric grid contains 0");
    // denominator index sets, one per truncation
    let denominators: Vec<Vec<usize>> = ms
        .iter()
        .map(|&m| {
            let j = whole_steps(m, eta) as usize;
            (0..=2 * j).map(|i| zero + (i * every) - j * every).collect()
        })
        .collect();
    let trend: Vec<f64> = (0..grid.len()).map(|i| w_trend(h, grid.time(i))).collect();
    let shift_trend: Vec<Vec<f64>> = plan
        .offsets
        .iter()
        .map(|&o| (0..grid.len() - 1).map(|i| w_trend(h, grid.time(i) + o)).collect())
        .collect();
    let nl = ls.len();
    let width = ms.len() * nl;
    let sqrt2 = std::f64::consts::SQRT_2;
    let ln_eta = eta.ln();
    let table = replicate(cfg.n, width, |rep, s, row| {
        s.main.resize(grid.len(), 0.0);
        s.shifted.resize(plan.offsets.len(), Vec::new());
        for v in s.shifted.iter_mut() {
            v.resize(grid.len() - 1, 0.0);
        }
        sampler.fill(cfg.seed, rep, &mut s.main, &mut s.shifted, &mut s.union);
        for (v, t) in s.main.iter_mut().zip(&trend) {
            *v = sqrt2 * *v + t;
        }
        for (vs, ts) in s.shifted.iter_mut().zip(&shift_trend) {
            for (v, t) in vs.iter_mut().zip(ts) {
                *v = sqrt2 * *v + t;
            }
        }
        plan.sup_inf(&s.main, &s.shifted, &mut s.minima, row);
        for (mi, idx) in denominators.iter().enumerate() {
            let log_den = ln_eta + log_sum_exp(idx.iter().map(|&i| s.main[i]));
            for v in &mut row[mi * nl..(mi + 1) * nl] {
                *v = (*v - log_den).exp();
            }
        }
    });
    Ok(ms
        .iter()
        .enumerate()
        .map(|(mi, &m)| {
            (0..nl)
                .map(|li| {
                    let config = SimConfig { m, eta: Some(eta), ..*cfg };
                    Estimate::from_samples(&column(&table, width, mi * nl + li), config)
                })
                .collect()
        })
        .collect())
}

pub fn simulate_pickands(q: &PickandsQuery, cfg: &SimConfig) -> Result<Estimate> {
    let mut sweep = simulate_pickands_sweep(q.h, &[q.l], &[cfg.m], cfg)?;
    Ok(sweep.remove(0).remove(0))
}

/// E[(∫_{−M}^{M} e^{W(t)} dt)^{−1}] with the trapezoid rule on the τ-grid.
///
/// Truncating the integral makes it smaller, so this overestimates the
/// full-line expectation.
pub fn estimate_inverse_integral_expectation(h: f64, cfg: &SimConfig) -> Result<Estimate> {
    check_hurst(h)?;
    cfg.validate()?;
    let k = whole_steps(cfg.m, cfg.tau);
    let grid = build_grid(-(k as f64) * cfg.tau, k as f64 * cfg.tau, cfg.tau)?;
    let sampler = LatticeSampler::new(h, grid.clone(), &[])?;
    let trend: Vec<f64> = (0..grid.len()).map(|i| w_trend(h, grid.time(i))).collect();
    let sqrt2 = std::f64::consts::SQRT_2;
    let last = grid.len() - 1;
    let table = replicate(cfg.n, 1, |rep, s, row| {
        s.main.resize(grid.len(), 0.0);
        sampler.fill(cfg.seed, rep, &mut s.main, &mut s.shifted, &mut s.union);
        for (v, t) in s.main.iter_mut().zip(&trend) {
            *v = sqrt2 * *v + t;
        }
        // trapezoid: interior weight τ, end weights τ/2
        let half = std::f64::consts::LN_2;
        let terms = s.main.iter().enumerate().map(|(i, &v)| {
            if i == 0 || i == last {
                v - half
            } else {
                v
            }
        });
        row[0] = (-(cfg.tau.ln() + log_sum_exp(terms))).exp();
    });
    Ok(Estimate::from_samples(&table, SimConfig { eta: None, ..*cfg }))
}

/// P(sup_{[0,1]} B(t) < m) = 2Φ(m) − 1 for standard Brownian motion.
pub fn bm_sup_below(m: f64) -> f64 {
    if m <= 0.0 {
        0.0
    } else {
        2.0 * normal_cdf(m) - 1.0
    }
}

/// Monte-Carlo P(max over the τ-grid of [0,1] of B_H < m) for each `m`.
/// The grid maximum undershoots the continuous supremum, so these are
/// upper estimates.
pub fn estimate_sup_below(h: f64, ms: &[f64], tau: f64, n: u64, seed: u64) -> Result<Vec<f64>> {
    check_hurst(h)?;
    let grid = build_grid(0.0, 1.0, tau)?;
    let sampler = LatticeSampler::new(h, grid.clone(), &[])?;
    let table = replicate(n, 1, |rep, s, row| {
        s.main.resize(grid.len(), 0.0);
        sampler.fill(seed, rep, &mut s.main, &mut s.shifted, &mut s.union);
        row[0] = s.main.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    });
    Ok(ms
        .iter()
        .map(|&m| table.iter().filter(|&&x| x < m).count() as f64 / n as f64)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PickandsLowerBound {
    /// inv_integral · e^{−L^{2H}} · max_m e^{−√2 m L^H} P(sup < m).
    pub bound: f64,
    /// The maximizing barrier level on the supplied grid.
    pub best_m: f64,
    /// inv_integral · P(sup < 1/√2) · e^{−L^{2H} − L^H}.
    pub simplified: f64,
}

/// Lower bound for 𝓕_{2H}(L) from an estimate of E[(∫e^W)^{−1}] and the
/// barrier probabilities m ↦ P(sup_{[0,1]} B_H < m) on a finite `m` grid.
pub fn pickands_lower_bound(
    q: &PickandsQuery,
    inv_integral: f64,
    m_grid: &[f64],
    barrier_probs: impl Fn(f64) -> f64,
) -> Result<PickandsLowerBound> {
    if !(inv_integral > 0.0) {
        return Err(Error::invalid(format!("inverse-integral constant must be positive, got {inv_integral}")));
    }
    if m_grid.is_empty() {
        return Err(Error::invalid("barrier grid is empty"));
    }
    let lh = q.l.powf(q.h);
    let base = inv_integral * (-(q.l.powf(2.0 * q.h))).exp();
    let sqrt2 = std::f64::consts::SQRT_2;
    let (best_m, best) = m_grid
        .iter()
        .map(|&m| (m, (-sqrt2 * m * lh).exp() * barrier_probs(m)))
        .fold((m_grid[0], f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let simplified = base * (-lh).exp() * barrier_probs(1.0 / sqrt2);
    Ok(PickandsLowerBound { bound: base * best, best_m, simplified })
}

/// Truncation-stability report: estimates at M₀·{1, 1.5, 2, 3, 4} from one set
/// of paths, the doubling differences |est(M) − est(2M)| for M ∈ {M₀, 1.5M₀,
/// 2M₀}, and the fitted decay rate c′ of ln|diff| ≈ const − c′ M^{2H}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MStabilityReport {
    pub ms: Vec<f64>,
    pub estimates: Vec<Estimate>,
    /// `(M, |est(M) − est(2M)|, combined standard error)`.
    pub doubling: Vec<(f64, f64, f64)>,
    pub fitted_c_prime: f64,
}

pub fn pickands_m_stability(q: &PickandsQuery, cfg: &SimConfig) -> Result<MStabilityReport> {
    let m0 = cfg.m;
    let ms: Vec<f64> = [1.0, 1.5, 2.0, 3.0, 4.0].iter().map(|f| f * m0).collect();
    let sweep = simulate_pickands_sweep(q.h, &[q.l], &ms, cfg)?;
    let estimates: Vec<Estimate> = sweep.into_iter().map(|mut v| v.remove(0)).collect();
    let doubling: Vec<(f64, f64, f64)> = [(0, 2), (1, 3), (2, 4)]
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (&estimates[i], &estimates[j]);
            (ms[i], (a.value - b.value).abs(), crate::stats::combined_std_error(a.std_error, b.std_error))
        })
        .collect();
    let xs: Vec<f64> = doubling.iter().map(|d| d.0.powf(2.0 * q.h)).collect();
    let ys: Vec<f64> = doubling.iter().map(|d| d.1.max(f64::MIN_POSITIVE).ln()).collect();
    let fitted_c_prime = -least_squares_slope(&xs, &ys);
    Ok(MStabilityReport { ms, estimates, doubling, fitted_c_prime })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
