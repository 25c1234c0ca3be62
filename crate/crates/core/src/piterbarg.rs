//! Piterbarg-type constant 𝓕_L^h for Brownian motion with the piecewise
//! linear drift h(s) = b·s·1(s<0) − a·s·1(s≥0).

use serde::{Deserialize, Serialize};

use crate::asymptotics::mills_psi;
use crate::error::{Error, Result};
use crate::estimate::{Estimate, SimConfig};
use crate::window::{column, replicate, SupInfPlan};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftSpec {
    /// Slope for s ≥ 0.
    pub a: f64,
    /// Slope for s < 0.
    pub b: f64,
}

impl DriftSpec {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::invalid(format!("drift slopes must be positive, got a={a} b={b}")));
        }
        Ok(DriftSpec { a, b })
    }

    pub fn min_slope(&self) -> f64 {
        self.a.min(self.b)
    }

    /// Exponent −|s| + h(s) of the functional.
    #[inline]
    pub fn trend(&self, s: f64) -> f64 {
        if s >= 0.0 {
            -(1.0 + self.a) * s
        } else {
            (1.0 + self.b) * s
        }
    }

    fn small_slope_warning(&self) -> Option<String> {
        (self.min_slope() < 1.0).then(|| {
            format!(
                "min(a, b) = {} < 1: the default truncation may be too short, consider a larger M",
                self.min_slope()
            )
        })
    }
}

/// M = (7 + L(3 + min(a,b))) / min(a,b).
pub fn default_truncation_piterbarg(d: &DriftSpec, l: f64) -> f64 {
    if let Some(w) = d.small_slope_warning() {
        log::warn!("{w}");
    }
    let m = d.min_slope();
    (7.0 + l * (3.0 + m)) / m
}

/// Two-sided Piterbarg constant at L = 0: 1 + 1/a + 1/b − 1/(a+b+1).
pub fn piterbarg_closed_form(d: &DriftSpec) -> f64 {
    1.0 + 1.0 / d.a + 1.0 / d.b - 1.0 / (d.a + d.b + 1.0)
}

/// `(2 e^{−L min(a,b)} Ψ(√(2L)), 1 + 1/a + 1/b − 1/(a+b+1))`.
pub fn piterbarg_bounds(d: &DriftSpec, l: f64) -> (f64, f64) {
    let lower = 2.0 * (-l * d.min_slope()).exp() * mills_psi((2.0 * l).sqrt());
    (lower, piterbarg_closed_form(d))
}

/// Bound on the tail contribution from outside [−M, M]:
/// e^{−aM}(1 + 1/a) + e^{−bM}(1 + 1/b).
pub fn piterbarg_truncation_bound(d: &DriftSpec, m: f64) -> f64 {
    (-d.a * m).exp() * (1.0 + 1.0 / d.a) + (-d.b * m).exp() * (1.0 + 1.0 / d.b)
}

/// Estimates 𝓕_L^h for every `(M, L)` pair from one set of paths, so the
/// results share random numbers. Returns `result[m][l]`.
pub fn simulate_piterbarg_sweep(
    d: &DriftSpec,
    ls: &[f64],
    ms: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<Vec<Estimate>>> {
    cfg.validate()?;
    let plan = SupInfPlan::new(cfg.tau, ms, ls)?;
    let sampler = plan.sampler(0.5)?;
    let grid = &plan.grid;
    let trend: Vec<f64> = (0..grid.len()).map(|i| d.trend(grid.time(i))).collect();
    let shift_trend: Vec<Vec<f64>> = plan
        .offsets
        .iter()
        .map(|&o| (0..grid.len() - 1).map(|i| d.trend(grid.time(i) + o)).collect())
        .collect();
    let width = ms.len() * ls.len();
    let sqrt2 = std::f64::consts::SQRT_2;
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
        for v in row.iter_mut() {
            *v = v.exp();
        }
    });
    let warning = d.small_slope_warning();
    Ok(ms
        .iter()
        .enumerate()
        .map(|(mi, &m)| {
            ls.iter()
                .enumerate()
                .map(|(li, &l)| {
                    let config = SimConfig { m, eta: None, ..*cfg };
                    let mut e = Estimate::from_samples(&column(&table, width, mi * ls.len() + li), config);
                    e.bounds = Some(piterbarg_bounds(d, l));
                    e.trunc_bound = Some(piterbarg_truncation_bound(d, m));
                    e.warnings.extend(warning.clone());
                    e
                })
                .collect()
        })
        .collect())
}

/// Monte-Carlo estimate of 𝓕_L^h:
/// mean over paths of sup_{t∈[−M,M]_τ} inf_{s∈[t,t+L]} e^{√2 B(s) − |s| + h(s)},
/// where the inner window is the grid points of [t, t+L] plus t+L itself.
pub fn simulate_piterbarg(d: &DriftSpec, l: f64, cfg: &SimConfig) -> Result<Estimate> {
    let mut sweep = simulate_piterbarg_sweep(d, &[l], &[cfg.m], cfg)?;
    Ok(sweep.remove(0).remove(0))
}

/// Default configuration: M from `default_truncation_piterbarg`, τ = 0.005,
/// n = 10⁴.
pub fn default_config_piterbarg(d: &DriftSpec, l: f64, seed: u64) -> SimConfig {
    SimConfig::new(
        default_truncation_piterbarg(d, l),
        SimConfig::DEFAULT_TAU,
        SimConfig::DEFAULT_N,
        seed,
    )
}

/// Discretization diagnostic: the estimate at `cfg.tau` and at `cfg.tau /
/// refine` with `refine²` times as many paths.
pub fn piterbarg_tau_refinement(
    d: &DriftSpec,
    l: f64,
    cfg: &SimConfig,
    refine: u32,
) -> Result<(Estimate, Estimate)> {
    let coarse = simulate_piterbarg(d, l, cfg)?;
    let fine_cfg = SimConfig {
        tau: cfg.tau / f64::from(refine),
        n: cfg.n * u64::from(refine * refine),
        seed: cfg.seed.wrapping_add(1),
        ..*cfg
    };
    Ok((coarse, simulate_piterbarg(d, l, &fine_cfg)?))
}
