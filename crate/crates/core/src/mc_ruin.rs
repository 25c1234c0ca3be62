//! Direct Monte-Carlo estimation of one- and two-dimensional Parisian ruin
//! probabilities at moderate `u`.
//!
//! After self-similar rescaling the event is
//! ∃ t ≥ 0 : B_H(s) > u^{1−H} g(s) for all s ∈ [t, t + T_u/u],
//! with g(s) = max_i (c_i s + q_i) (one line in the one-dimensional case).
//!
//! For H = 1/2 paths are built on a coarse skeleton and refined by Brownian
//! bridges only where the barrier is close, down to the configured step; an
//! interval is left unrefined once the bridge crossing probability falls
//! below 1e-12. A replication stops early once the chance of ever reaching
//! the barrier again is below 1e-9. For H ≠ 1/2 paths come from a Cholesky
//! factor on the uniform grid [0, horizon].

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::asymptotics::mills_psi;
use crate::error::{Error, Result};
use crate::fbm::{check_hurst, FbmSampler};
use crate::model::{critical_times, ModelParams};
use crate::rng::{keyed_normal, stream, LANE_MAIN, LANE_MIDPOINT};
use crate::stats::clopper_pearson;
use crate::window::{replicate, whole_steps};

/// Bridge crossing probability below which an interval is not refined.
const CERTIFY_EPS: f64 = 1e-12;
/// Probability of a later crossing below which a replication stops.
const STOP_EPS: f64 = 1e-9;
/// Default horizon extends until the standardized barrier is this far above
/// its minimum.
const HORIZON_Z_GAP: f64 = 4.0;
/// Largest Cholesky grid the fBm path accepts.
pub const MAX_FBM_POINTS: usize = crate::fbm::MAX_CHOLESKY_POINTS;
/// Default bridge resolution relative to the grid-step rule.
const BRIDGE_REFINEMENT: f64 = 1024.0;
const MAX_BRIDGE_DEPTH: u32 = 33;

/// How the Parisian delay T_u depends on `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DelaySchedule {
    /// T_u = T·u^{2−1/H}, the scaling under which the asymptotics hold.
    #[default]
    Scaled,
    /// T_u = T.
    Fixed,
}

impl DelaySchedule {
    pub fn delay(&self, h: f64, t: f64, u: f64) -> f64 {
        match self {
            DelaySchedule::Scaled => t * u.powf(2.0 - 1.0 / h),
            DelaySchedule::Fixed => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuinMCConfig {
    /// Simulation end in rescaled time; derived from the model when absent.
    pub horizon: Option<f64>,
    /// Grid step (H ≠ 1/2) or finest bridge resolution (H = 1/2), rounded
    /// down so that it divides the window; derived when absent.
    pub step: Option<f64>,
    pub n: u64,
    pub seed: u64,
    pub schedule: DelaySchedule,
}

impl RuinMCConfig {
    pub fn new(n: u64, seed: u64) -> Self {
        RuinMCConfig { horizon: None, step: None, n, seed, schedule: DelaySchedule::Scaled }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuinEstimate {
    pub p_hat: f64,
    pub ci95_half_width: f64,
    /// Clopper–Pearson 95% interval.
    pub ci95: (f64, f64),
    pub n: u64,
    pub hits: u64,
    pub u: f64,
    /// T_u in original time.
    pub delay: f64,
    /// Window T_u/u in rescaled time.
    pub window: f64,
    pub horizon: f64,
    pub step: f64,
    pub seed: u64,
    pub method: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// True iff some grid time t has every grid point of [t, t + window_len]
/// strictly above the barrier. Windows running past the last grid point do
/// not count. `times` must be uniform.
pub fn sup_inf_crossing(times: &[f64], values: &[f64], barrier: impl Fn(f64) -> f64, window_len: f64) -> bool {
    if times.is_empty() {
        return false;
    }
    let k = if window_len > 0.0 {
        if times.len() < 2 {
            return false;
        }
        whole_steps(window_len, times[1] - times[0]) as usize
    } else {
        0
    };
    let mut run = 0usize;
    for (&t, &v) in times.iter().zip(values) {
        if v > barrier(t) {
            run += 1;
            if run > k {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

/// The rescaled crossing problem shared by both entry points.
struct Problem {
    h: f64,
    /// Barrier lines (slope, intercept) already multiplied by u^{1−H}.
    lines: Vec<(f64, f64)>,
    window: f64,
    /// Location of the maximal variance of B_H(s)/g(s).
    s_max: f64,
    /// Scale used for default steps and horizons.
    s_ref: f64,
    /// Barrier in standard deviations at `s_max`.
    z_min: f64,
}

impl Problem {
    fn new(h: f64, lines: &[(f64, f64)], candidates: &[f64], u: f64, window: f64) -> Self {
        let scale = u.powf(1.0 - h);
        let g = |s: f64| lines.iter().map(|&(c, q)| c * s + q).fold(f64::NEG_INFINITY, f64::max);
        let s_max = candidates
            .iter()
            .copied()
            .filter(|s| *s > 0.0)
            .max_by(|a, b| (a.powf(h) / g(*a)).total_cmp(&(b.powf(h) / g(*b))))
            .expect("positive candidate");
        let s_ref = candidates.iter().copied().fold(0.0, f64::max);
        Problem {
            h,
            lines: lines.iter().map(|&(c, q)| (scale * c, scale * q)).collect(),
            window,
            s_max,
            s_ref,
            z_min: scale * g(s_max) / s_max.powf(h),
        }
    }

    fn barrier(&self, s: f64) -> f64 {
        self.lines.iter().map(|&(m, b)| m * s + b).fold(f64::NEG_INFINITY, f64::max)
    }

    fn z(&self, s: f64) -> f64 {
        self.barrier(s) / s.powf(self.h)
    }

    fn default_horizon(&self) -> f64 {
        let base = self.s_ref + 3.0 * self.window.max(1.0);
        let target = self.z_min + HORIZON_Z_GAP;
        let mut hi = self.s_max.max(1e-12) * 2.0;
        while self.z(hi) < target {
            hi *= 2.0;
        }
        let mut lo = self.s_max;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.z(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if self.h == 0.5 {
            base.max(hi)
        } else {
            // Cholesky cost is quadratic in the horizon and z grows slowly for H near 1
            base.max(hi.min(4.0 * base))
        }
    }

    /// Step rule: a tenth of the window, or s_ref/200 without a window.
    fn grid_step(&self) -> f64 {
        if self.window > 0.0 {
            self.window / 10.0
        } else {
            self.s_ref / 200.0
        }
    }

    /// Largest step ≤ `step` dividing the window.
    fn fit_step(&self, step: f64) -> (f64, u64) {
        if self.window > 0.0 {
            let k = (self.window / step).ceil().max(1.0);
            (self.window / k, k as u64)
        } else {
            (step, 0)
        }
    }
}

fn run(problem: Problem, u: f64, delay: f64, cfg: &RuinMCConfig) -> Result<RuinEstimate> {
    if cfg.n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let horizon = match cfg.horizon {
        Some(hz) if hz > 0.0 && hz.is_finite() => hz,
        Some(hz) => return Err(Error::invalid(format!("horizon must be positive, got {hz}"))),
        None => problem.default_horizon(),
    };
    let bm = problem.h == 0.5;
    let requested = match cfg.step {
        Some(s) if s > 0.0 && s.is_finite() => s,
        Some(s) => return Err(Error::invalid(format!("step must be positive, got {s}"))),
        None if bm => problem.grid_step().min(problem.s_ref / 200.0) / BRIDGE_REFINEMENT,
        None => problem.grid_step(),
    };
    let (step, kw) = problem.fit_step(requested);
    let hits = if bm {
        bridge_hits(&problem, horizon, step, kw, cfg)?
    } else {
        grid_hits(&problem, horizon, step, cfg)?
    };
    let (lo, hi) = clopper_pearson(hits, cfg.n, 0.05);
    let mut warnings = Vec::new();
    let proxy = mills_psi(problem.z_min);
    if hits == 0 && (cfg.n as f64) * proxy < 5.0 {
        warnings.push(format!(
            "InfeasibleProbability: no ruined paths and n·Ψ(z_min) = {:.3e} < 5; u = {u} is too large for plain Monte Carlo",
            cfg.n as f64 * proxy
        ));
    }
    Ok(RuinEstimate {
        p_hat: hits as f64 / cfg.n as f64,
        ci95_half_width: 0.5 * (hi - lo),
        ci95: (lo, hi),
        n: cfg.n,
        hits,
        u,
        delay,
        window: problem.window,
        horizon,
        step,
        seed: cfg.seed,
        method: if bm { "bridge" } else { "cholesky" }.into(),
        warnings,
    })
}

fn grid_hits(problem: &Problem, horizon: f64, step: f64, cfg: &RuinMCConfig) -> Result<u64> {
    let k = (horizon / step).ceil() as usize;
    if k + 1 > MAX_FBM_POINTS {
        return Err(Error::StepTooSmall { points: k as u64 + 1, limit: MAX_FBM_POINTS as u64 });
    }
    let times: Vec<f64> = (0..=k).map(|i| i as f64 * step).collect();
    let barrier: Vec<f64> = times.iter().map(|&t| problem.barrier(t)).collect();
    let sampler = FbmSampler::new(problem.h, &times)?;
    let table = replicate(cfg.n, 1, |rep, s, row| {
        s.main.resize(times.len(), 0.0);
        sampler.fill(cfg.seed, rep, &mut s.main);
        let ruined = sup_inf_crossing(&times, &s.main, |t| barrier[(t / step).round() as usize], problem.window);
        row[0] = if ruined { 1.0 } else { 0.0 };
    });
    Ok(table.iter().filter(|&&x| x > 0.0).count() as u64)
}

/// Per-replication state of the bridge walker.
struct Walker<'a> {
    problem: &'a Problem,
    step: f64,
    kw: u64,
    depth: u32,
    midpoints: rand_chacha::ChaCha8Rng,
    run_start: Option<u64>,
    ruined: bool,
}

impl Walker<'_> {
    fn visit(&mut self, idx: u64, x: f64) {
        if x > self.problem.barrier(idx as f64 * self.step) {
            let start = *self.run_start.get_or_insert(idx);
            if idx - start >= self.kw {
                self.ruined = true;
            }
        } else {
            self.run_start = None;
        }
    }

    /// Whether a Brownian bridge between the two values certainly stays on
    /// one side of the barrier: above (`Some(true)`) or below (`Some(false)`).
    fn certify(&self, ia: u64, xa: f64, ib: u64, xb: f64) -> Option<bool> {
        let (sa, sb) = (ia as f64 * self.step, ib as f64 * self.step);
        let dt = sb - sa;
        let mut dip = 0.0;
        let mut above = true;
        let mut below = false;
        for &(m, b) in &self.problem.lines {
            let ga = xa - (m * sa + b);
            let gb = xb - (m * sb + b);
            if ga > 0.0 && gb > 0.0 {
                dip += (-2.0 * ga * gb / dt).exp();
            } else {
                above = false;
                if ga < 0.0 && gb < 0.0 && (-2.0 * ga * gb / dt).exp() < CERTIFY_EPS {
                    below = true;
                }
            }
        }
        if above && dip < CERTIFY_EPS {
            Some(true)
        } else if below {
            Some(false)
        } else {
            None
        }
    }

    fn above(&self, idx: u64, x: f64) -> bool {
        x > self.problem.barrier(idx as f64 * self.step)
    }

    fn midpoint(&mut self, skeleton: u64, node: u64, ia: u64, xa: f64, ib: u64, xb: f64) -> (u64, f64) {
        let sd = (0.25 * (ib - ia) as f64 * self.step).sqrt();
        let z = keyed_normal(&mut self.midpoints, (skeleton << 34) | node);
        ((ia + ib) / 2, 0.5 * (xa + xb) + sd * z)
    }

    /// Walks the open interval between δ-indices `ia < ib`, refining
    /// wherever a crossing cannot be excluded, then visits `ib`. Used
    /// without a window, where any point above the barrier ruins.
    #[allow(clippy::too_many_arguments)]
    fn interval(&mut self, skeleton: u64, node: u64, level: u32, ia: u64, xa: f64, ib: u64, xb: f64) {
        if self.ruined {
            return;
        }
        if level < self.depth && self.certify(ia, xa, ib, xb).is_none() {
            let (im, xm) = self.midpoint(skeleton, node, ia, xa, ib, xb);
            self.interval(skeleton, 2 * node, level + 1, ia, xa, im, xm);
            self.interval(skeleton, 2 * node + 1, level + 1, im, xm, ib, xb);
            return;
        }
        self.visit(ib, xb);
    }

    /// With `ia` above: the last index of the run starting at `ia`, or
    /// `None` when the path stays above through `ib`.
    #[allow(clippy::too_many_arguments)]
    fn run_end(&mut self, skeleton: u64, node: u64, level: u32, ia: u64, xa: f64, ib: u64, xb: f64) -> Option<u64> {
        if level == self.depth {
            return if self.above(ib, xb) { None } else { Some(ia) };
        }
        if self.certify(ia, xa, ib, xb) == Some(true) {
            return None;
        }
        let (im, xm) = self.midpoint(skeleton, node, ia, xa, ib, xb);
        if let Some(e) = self.run_end(skeleton, 2 * node, level + 1, ia, xa, im, xm) {
            return Some(e);
        }
        self.run_end(skeleton, 2 * node + 1, level + 1, im, xm, ib, xb)
    }

    /// With `ib` above: the first index j ≥ `ia` such that every point of
    /// [j, ib] is above.
    #[allow(clippy::too_many_arguments)]
    fn run_begin(&mut self, skeleton: u64, node: u64, level: u32, ia: u64, xa: f64, ib: u64, xb: f64) -> u64 {
        if level == self.depth {
            return if self.above(ia, xa) { ia } else { ib };
        }
        if self.certify(ia, xa, ib, xb) == Some(true) {
            return ia;
        }
        let (im, xm) = self.midpoint(skeleton, node, ia, xa, ib, xb);
        let r = self.run_begin(skeleton, 2 * node + 1, level + 1, im, xm, ib, xb);
        if r > im {
            return r;
        }
        self.run_begin(skeleton, 2 * node, level + 1, ia, xa, im, xm)
    }

    /// Walks an interval when the window is positive, bisecting until the
    /// pieces are no longer than the window or certified.
    #[allow(clippy::too_many_arguments)]
    fn segment(&mut self, skeleton: u64, node: u64, level: u32, ia: u64, xa: f64, ib: u64, xb: f64) {
        if self.ruined {
            return;
        }
        if ib - ia <= self.kw {
            self.windowed(skeleton, node, level, ia, xa, ib, xb);
            return;
        }
        match self.certify(ia, xa, ib, xb) {
            Some(true) => {
                self.run_start.get_or_insert(ia);
                self.ruined = true;
            }
            Some(false) => self.run_start = None,
            None => {
                let (im, xm) = self.midpoint(skeleton, node, ia, xa, ib, xb);
                self.segment(skeleton, 2 * node, level + 1, ia, xa, im, xm);
                self.segment(skeleton, 2 * node + 1, level + 1, im, xm, ib, xb);
            }
        }
    }

    /// An interval no longer than the window. A run that both starts and
    /// ends inside it is shorter than the window, so only the end of an
    /// already active run and the start of the run alive at `ib` need
    /// resolving.
    #[allow(clippy::too_many_arguments)]
    fn windowed(&mut self, skeleton: u64, node: u64, level: u32, ia: u64, xa: f64, ib: u64, xb: f64) {
        if let Some(s0) = self.run_start {
            if ib - s0 >= self.kw {
                match self.run_end(skeleton, node, level, ia, xa, ib, xb) {
                    Some(e) if e - s0 < self.kw => {}
                    _ => {
                        self.ruined = true;
                        return;
                    }
                }
            }
        }
        if !self.above(ib, xb) {
            self.run_start = None;
            return;
        }
        let r = self.run_begin(skeleton, node, level, ia, xa, ib, xb);
        if r > ia || self.run_start.is_none() {
            self.run_start = Some(r);
        }
        if ib - self.run_start.unwrap() >= self.kw {
            self.ruined = true;
        }
    }

    /// Upper bound on the probability of ever reaching the barrier from
    /// value `x` at time `s`.
    fn later_crossing_bound(&self, s: f64, x: f64) -> f64 {
        self.problem
            .lines
            .iter()
            .map(|&(m, b)| {
                let gap = m * s + b - x;
                if gap > 0.0 {
                    (-2.0 * m * gap).exp()
                } else {
                    1.0
                }
            })
            .fold(1.0, f64::min)
    }
}

fn bridge_hits(problem: &Problem, horizon: f64, step: f64, kw: u64, cfg: &RuinMCConfig) -> Result<u64> {
    // skeleton spacing: a quarter window, floored so that tiny windows do
    // not explode the skeleton
    let target = (0.01 * problem.s_ref).min(if problem.window > 0.0 {
        (problem.window / 4.0).max(1e-4 * problem.s_ref)
    } else {
        f64::INFINITY
    });
    let depth = (target / step).log2().round().clamp(0.0, MAX_BRIDGE_DEPTH as f64) as u32;
    let stride = 1u64 << depth;
    let coarse = stride as f64 * step;
    let n_skeleton = (horizon / coarse).ceil() as u64;
    let table = replicate(cfg.n, 1, |rep, _, row| {
        let mut rng = stream(cfg.seed, LANE_MAIN, rep);
        let mut w = Walker {
            problem,
            step,
            kw,
            depth,
            midpoints: stream(cfg.seed, LANE_MIDPOINT, rep),
            run_start: None,
            ruined: false,
        };
        let sd = coarse.sqrt();
        let mut x = 0.0;
        w.visit(0, 0.0);
        for k in 0..n_skeleton {
            let next = x + sd * rng.sample::<f64, _>(StandardNormal);
            if kw == 0 {
                w.interval(k, 1, 0, k * stride, x, (k + 1) * stride, next);
            } else {
                w.segment(k, 1, 0, k * stride, x, (k + 1) * stride, next);
            }
            x = next;
            if w.ruined {
                break;
            }
            if w.run_start.is_none() && w.later_crossing_bound((k + 1) as f64 * coarse, x) < STOP_EPS {
                break;
            }
        }
        row[0] = if w.ruined { 1.0 } else { 0.0 };
    });
    Ok(table.iter().filter(|&&x| x > 0.0).count() as u64)
}

/// Simultaneous Parisian ruin of both companies.
pub fn simulate_two_dim_parisian(p: &ModelParams, u: f64, cfg: &RuinMCConfig) -> Result<RuinEstimate> {
    p.validate()?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::invalid(format!("u must be positive, got {u}")));
    }
    let delay = cfg.schedule.delay(p.h, p.t, u);
    let ct = critical_times(p);
    let problem = Problem::new(
        p.h,
        &[(p.c1, p.q1), (p.c2, p.q2)],
        &[ct.t_star, ct.t1, ct.t2],
        u,
        delay / u,
    );
    run(problem, u, delay, cfg)
}

/// Parisian ruin of q·u + c·t − B_H(t) with delay T_u.
pub fn simulate_one_dim_parisian(h: f64, c: f64, q: f64, u: f64, t: f64, cfg: &RuinMCConfig) -> Result<RuinEstimate> {
    check_hurst(h)?;
    if !(c > 0.0 && q > 0.0 && u > 0.0 && t >= 0.0) {
        return Err(Error::invalid(format!("need c, q, u > 0 and T >= 0, got c={c} q={q} u={u} T={t}")));
    }
    let delay = cfg.schedule.delay(h, t, u);
    let t1 = h * q / ((1.0 - h) * c);
    let problem = Problem::new(h, &[(c, q)], &[t1], u, delay / u);
    run(problem, u, delay, cfg)
}

/// Ψ of the standardized barrier at its lowest point: the probability that
/// B_H exceeds the two-dimensional barrier at the single most likely time.
/// Used to judge whether plain Monte Carlo can see the event at all.
pub fn crossing_proxy(p: &ModelParams, u: f64) -> f64 {
    let ct = critical_times(p);
    let problem = Problem::new(p.h, &[(p.c1, p.q1), (p.c2, p.q2)], &[ct.t_star, ct.t1, ct.t2], u, 0.0);
    mills_psi(problem.z_min)
}

/// One-dimensional counterpart of [`crossing_proxy`].
pub fn crossing_proxy_one_dim(h: f64, c: f64, q: f64, u: f64) -> f64 {
    let t1 = h * q / ((1.0 - h) * c);
    mills_psi(Problem::new(h, &[(c, q)], &[t1], u, 0.0).z_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{classical_bm_ruin, parisian_bm_exact};

    #[test]
    fn crossing_examples() {
        let times: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        assert!(sup_inf_crossing(&times, &[2.0; 10], |_| 1.0, 0.5));
        let mut v = vec![2.0; 10];
        v[4] = 0.0;
        assert!(!sup_inf_crossing(&times, &v, |_| 1.0, 0.5));
        assert!(sup_inf_crossing(&times, &v, |_| 1.0, 0.4));
        assert!(!sup_inf_crossing(&times, &[0.5; 10], |_| 1.0, 0.0));
        assert!(!sup_inf_crossing(&times, &[2.0; 10], |_| 1.0, 1.0));
    }

    #[test]
    fn crossing_matches_brute_force() {
        let mut rng = stream(42, 0, 0);
        for _ in 0..1000 {
            let n = rng.random_range(1..40usize);
            let times: Vec<f64> = (0..n).map(|i| i as f64 * 0.25).collect();
            let vals: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let bar: f64 = rng.random_range(-0.5..0.5);
            let k = rng.random_range(0..6usize);
            let len = k as f64 * 0.25;
            let brute = (0..n).any(|i| i + k < n && (i..=i + k).all(|j| vals[j] > bar));
            assert_eq!(sup_inf_crossing(&times, &vals, |_| bar, len), brute);
        }
    }

    #[test]
    fn tiny_u_ruins_almost_surely() {
        let e = simulate_one_dim_parisian(0.5, 1.0, 1.0, 0.01, 0.0, &RuinMCConfig::new(2000, 1)).unwrap();
        assert!(e.p_hat >= 0.8, "{e:?}");
        assert!((e.p_hat - classical_bm_ruin(1.0, 0.01)).abs() <= 3.0 * e.ci95_half_width + 0.01);
    }

    #[test]
    fn brownian_one_dim_matches_exact() {
        let e = simulate_one_dim_parisian(0.5, 1.0, 1.0, 0.5, 0.2, &RuinMCConfig::new(20_000, 2)).unwrap();
        let exact = parisian_bm_exact(1.0, 0.5, 0.2);
        assert!((e.p_hat - exact).abs() <= 3.0 * e.ci95_half_width, "{} vs {exact}", e.p_hat);
        assert_eq!(e.method, "bridge");
    }

    #[test]
    fn estimates_are_reproducible() {
        let cfg = RuinMCConfig::new(500, 3);
        let a = simulate_one_dim_parisian(0.5, 1.0, 1.0, 0.5, 0.2, &cfg).unwrap();
        let b = simulate_one_dim_parisian(0.5, 1.0, 1.0, 0.5, 0.2, &cfg).unwrap();
        assert_eq!(a, b);
        let p = ModelParams::new(1.0, 0.25, 0.25, 0.75, 0.25, 1.0).unwrap();
        let cfg = RuinMCConfig { schedule: DelaySchedule::Fixed, ..RuinMCConfig::new(200, 3) };
        let a = simulate_two_dim_parisian(&p, 1.0, &cfg).unwrap();
        assert_eq!(a, simulate_two_dim_parisian(&p, 1.0, &cfg).unwrap());
        assert_eq!(a.method, "cholesky");
    }

    #[test]
    fn step_divides_the_window() {
        let cfg = RuinMCConfig { step: Some(0.03), ..RuinMCConfig::new(10, 0) };
        let e = simulate_one_dim_parisian(0.7, 1.0, 1.0, 1.0, 0.25, &cfg).unwrap();
        let k = e.window / e.step;
        assert!((k - k.round()).abs() < 1e-9 && e.step <= 0.03);
    }

    #[test]
    fn fbm_grid_is_capped() {
        let cfg = RuinMCConfig { step: Some(1e-4), ..RuinMCConfig::new(10, 0) };
        assert!(matches!(
            simulate_one_dim_parisian(0.7, 1.0, 1.0, 1.0, 0.0, &cfg),
            Err(Error::StepTooSmall { .. })
        ));
    }

    #[test]
    fn hopeless_u_warns() {
        let e = simulate_one_dim_parisian(0.5, 1.0, 1.0, 60.0, 0.0, &RuinMCConfig::new(100, 0)).unwrap();
        assert_eq!(e.hits, 0);
        assert!(e.warnings.iter().any(|w| w.starts_with("InfeasibleProbability")));
    }

    #[test]
    fn proxy_matches_single_point_tail() {
        // BM, one barrier: z_min = 2√(cqu) at t1 = q/c
        let v = crossing_proxy_one_dim(0.5, 1.0, 1.0, 4.0);
        assert!((v - mills_psi(4.0)).abs() < 1e-15);
        let p = ModelParams::new(1.0, 0.25, 0.25, 0.75, 0.25, 1.0).unwrap();
        assert!(crossing_proxy(&p, 2.0) < crossing_proxy(&p, 1.0));
    }

    #[test]
    fn scaled_schedule_at_half_is_fixed() {
        assert_eq!(DelaySchedule::Scaled.delay(0.5, 0.3, 7.0), 0.3);
        assert!((DelaySchedule::Scaled.delay(0.25, 1.0, 4.0) - 0.0625).abs() < 1e-15);
    }
}
