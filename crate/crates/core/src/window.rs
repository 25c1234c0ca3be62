//! Discrete sup-inf functional shared by the Piterbarg and Pickands
//! estimators, evaluated for several truncations `M` and window lengths `L`
//! on one set of paths.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fbm::{build_grid, Grid, LatticeSampler};

/// Relative slack when deciding whether a length is a whole number of steps.
const LATTICE_SLACK: f64 = 1e-9;

/// Number of whole steps in `x` (≥ 0), tolerating representation error.
pub(crate) fn whole_steps(x: f64, step: f64) -> i64 {
    let r = x / step;
    let nearest = r.round();
    if (r - nearest).abs() <= LATTICE_SLACK * nearest.max(1.0) {
        nearest as i64
    } else {
        r.floor() as i64
    }
}

/// Inner window `{t, t+τ, …, t+kw·τ} ∪ {t+L}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Window {
    pub kw: usize,
    /// Which shifted point set holds `t + L` when `L` is off the lattice.
    pub offset: Option<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct SupInfPlan {
    pub grid: Grid,
    pub offsets: Vec<f64>,
    pub windows: Vec<Window>,
    /// Grid index range of `[−M, M]_τ` for each truncation.
    pub sup_ranges: Vec<(usize, usize)>,
}

impl SupInfPlan {
    /// One grid `[−max M, max M + max L]_τ` serving every `(M, L)` pair.
    pub fn new(tau: f64, ms: &[f64], ls: &[f64]) -> Result<Self> {
        if ms.is_empty() || ls.is_empty() {
            return Err(Error::invalid("need at least one truncation and one window"));
        }
        if let Some(l) = ls.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
            return Err(Error::invalid(format!("window length must be >= 0, got {l}")));
        }
        if let Some(m) = ms.iter().find(|m| !(**m >= tau && m.is_finite())) {
            return Err(Error::invalid(format!("need tau <= M, got M={m} tau={tau}")));
        }
        let half: Vec<i64> = ms.iter().map(|&m| whole_steps(m, tau)).collect();
        let k_max = *half.iter().max().unwrap();
        let mut offsets: Vec<f64> = Vec::new();
        let mut windows = Vec::with_capacity(ls.len());
        let mut reach = 0i64;
        for &l in ls {
            let kw = whole_steps(l, tau);
            let delta = l - kw as f64 * tau;
            let offset = if delta > LATTICE_SLACK * tau {
                let idx = match offsets.iter().position(|&d| d == delta) {
                    Some(i) => i,
                    None => {
                        offsets.push(delta);
                        offsets.len() - 1
                    }
                };
                reach = reach.max(kw + 1);
                Some(idx)
            } else {
                reach = reach.max(kw);
                None
            };
            windows.push(Window { kw: kw as usize, offset });
        }
        let k_lo = -k_max;
        let k_hi = k_max + reach.max(1);
        let grid = build_grid(k_lo as f64 * tau, k_hi as f64 * tau, tau)?;
        debug_assert_eq!((grid.k_lo, grid.k_hi), (k_lo, k_hi));
        let sup_ranges = half
            .iter()
            .map(|&h| ((k_max - h) as usize, (k_max + h) as usize))
            .collect();
        Ok(SupInfPlan { grid, offsets, windows, sup_ranges })
    }

    pub fn sampler(&self, hurst: f64) -> Result<LatticeSampler> {
        LatticeSampler::new(hurst, self.grid.clone(), &self.offsets)
    }

    /// `out[m * windows + w] = max_{t ∈ [−M_m, M_m]} min_{s ∈ window_w(t)} f(s)`.
    pub fn sup_inf(&self, f: &[f64], f_shift: &[Vec<f64>], minima: &mut Vec<f64>, out: &mut [f64]) {
        let nw = self.windows.len();
        let lo = self.sup_ranges.iter().map(|r| r.0).min().unwrap();
        let hi = self.sup_ranges.iter().map(|r| r.1).max().unwrap();
        for (w, win) in self.windows.iter().enumerate() {
            sliding_min(f, lo, hi, win.kw, minima);
            if let Some(o) = win.offset {
                for (i, m) in minima.iter_mut().enumerate() {
                    *m = m.min(f_shift[o][lo + i + win.kw]);
                }
            }
            for (r, &(a, b)) in self.sup_ranges.iter().enumerate() {
                out[r * nw + w] = minima[a - lo..=b - lo]
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max);
            }
        }
    }
}

/// `out[i - lo] = min(f[i..=i+k])` for `i` in `lo..=hi`, via a monotone deque.
pub(crate) fn sliding_min(f: &[f64], lo: usize, hi: usize, k: usize, out: &mut Vec<f64>) {
    out.clear();
    if k == 0 {
        out.extend_from_slice(&f[lo..=hi]);
        return;
    }
    let mut dq: VecDeque<usize> = VecDeque::with_capacity(k + 1);
    for j in lo..=hi + k {
        while let Some(&back) = dq.back() {
            if f[back] >= f[j] {
                dq.pop_back();
            } else {
                break;
            }
        }
        dq.push_back(j);
        if j >= lo + k {
            let start = j - k;
            while dq[0] < start {
                dq.pop_front();
            }
            out.push(f[dq[0]]);
        }
    }
}

/// Per-thread buffers for one replication.
#[derive(Default)]
pub(crate) struct Scratch {
    pub main: Vec<f64>,
    pub shifted: Vec<Vec<f64>>,
    pub union: Vec<f64>,
    pub minima: Vec<f64>,
}

/// Runs `n` replications in parallel, each writing `width` statistics.
/// Row `r` of the result belongs to replication `r` whatever the thread
/// layout.
pub(crate) fn replicate<F>(n: u64, width: usize, body: F) -> Vec<f64>
where
    F: Fn(u64, &mut Scratch, &mut [f64]) + Sync,
{
    let mut out = vec![0.0; n as usize * width];
    out.par_chunks_mut(width)
        .enumerate()
        .for_each_init(Scratch::default, |scratch, (rep, row)| body(rep as u64, scratch, row));
    out
}

/// Column `col` of a row-major `n × width` table.
pub(crate) fn column(table: &[f64], width: usize, col: usize) -> Vec<f64> {
    table.iter().skip(col).step_by(width).copied().collect()
}

/// ln Σ e^{x_i}.
pub(crate) fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + xs.map(|x| (x - max).exp()).sum::<f64>().ln()
}
