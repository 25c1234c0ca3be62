use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of grid intervals `build_grid` accepts.
pub const MAX_INTERVALS: u64 = 1 << 22;

/// Uniform grid `{k·step : k_lo ≤ k ≤ k_hi}`.
///
/// Points live on the lattice `step·ℤ`, so a grid covering the origin always
/// contains `t = 0` exactly and two grids with the same step share points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub k_lo: i64,
    pub k_hi: i64,
}

impl Grid {
    pub fn len(&self) -> usize {
        (self.k_hi - self.k_lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, index: usize) -> f64 {
        (self.k_lo + index as i64) as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    /// Index of `t = 0`, if the grid covers it.
    pub fn zero_index(&self) -> Option<usize> {
        (self.k_lo <= 0 && self.k_hi >= 0).then(|| (-self.k_lo) as usize)
    }
}

/// Grid covering `[lo, hi]` with the given step; both ends are snapped to the
/// nearest lattice point.
pub fn build_grid(lo: f64, hi: f64, step: f64) -> Result<Grid> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid(format!("grid needs lo < hi, got [{lo}, {hi}]")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!("grid step must be positive, got {step}")));
    }
    let intervals = (hi - lo) / step;
    if intervals > MAX_INTERVALS as f64 {
        return Err(Error::StepTooSmall {
            points: intervals.ceil() as u64 + 1,
            limit: MAX_INTERVALS + 1,
        });
    }
    let k_lo = (lo / step).round() as i64;
    let k_hi = ((hi / step).round() as i64).max(k_lo + 1);
    Ok(Grid { lo, hi, step, k_lo, k_hi })
}
