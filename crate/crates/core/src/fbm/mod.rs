//! Exact Gaussian path generation: fractional Brownian motion by Cholesky
//! factorization and standard Brownian motion by independent increments.

mod cholesky;
mod grid;
mod sampler;

pub use cholesky::{cholesky_factor, dot, CholeskyFactor, PackedLower, JITTER_LEVELS};
pub use grid::{build_grid, Grid, MAX_INTERVALS};
pub use sampler::{
    sample_bm_paths, sample_paths, BmSampler, FbmSampler, LatticeSampler, PathBatch, ProcessKind,
};

use crate::error::{Error, Result};

/// Largest number of non-zero times a Cholesky factor is built for; the
/// packed factor then takes about 270 MB.
pub const MAX_CHOLESKY_POINTS: usize = 8192;

pub fn check_hurst(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("Hurst index must lie in (0, 1), got {h}")))
    }
}

/// Cov(B_H(t), B_H(s)) = (|t|^{2H} + |s|^{2H} − |t − s|^{2H}) / 2.
#[inline]
pub fn fbm_cov(h: f64, t: f64, s: f64) -> f64 {
    let two_h = 2.0 * h;
    0.5 * (t.abs().powf(two_h) + s.abs().powf(two_h) - (t - s).abs().powf(two_h))
}

/// Covariance matrix of B_H at the given times; callers leave out `t = 0`.
pub fn fbm_covariance(h: f64, times: &[f64]) -> PackedLower {
    PackedLower::from_fn(times.len(), |i, j| fbm_cov(h, times[i], times[j]))
}

/// Covariance over the grid with the pinned zero point dropped.
pub fn grid_covariance(h: f64, grid: &Grid) -> PackedLower {
    let times: Vec<f64> = grid.points().into_iter().filter(|&t| t != 0.0).collect();
    fbm_covariance(h, &times)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_covariance_is_min() {
        let m = fbm_covariance(0.5, &[1.0, 2.0]);
        assert_eq!(m.row(0), &[1.0]);
        assert_eq!(m.row(1), &[1.0, 2.0]);
    }

    #[test]
    fn brownian_branches_are_independent() {
        assert_eq!(fbm_cov(0.5, -1.0, 1.0), 0.0);
    }

    #[test]
    fn diagonal_is_variance() {
        for h in [0.1, 0.3, 0.7, 0.9] {
            for t in [-2.5, 0.3, 4.0] {
                let v = fbm_cov(h, t, t);
                assert!((v - f64::abs(t).powf(2.0 * h)).abs() < 1e-14 * v.max(1.0));
            }
        }
    }

    #[test]
    fn zero_point_is_dropped() {
        let g = build_grid(-1.0, 1.0, 0.5).unwrap();
        assert_eq!(grid_covariance(0.3, &g).order(), 4);
    }

    #[test]
    fn hurst_range() {
        assert!(check_hurst(0.5).is_ok());
        assert!(check_hurst(0.0).is_err());
        assert!(check_hurst(1.0).is_err());
        assert!(check_hurst(f64::NAN).is_err());
    }
}
