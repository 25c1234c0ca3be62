use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_hurst, cholesky_factor, fbm_covariance, CholeskyFactor, Grid, MAX_CHOLESKY_POINTS};
use crate::error::{Error, Result};
use crate::rng::{stream, LANE_BRIDGE, LANE_LEFT, LANE_MAIN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Fbm,
    Bm,
}

/// Sample paths on a common grid, stored path-major.
#[derive(Debug, Clone)]
pub struct PathBatch {
    pub grid: Grid,
    pub hurst: f64,
    pub seed: u64,
    pub kind: ProcessKind,
    n_paths: usize,
    values: Vec<f64>,
}

impl PathBatch {
    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn path(&self, i: usize) -> &[f64] {
        let m = self.grid.len();
        &self.values[i * m..(i + 1) * m]
    }

    pub fn value(&self, path: usize, point: usize) -> f64 {
        self.values[path * self.grid.len() + point]
    }

    /// CSV with header `t,path_0,...`, one row per grid point, 17 significant
    /// digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "t")?;
        for i in 0..self.n_paths {
            write!(w, ",path_{i}")?;
        }
        writeln!(w)?;
        for j in 0..self.grid.len() {
            write!(w, "{:.16e}", self.grid.time(j))?;
            for i in 0..self.n_paths {
                write!(w, ",{:.16e}", self.value(i, j))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Cholesky sampler for B_H at an arbitrary set of distinct times. A zero
/// time, if present, is pinned rather than sampled.
#[derive(Debug, Clone)]
pub struct FbmSampler {
    hurst: f64,
    times: Vec<f64>,
    /// Position in `times` of each factor row.
    positions: Vec<usize>,
    factor: CholeskyFactor,
}

impl FbmSampler {
    pub fn new(hurst: f64, times: &[f64]) -> Result<Self> {
        check_hurst(hurst)?;
        let positions: Vec<usize> = (0..times.len()).filter(|&i| times[i] != 0.0).collect();
        if positions.len() > MAX_CHOLESKY_POINTS {
            return Err(Error::StepTooSmall { points: positions.len() as u64, limit: MAX_CHOLESKY_POINTS as u64 });
        }
        let sampled: Vec<f64> = positions.iter().map(|&i| times[i]).collect();
        let factor = cholesky_factor(&fbm_covariance(hurst, &sampled))?;
        Ok(FbmSampler { hurst, times: times.to_vec(), positions, factor })
    }

    pub fn for_grid(hurst: f64, grid: &Grid) -> Result<Self> {
        Self::new(hurst, &grid.points())
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn factor(&self) -> &CholeskyFactor {
        &self.factor
    }

    /// Writes replication `rep` of the path into `out` (one value per time).
    pub fn fill(&self, seed: u64, rep: u64, out: &mut [f64]) {
        let m = self.factor.order();
        let mut rng = stream(seed, LANE_MAIN, rep);
        let z: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let mut y = vec![0.0; m];
        self.factor.mul_vec(&z, &mut y);
        out.fill(0.0);
        for (&pos, v) in self.positions.iter().zip(y) {
            out[pos] = v;
        }
    }
}

/// Brownian motion on a uniform grid from independent N(0, step) increments,
/// built outward from `t = 0` in both directions.
#[derive(Debug, Clone)]
pub struct BmSampler {
    grid: Grid,
}

impl BmSampler {
    pub fn new(grid: Grid) -> Self {
        BmSampler { grid }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn fill(&self, seed: u64, rep: u64, out: &mut [f64]) {
        let g = &self.grid;
        let sd = g.step.sqrt();
        // Index of the first point at or right of the origin, and the value
        // there (0 if the origin is a grid point).
        if g.k_hi >= 0 {
            let mut rng = stream(seed, LANE_MAIN, rep);
            let first = g.k_lo.max(0);
            let mut v = if first == 0 {
                0.0
            } else {
                (first as f64 * g.step).sqrt() * rng.sample::<f64, _>(StandardNormal)
            };
            for k in first..=g.k_hi {
                if k > first {
                    v += sd * rng.sample::<f64, _>(StandardNormal);
                }
                out[(k - g.k_lo) as usize] = v;
            }
        }
        if g.k_lo < 0 {
            let mut rng = stream(seed, LANE_LEFT, rep);
            let first = g.k_hi.min(-1);
            let mut v = if first == -1 {
                sd * rng.sample::<f64, _>(StandardNormal)
            } else {
                (-first as f64 * g.step).sqrt() * rng.sample::<f64, _>(StandardNormal)
            };
            let mut k = first;
            loop {
                out[(k - g.k_lo) as usize] = v;
                if k == g.k_lo {
                    break;
                }
                k -= 1;
                v += sd * rng.sample::<f64, _>(StandardNormal);
            }
        }
    }
}

/// Paths on a uniform grid plus, for each `offset` δ in `(0, step)`, the
/// values at the shifted points `t_i + δ` between consecutive grid points.
///
/// Used by the constant estimators, whose windows `[t, t + L]` end off the
/// grid when `L` is not a multiple of the step.
#[derive(Debug, Clone)]
pub enum LatticeSampler {
    Bm {
        bm: BmSampler,
        offsets: Vec<f64>,
    },
    Fbm {
        grid: Grid,
        offsets: Vec<f64>,
        sampler: FbmSampler,
        /// For each union time, `(row, index)`: row 0 is the grid, row ℓ+1
        /// the ℓ-th shifted set.
        slots: Vec<(usize, usize)>,
    },
}

impl LatticeSampler {
    pub fn new(hurst: f64, grid: Grid, offsets: &[f64]) -> Result<Self> {
        check_hurst(hurst)?;
        for &d in offsets {
            if !(d > 0.0 && d < grid.step) {
                return Err(Error::invalid(format!(
                    "offset {d} must lie strictly inside one grid step {}",
                    grid.step
                )));
            }
        }
        if hurst == 0.5 {
            return Ok(LatticeSampler::Bm { bm: BmSampler::new(grid), offsets: offsets.to_vec() });
        }
        let mut tagged: Vec<(f64, usize, usize)> =
            (0..grid.len()).map(|i| (grid.time(i), 0, i)).collect();
        for (l, &d) in offsets.iter().enumerate() {
            for i in 0..grid.len() - 1 {
                tagged.push((grid.time(i) + d, l + 1, i));
            }
        }
        tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
        let times: Vec<f64> = tagged.iter().map(|t| t.0).collect();
        let slots = tagged.iter().map(|t| (t.1, t.2)).collect();
        let sampler = FbmSampler::new(hurst, &times)?;
        Ok(LatticeSampler::Fbm { grid, offsets: offsets.to_vec(), sampler, slots })
    }

    pub fn grid(&self) -> &Grid {
        match self {
            LatticeSampler::Bm { bm, .. } => bm.grid(),
            LatticeSampler::Fbm { grid, .. } => grid,
        }
    }

    pub fn offsets(&self) -> &[f64] {
        match self {
            LatticeSampler::Bm { offsets, .. } | LatticeSampler::Fbm { offsets, .. } => offsets,
        }
    }

    /// Fills `main` (one value per grid point) and `shifted[ℓ]` (one value per
    /// grid interval) for replication `rep`.
    pub fn fill(&self, seed: u64, rep: u64, main: &mut [f64], shifted: &mut [Vec<f64>], scratch: &mut Vec<f64>) {
        match self {
            LatticeSampler::Bm { bm, offsets } => {
                bm.fill(seed, rep, main);
                let step = bm.grid().step;
                for (l, &d) in offsets.iter().enumerate() {
                    let mut rng = stream(seed, LANE_BRIDGE + l as u64, rep);
                    let w = d / step;
                    let sd = (d * (step - d) / step).sqrt();
                    for (i, s) in shifted[l].iter_mut().enumerate() {
                        let z: f64 = rng.sample(StandardNormal);
                        *s = main[i] + w * (main[i + 1] - main[i]) + sd * z;
                    }
                }
            }
            LatticeSampler::Fbm { sampler, slots, .. } => {
                scratch.resize(slots.len(), 0.0);
                sampler.fill(seed, rep, scratch);
                for (&(row, idx), &v) in slots.iter().zip(scratch.iter()) {
                    if row == 0 {
                        main[idx] = v;
                    } else {
                        shifted[row - 1][idx] = v;
                    }
                }
            }
        }
    }
}

fn fill_batch(n: usize, m: usize, fill: impl Fn(u64, &mut [f64]) + Sync) -> Vec<f64> {
    let mut values = vec![0.0; n * m];
    if m > 0 {
        values
            .par_chunks_mut(m)
            .enumerate()
            .for_each(|(rep, row)| fill(rep as u64, row));
    }
    values
}

/// `n` fBm paths on `grid` from a factor built for that grid.
pub fn sample_paths(sampler: &FbmSampler, grid: &Grid, n: usize, seed: u64) -> Result<PathBatch> {
    if sampler.times().len() != grid.len() {
        return Err(Error::invalid("sampler was not built for this grid"));
    }
    let values = fill_batch(n, grid.len(), |rep, row| sampler.fill(seed, rep, row));
    Ok(PathBatch {
        grid: grid.clone(),
        hurst: sampler.hurst(),
        seed,
        kind: ProcessKind::Fbm,
        n_paths: n,
        values,
    })
}

/// `n` standard Brownian paths on `grid` by increments.
pub fn sample_bm_paths(grid: &Grid, n: usize, seed: u64) -> PathBatch {
    let bm = BmSampler::new(grid.clone());
    let values = fill_batch(n, grid.len(), |rep, row| bm.fill(seed, rep, row));
    PathBatch {
        grid: grid.clone(),
        hurst: 0.5,
        seed,
        kind: ProcessKind::Bm,
        n_paths: n,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fbm::build_grid;

    #[test]
    fn empty_batch() {
        let g = build_grid(0.0, 1.0, 0.25).unwrap();
        let s = FbmSampler::for_grid(0.3, &g).unwrap();
        assert_eq!(sample_paths(&s, &g, 0, 1).unwrap().n_paths(), 0);
        assert_eq!(sample_bm_paths(&g, 0, 1).n_paths(), 0);
    }

    #[test]
    fn zero_is_pinned() {
        let g = build_grid(-1.0, 1.0, 0.1).unwrap();
        let z = g.zero_index().unwrap();
        let s = FbmSampler::for_grid(0.7, &g).unwrap();
        let fb = sample_paths(&s, &g, 20, 3).unwrap();
        let bm = sample_bm_paths(&g, 20, 3);
        for i in 0..20 {
            assert_eq!(fb.value(i, z), 0.0);
            assert_eq!(bm.value(i, z), 0.0);
        }
    }

    #[test]
    fn batches_are_reproducible() {
        let g = build_grid(-0.5, 1.0, 0.05).unwrap();
        let s = FbmSampler::for_grid(0.3, &g).unwrap();
        let a = sample_paths(&s, &g, 50, 11).unwrap();
        let b = sample_paths(&s, &g, 50, 11).unwrap();
        assert_eq!(a.values, b.values);
        let c = sample_paths(&s, &g, 50, 12).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn bm_grid_away_from_origin_has_right_variance() {
        let g = build_grid(2.0, 3.0, 0.5).unwrap();
        let b = sample_bm_paths(&g, 20_000, 5);
        let var: f64 = (0..b.n_paths()).map(|i| b.value(i, 0).powi(2)).sum::<f64>() / 20_000.0;
        assert!((var - 2.0).abs() < 0.1, "var {var}");
        let g = build_grid(-3.0, -2.0, 0.5).unwrap();
        let b = sample_bm_paths(&g, 20_000, 5);
        let var: f64 = (0..b.n_paths()).map(|i| b.value(i, 2).powi(2)).sum::<f64>() / 20_000.0;
        assert!((var - 2.0).abs() < 0.1, "var {var}");
    }

    #[test]
    fn bm_shifted_points_follow_the_bridge() {
        let g = build_grid(0.0, 1.0, 0.25).unwrap();
        let sampler = LatticeSampler::new(0.5, g.clone(), &[0.1]).unwrap();
        let mut main = vec![0.0; g.len()];
        let mut shifted = vec![vec![0.0; g.len() - 1]];
        let mut scratch = Vec::new();
        let n = 20_000;
        let mut var = 0.0;
        for rep in 0..n {
            sampler.fill(9, rep, &mut main, &mut shifted, &mut scratch);
            var += shifted[0][2].powi(2);
        }
        // Var B(0.6) = 0.6
        assert!((var / n as f64 - 0.6).abs() < 0.03);
    }

    #[test]
    fn fbm_lattice_matches_plain_sampler_variances() {
        let g = build_grid(-1.0, 1.0, 0.25).unwrap();
        let sampler = LatticeSampler::new(0.3, g.clone(), &[0.125]).unwrap();
        let mut main = vec![0.0; g.len()];
        let mut shifted = vec![vec![0.0; g.len() - 1]];
        let mut scratch = Vec::new();
        let n = 20_000;
        let (mut v0, mut v1) = (0.0, 0.0);
        for rep in 0..n {
            sampler.fill(4, rep, &mut main, &mut shifted, &mut scratch);
            v0 += main[8].powi(2);
            v1 += shifted[0][4].powi(2);
        }
        assert!((v0 / n as f64 - 1.0).abs() < 0.04);
        assert!((v1 / n as f64 - 0.125f64.powf(0.6)).abs() < 0.03);
    }

    #[test]
    fn path_dump_has_seventeen_digits() {
        let g = build_grid(0.0, 1.0, 0.5).unwrap();
        let b = sample_bm_paths(&g, 2, 1);
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,path_0,path_1"));
        let row: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "5.0000000000000000e-1");
        assert_eq!(row.len(), 3);
    }
}
