//! Dense symmetric matrices in packed lower-triangular row storage and their
//! Cholesky factors.

use crate::error::{Error, Result};

/// Jitter levels tried, relative to the mean diagonal, after a plain
/// factorization fails.
pub const JITTER_LEVELS: [f64; 3] = [1e-12, 1e-10, 1e-8];

/// Row `i` holds entries `(i, 0..=i)`, starting at offset `i(i+1)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedLower {
    order: usize,
    data: Vec<f64>,
}

fn row_start(i: usize) -> usize {
    i * (i + 1) / 2
}

impl PackedLower {
    pub fn zeros(order: usize) -> Self {
        PackedLower { order, data: vec![0.0; row_start(order)] }
    }

    /// Lower triangle of a symmetric matrix given by `entry(i, j)`, `j ≤ i`.
    pub fn from_fn(order: usize, mut entry: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(row_start(order));
        for i in 0..order {
            for j in 0..=i {
                data.push(entry(i, j));
            }
        }
        PackedLower { order, data }
    }

    /// Lower triangle of a dense row-major square matrix (upper part ignored).
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        Self::from_fn(rows.len(), |i, j| rows[i][j])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[row_start(i)..row_start(i + 1)]
    }

    /// Entry `(i, j)` of the symmetric matrix; for a factor only `j ≤ i` is meaningful.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        self.data[row_start(i) + j]
    }

    fn mean_diagonal(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum::<f64>() / self.order.max(1) as f64
    }

    fn frobenius_sym(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.order {
            let row = self.row(i);
            s += row[..i].iter().map(|v| 2.0 * v * v).sum::<f64>() + row[i] * row[i];
        }
        s.sqrt()
    }
}

/// Dot product with a fixed four-lane accumulation order, so the result is
/// the same wherever it runs.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0f64; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Lower-triangular `L` with `L·Lᵀ = m + jitter·I`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    lower: PackedLower,
    jitter: f64,
}

impl CholeskyFactor {
    pub fn order(&self) -> usize {
        self.lower.order
    }

    /// Absolute diagonal shift that was needed (0 when none).
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn lower(&self) -> &PackedLower {
        &self.lower
    }

    /// `out = L·z`.
    pub fn mul_vec(&self, z: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.order()) {
            *o = dot(self.lower.row(i), &z[..=i]);
        }
    }

    /// ‖L·Lᵀ − m‖_F / ‖m‖_F.
    pub fn reconstruction_error(&self, m: &PackedLower) -> f64 {
        let n = self.order();
        let mut err = 0.0;
        for i in 0..n {
            let li = self.lower.row(i);
            for j in 0..=i {
                let lj = self.lower.row(j);
                let d = dot(&li[..=j], lj) - m.get(i, j);
                err += if i == j { d * d } else { 2.0 * d * d };
            }
        }
        err.sqrt() / m.frobenius_sym()
    }
}

fn try_factor(m: &PackedLower, shift: f64) -> std::result::Result<PackedLower, usize> {
    let n = m.order;
    let mut l = PackedLower::zeros(n);
    for i in 0..n {
        let start_i = row_start(i);
        for j in 0..i {
            let start_j = row_start(j);
            let s = dot(&l.data[start_i..start_i + j], &l.data[start_j..start_j + j]);
            l.data[start_i + j] = (m.data[start_i + j] - s) / l.data[start_j + j];
        }
        let row = &l.data[start_i..start_i + i];
        let pivot = m.data[start_i + i] + shift - dot(row, row);
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(i);
        }
        l.data[start_i + i] = pivot.sqrt();
    }
    Ok(l)
}

/// Cholesky factorization, retrying with growing diagonal jitter
/// (`JITTER_LEVELS` × mean diagonal) when the plain attempt hits a
/// non-positive pivot.
pub fn cholesky_factor(m: &PackedLower) -> Result<CholeskyFactor> {
    let mut failed_at = match try_factor(m, 0.0) {
        Ok(lower) => return Ok(CholeskyFactor { lower, jitter: 0.0 }),
        Err(pivot) => pivot,
    };
    let scale = m.mean_diagonal().abs().max(f64::MIN_POSITIVE);
    for eps in JITTER_LEVELS {
        let shift = eps * scale;
        match try_factor(m, shift) {
            Ok(lower) => {
                log::debug!("Cholesky of order {} needed jitter {shift:e}", m.order);
                return Ok(CholeskyFactor { lower, jitter: shift });
            }
            Err(pivot) => failed_at = pivot,
        }
    }
    Err(Error::NotPositiveDefinite {
        order: m.order,
        pivot: failed_at,
        jitter: JITTER_LEVELS[JITTER_LEVELS.len() - 1] * scale,
    })
}
