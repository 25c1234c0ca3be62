use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of checking lim T_u u^{1/H−2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TuLimit {
    Converged(f64),
    NotConvergent,
}

/// Relative change between the last successive values accepted as converged.
const CAUCHY_RTOL: f64 = 0.05;

/// Estimates T = lim T_u u^{1/H−2} from `(u, T_u)` samples with increasing
/// `u`: the last value when the last two successive changes are within 5%,
/// 0 when the sequence decays like a negative power of `u`, and
/// `NotConvergent` otherwise.
#[allow(non_snake_case)]
pub fn check_Tu_condition(h: f64, samples: &[(f64, f64)]) -> Result<TuLimit> {
    if samples.len() < 3 {
        return Err(Error::invalid("need at least 3 (u, T_u) samples"));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || samples[0].0 <= 0.0 {
        return Err(Error::invalid("u samples must be positive and increasing"));
    }
    let v: Vec<f64> = samples.iter().map(|&(u, tu)| tu * u.powf(1.0 / h - 2.0)).collect();
    if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Ok(TuLimit::NotConvergent);
    }
    let n = v.len();
    if v[n - 3..].iter().all(|&x| x == 0.0) {
        return Ok(TuLimit::Converged(0.0));
    }
    let close = |a: f64, b: f64| (a - b).abs() <= CAUCHY_RTOL * a.abs().max(b.abs());
    if close(v[n - 3], v[n - 2]) && close(v[n - 2], v[n - 1]) {
        return Ok(TuLimit::Converged(v[n - 1]));
    }
    if v.iter().all(|&x| x > 0.0) && v.windows(2).all(|w| w[1] < w[0]) {
        let lu: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
        let lv: Vec<f64> = v.iter().map(|x| x.ln()).collect();
        let slope = (lv[n - 1] - lv[0]) / (lu[n - 1] - lu[0]);
        if slope < -CAUCHY_RTOL {
            return Ok(TuLimit::Converged(0.0));
        }
    }
    Ok(TuLimit::NotConvergent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_schedule_returns_t() {
        let h: f64 = 0.3;
        let s: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0].iter().map(|&u: &f64| (u, 1.7 * u.powf(2.0 - 1.0 / h))).collect();
        match check_Tu_condition(h, &s).unwrap() {
            TuLimit::Converged(t) => assert!((t - 1.7).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_delay_above_half_gives_zero() {
        let s = [(5.0, 1.0), (10.0, 1.0), (20.0, 1.0), (40.0, 1.0)];
        assert_eq!(check_Tu_condition(0.7, &s).unwrap(), TuLimit::Converged(0.0));
    }

    #[test]
    fn growing_delay_below_half_diverges() {
        let s = [(2.0, 2.0), (4.0, 4.0), (8.0, 8.0)];
        assert_eq!(check_Tu_condition(0.25, &s).unwrap(), TuLimit::NotConvergent);
    }

    #[test]
    fn needs_three_increasing_samples() {
        assert!(check_Tu_condition(0.5, &[(1.0, 1.0), (2.0, 1.0)]).is_err());
        assert!(check_Tu_condition(0.5, &[(1.0, 1.0), (3.0, 1.0), (2.0, 1.0)]).is_err());
    }
}
