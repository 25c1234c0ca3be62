use serde::{Deserialize, Serialize};

use super::mills::{log_mills_psi, mills_psi};
use crate::error::{Error, Result};
use crate::model::{critical_times, structural_constants, ModelParams, RegimeTag};

/// Two-sided bounds for the interior regime with H < 1/2 and a fixed delay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallHBounds {
    pub u: f64,
    pub lower: f64,
    pub upper: f64,
    pub alpha: f64,
    pub c1_alpha: f64,
    pub c2_alpha: f64,
    /// Constant applied to the lower bound. Only its existence is known, so
    /// the default 1 makes `lower` an envelope rather than a bound.
    pub c_bar_used: f64,
    /// Smallest `u` on a geometric scan from which `lower ≤ upper` holds.
    pub ordered_from: f64,
}

struct Pieces {
    d_h: f64,
    alpha: f64,
    c1: f64,
    c2: f64,
    /// T^H D_H / (2 t_*^H).
    k: f64,
}

fn pieces(p: &ModelParams) -> Result<Pieces> {
    p.validate()?;
    if p.h >= 0.5 {
        return Err(Error::WrongRegime(format!("small-H bounds need H < 1/2, got {}", p.h)));
    }
    let s = structural_constants(p);
    if s.regime.tag != RegimeTag::Interior {
        return Err(Error::WrongRegime(format!(
            "small-H bounds need the interior regime, got {}",
            s.regime.tag.name()
        )));
    }
    if !(p.t > 0.0) {
        return Err(Error::invalid("small-H bounds need a fixed delay T > 0"));
    }
    let ts = critical_times(p).t_star;
    let alpha = p.t.powf(2.0 * p.h) / (2.0 * ts.powf(2.0 * p.h));
    Ok(Pieces {
        d_h: s.d_h,
        alpha,
        c1: alpha * s.d_h * s.d_h,
        c2: alpha * alpha / 2.0 * s.d_h * s.d_h,
        k: p.t.powf(p.h) * s.d_h / (2.0 * ts.powf(p.h)),
    })
}

fn log_gap(p: &ModelParams, q: &Pieces, u: f64, c_bar: f64) -> f64 {
    let h = p.h;
    let log_lower = c_bar.ln() - q.c1 * u.powf(2.0 - 4.0 * h) - q.c2 * u.powf(2.0 * (1.0 - 3.0 * h));
    let log_upper = 2f64.ln() + log_mills_psi(u.powf(1.0 - 2.0 * h) * q.k);
    log_lower - log_upper
}

/// lower = C̄ Ψ(D_H u^{1−H}) exp(−C_{1,α} u^{2−4H} − C_{2,α} u^{2(1−3H)}),
/// upper = 2 Ψ(D_H u^{1−H}) Ψ(u^{1−2H} T^H D_H / (2 t_*^H)),
/// α = T^{2H}/(2 t_*^{2H}), C_{i,α} = α^i D_H² / i.
pub fn small_h_bounds(p: &ModelParams, u: f64, c_bar: f64) -> Result<SmallHBounds> {
    let q = pieces(p)?;
    if !(c_bar > 0.0 && c_bar <= 1.0) {
        return Err(Error::invalid(format!("C_bar must lie in (0, 1], got {c_bar}")));
    }
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::invalid(format!("u must be positive, got {u}")));
    }
    let h = p.h;
    let psi = mills_psi(q.d_h * u.powf(1.0 - h));
    let lower = c_bar * psi * (-q.c1 * u.powf(2.0 - 4.0 * h) - q.c2 * u.powf(2.0 * (1.0 - 3.0 * h))).exp();
    let upper = 2.0 * psi * mills_psi(u.powf(1.0 - 2.0 * h) * q.k);
    // geometric scan over [1e-3, 1e6]; the gap is negative for large u
    let scan: Vec<f64> = (0..=180).map(|i| 10f64.powf(-3.0 + i as f64 / 20.0)).collect();
    let ordered_from = match scan.iter().rposition(|&v| log_gap(p, &q, v, c_bar) > 0.0) {
        None => scan[0],
        Some(i) if i + 1 < scan.len() => scan[i + 1],
        Some(_) => f64::INFINITY,
    };
    Ok(SmallHBounds {
        u,
        lower,
        upper,
        alpha: q.alpha,
        c1_alpha: q.c1,
        c2_alpha: q.c2,
        c_bar_used: c_bar,
        ordered_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> ModelParams {
        ModelParams::new(1.0, 0.25, 0.25, 0.75, 0.25, 1.0).unwrap()
    }

    #[test]
    fn regime_and_hurst_are_checked() {
        let right = ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.25, 1.0).unwrap();
        assert!(matches!(small_h_bounds(&right, 4.0, 1.0), Err(Error::WrongRegime(_))));
        let half = ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.5, 1.0).unwrap();
        assert!(matches!(small_h_bounds(&half, 4.0, 1.0), Err(Error::WrongRegime(_))));
        assert!(small_h_bounds(&fixture(), 4.0, 0.0).is_err());
        assert!(small_h_bounds(&fixture(), 4.0, 1.5).is_err());
        assert!(small_h_bounds(&ModelParams { t: 0.0, ..fixture() }, 4.0, 1.0).is_err());
    }

    #[test]
    fn quarter_hurst_exponents() {
        // at H = 1/4 the exponents are u^1 and u^{1/2}
        let p = fixture();
        let b1 = small_h_bounds(&p, 1.0, 1.0).unwrap();
        let b4 = small_h_bounds(&p, 4.0, 1.0).unwrap();
        let psi = |u: f64| mills_psi(structural_constants(&p).d_h * u.powf(0.75));
        let r1 = (b1.lower / psi(1.0)).ln();
        let r4 = (b4.lower / psi(4.0)).ln();
        assert!((r1 + b1.c1_alpha + b1.c2_alpha).abs() < 1e-12);
        assert!((r4 + 4.0 * b4.c1_alpha + 2.0 * b4.c2_alpha).abs() < 1e-12);
    }

    #[test]
    fn alpha_and_constants() {
        let b = small_h_bounds(&fixture(), 2.0, 1.0).unwrap();
        let ts: f64 = 2.0 / 3.0;
        let alpha = 1.0 / (2.0 * ts.sqrt());
        let d_h = (ts + 0.25) / ts.powf(0.25);
        assert!((b.alpha - alpha).abs() < 1e-14);
        assert!((b.c1_alpha - alpha * d_h * d_h).abs() < 1e-13);
        assert!((b.c2_alpha - alpha * alpha / 2.0 * d_h * d_h).abs() < 1e-13);
    }

    #[test]
    fn ordered_beyond_threshold() {
        let b = small_h_bounds(&fixture(), 1.0, 1.0).unwrap();
        assert!(b.ordered_from.is_finite());
        for u in [1.0, 2.0, 5.0, 20.0, 100.0] {
            let v = small_h_bounds(&fixture(), b.ordered_from * u, 1.0).unwrap();
            assert!(v.lower <= v.upper, "u = {}", v.u);
        }
    }
}
