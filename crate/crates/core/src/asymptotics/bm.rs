//! Closed forms for Brownian motion with drift.

use super::mills::{normal_cdf, SQRT_2PI};

/// Classical ruin probability e^{−2ρu} of u + ρt − B(t).
pub fn classical_bm_ruin(rho: f64, u: f64) -> f64 {
    (-2.0 * rho * u).exp()
}

/// Ratio in front of e^{−2cu} in the Parisian ruin probability with delay T:
/// (e^{−c²T/2} − c√(2πT) Φ(−c√T)) / (e^{−c²T/2} + c√(2πT) Φ(c√T)).
pub fn parisian_bm_prefactor(c: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let e = (-0.5 * c * c * t).exp();
    let r = c * SQRT_2PI * t.sqrt();
    let x = c * t.sqrt();
    (e - r * normal_cdf(-x)) / (e + r * normal_cdf(x))
}

/// Exact Parisian ruin probability of u + ct − B(t) with delay T.
pub fn parisian_bm_exact(c: f64, u: f64, t: f64) -> f64 {
    parisian_bm_prefactor(c, t) * (-2.0 * c * u).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_examples() {
        assert!((classical_bm_ruin(1.0, 1.0) - 0.135_335_283_236_612_7).abs() < 1e-15);
        assert_eq!(classical_bm_ruin(0.5, 2.0), classical_bm_ruin(1.0, 1.0));
        assert!((classical_bm_ruin(1.0, 1e-12) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn zero_delay_is_classical() {
        for (c, u) in [(1.0, 0.5), (0.3, 2.0), (2.0, 0.1)] {
            assert_eq!(parisian_bm_exact(c, u, 0.0), classical_bm_ruin(c, u));
        }
    }

    #[test]
    fn reference_values() {
        // 30-digit mpmath evaluations of the closed form
        assert!((parisian_bm_exact(1.0, 0.5, 0.2) - 0.119_280_455_102_995_59).abs() < 1e-14);
        assert!((parisian_bm_exact(0.5, 1.0, 0.5) - 0.151_247_505_346_735).abs() < 1e-14);
    }

    #[test]
    fn prefactor_in_unit_interval_and_decreasing_in_delay() {
        let mut prev = 1.0;
        for t in [0.01, 0.1, 0.5, 1.0, 5.0] {
            let p = parisian_bm_prefactor(1.0, t);
            assert!(p > 0.0 && p < prev);
            prev = p;
        }
    }
}
