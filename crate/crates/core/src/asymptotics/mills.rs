//! Standard normal tail Ψ(x) = 1 − Φ(x) and its Mill's-ratio asymptote.

use libm::erfc;

use crate::error::{Error, Result};

pub(crate) const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Ψ(x) = P(N(0,1) > x), evaluated through `erfc` so the upper tail keeps
/// full relative precision until it underflows (x ≈ 38).
pub fn mills_psi(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Φ(x) = P(N(0,1) ≤ x).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Leading-order tail e^{−x²/2} / (√(2π) x); only defined for x > 0.
pub fn mills_psi_asymptotic(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!(
            "Mill's-ratio asymptote needs x > 0, got {x}"
        )));
    }
    Ok((-0.5 * x * x).exp() / (SQRT_2PI * x))
}

/// ln Ψ(x), finite far beyond the point where Ψ itself underflows.
pub fn log_mills_psi(x: f64) -> f64 {
    if x < 35.0 {
        return mills_psi(x).ln();
    }
    let r = 1.0 / (x * x);
    let series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
    -0.5 * x * x - (SQRT_2PI * x).ln() + series.ln()
}
