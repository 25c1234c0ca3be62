use super::bm::parisian_bm_exact;
use super::mills::mills_psi;
use crate::error::{Error, Result};
use crate::fbm::check_hurst;
use crate::model::{c_h, d_const, k_h};

/// Window argument T·D of the Pickands constant the one-dimensional
/// asymptotic needs at Hurst index `h` and drift `c`.
pub fn one_dim_pickands_window(h: f64, c: f64, t: f64) -> f64 {
    t * d_const(h, c)
}

/// Leading-order Parisian ruin probability of q·u + c·t − B_H(t) with delay
/// T_u, T_u u^{1/H−2} → T.
///
/// At H = 1/2 this is the exact Brownian formula at capital q·u. Otherwise
/// K_H 𝓕_{2H}(T D) (𝔺 u^{1−H})^{1/H−1} Ψ(𝔺 u^{1−H}), where `f_const` is
/// 𝓕_{2H}(T·D) (see `one_dim_pickands_window`).
pub fn one_dim_parisian_asymptotic(h: f64, c: f64, q: f64, u: f64, t: f64, f_const: Option<f64>) -> Result<f64> {
    check_hurst(h)?;
    if !(c > 0.0 && q > 0.0 && u > 0.0 && t >= 0.0) {
        return Err(Error::invalid(format!("need c, q, u > 0 and T >= 0, got c={c} q={q} u={u} T={t}")));
    }
    if h == 0.5 {
        return Ok(parisian_bm_exact(c, q * u, t));
    }
    let f = f_const.ok_or_else(|| Error::MissingConstant {
        descriptor: format!("pickands H={h} window={}", one_dim_pickands_window(h, c, t)),
    })?;
    let x = c_h(h, c, q) * u.powf(1.0 - h);
    Ok(k_h(h) * f * x.powf(1.0 / h - 1.0) * mills_psi(x))
}
