//! Two-company risk model under quota-share reinsurance: parameters,
//! critical times, regime classification and the deterministic constants of
//! the ruin asymptotics.
//!
//! Capital enters as `q_i·u`: the `q_i` are fixed coefficients and `u` is the
//! free scale sent to infinity. `normalize_quota_share` divides capital by a
//! reference scale `u_ref` (default 1) to produce the `q_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbm::check_hurst;

/// Relative tolerance for deciding that t_* sits exactly on t_1 or t_2.
pub const BOUNDARY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotaShareInputs {
    pub x1: f64,
    pub x2: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl QuotaShareInputs {
    pub fn validate(&self) -> Result<()> {
        let fields = [self.x1, self.x2, self.rho1, self.rho2, self.delta1, self.delta2];
        if fields.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(format!("quota-share inputs must be positive: {self:?}")));
        }
        if (self.delta1 + self.delta2 - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "loss shares must sum to 1, got {} + {}",
                self.delta1, self.delta2
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub c1: f64,
    pub c2: f64,
    pub q1: f64,
    pub q2: f64,
    pub h: f64,
    pub t: f64,
    /// True when company 1 here is company 2 of the original inputs.
    #[serde(default)]
    pub swapped: bool,
}

impl ModelParams {
    /// Validated parameters; requires c1 > c2 and q2 > q1.
    pub fn new(c1: f64, c2: f64, q1: f64, q2: f64, h: f64, t: f64) -> Result<Self> {
        let p = ModelParams { c1, c2, q1, q2, h, t, swapped: false };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_hurst(self.h)?;
        for (name, v) in [("c1", self.c1), ("c2", self.c2), ("q1", self.q1), ("q2", self.q2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(Error::invalid(format!("delay T must be >= 0, got {}", self.t)));
        }
        if !(self.c1 > self.c2 && self.q2 > self.q1) {
            return Err(Error::InvalidRegime(format!(
                "c=({}, {}), q=({}, {})",
                self.c1, self.c2, self.q1, self.q2
            )));
        }
        Ok(())
    }

    /// Original company number (1 or 2) of the company labelled `i` here.
    pub fn original_company(&self, i: u8) -> u8 {
        if self.swapped {
            3 - i
        } else {
            i
        }
    }

    pub fn c(&self, i: u8) -> f64 {
        if i == 1 {
            self.c1
        } else {
            self.c2
        }
    }

    pub fn q(&self, i: u8) -> f64 {
        if i == 1 {
            self.q1
        } else {
            self.q2
        }
    }

    /// max(c1 t + q1, c2 t + q2).
    pub fn barrier(&self, t: f64) -> f64 {
        (self.c1 * t + self.q1).max(self.c2 * t + self.q2)
    }
}

/// c_i = ρ_i/δ_i, q_i = (x_i/δ_i)/u_ref, relabelled so that c1 > c2.
pub fn normalize_quota_share(inputs: &QuotaShareInputs, h: f64, t: f64, u_ref: f64) -> Result<ModelParams> {
    inputs.validate()?;
    if !(u_ref > 0.0 && u_ref.is_finite()) {
        return Err(Error::invalid(format!("u_ref must be positive, got {u_ref}")));
    }
    let mut c = [inputs.rho1 / inputs.delta1, inputs.rho2 / inputs.delta2];
    let mut q = [inputs.x1 / inputs.delta1 / u_ref, inputs.x2 / inputs.delta2 / u_ref];
    if c[0] == c[1] || q[0] == q[1] {
        return Err(Error::NonIntersectingBarriers(format!("c=({}, {}), q=({}, {})", c[0], c[1], q[0], q[1])));
    }
    let swapped = c[0] < c[1];
    if swapped {
        c.swap(0, 1);
        q.swap(0, 1);
    }
    if q[1] < q[0] {
        return Err(Error::NonIntersectingBarriers(format!(
            "company 1 dominates for all t: c=({}, {}), q=({}, {})",
            c[0], c[1], q[0], q[1]
        )));
    }
    let mut p = ModelParams::new(c[0], c[1], q[0], q[1], h, t)?;
    p.swapped = swapped;
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalTimes {
    pub t_star: f64,
    pub t1: f64,
    pub t2: f64,
}

/// t_* = (q2 − q1)/(c1 − c2), t_i = H q_i / ((1 − H) c_i).
pub fn critical_times(p: &ModelParams) -> CriticalTimes {
    let r = p.h / (1.0 - p.h);
    CriticalTimes {
        t_star: (p.q2 - p.q1) / (p.c1 - p.c2),
        t1: r * p.q1 / p.c1,
        t2: r * p.q2 / p.c2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeTag {
    LeftOfT1,
    BoundaryT1,
    Interior,
    BoundaryT2,
    RightOfT2,
}

impl RegimeTag {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeTag::LeftOfT1 => "LeftOfT1",
            RegimeTag::BoundaryT1 => "BoundaryT1",
            RegimeTag::Interior => "Interior",
            RegimeTag::BoundaryT2 => "BoundaryT2",
            RegimeTag::RightOfT2 => "RightOfT2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub tag: RegimeTag,
    /// The company whose single barrier drives the asymptotics, or `None`
    /// in the interior regime.
    pub dominant: Option<u8>,
}

impl Regime {
    pub fn is_boundary(&self) -> bool {
        matches!(self.tag, RegimeTag::BoundaryT1 | RegimeTag::BoundaryT2)
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_RTOL * a.abs().max(b.abs())
}

pub fn classify_regime(p: &ModelParams) -> Regime {
    let ct = critical_times(p);
    let (tag, dominant) = if near(ct.t_star, ct.t1) {
        (RegimeTag::BoundaryT1, Some(1))
    } else if near(ct.t_star, ct.t2) {
        (RegimeTag::BoundaryT2, Some(2))
    } else if ct.t_star < ct.t1 {
        (RegimeTag::LeftOfT1, Some(1))
    } else if ct.t_star > ct.t2 {
        (RegimeTag::RightOfT2, Some(2))
    } else {
        (RegimeTag::Interior, None)
    };
    Regime { tag, dominant }
}

/// Deterministic constants of the asymptotic formulas. `a`, `d_bar`,
/// `t_prime`, `a_d` and `b_d` belong to the interior regime but are always
/// computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralConstants {
    pub k_h: f64,
    pub c_h_1: f64,
    pub c_h_2: f64,
    pub d_1: f64,
    pub d_2: f64,
    pub d_h: f64,
    pub a: f64,
    pub d_bar: f64,
    pub t_prime: f64,
    /// Slope of −d(s) for s ≥ 0.
    pub a_d: f64,
    /// Slope of d(s) for s < 0.
    pub b_d: f64,
    pub regime: Regime,
}

impl StructuralConstants {
    pub fn c_h(&self, i: u8) -> f64 {
        if i == 1 {
            self.c_h_1
        } else {
            self.c_h_2
        }
    }

    pub fn d(&self, i: u8) -> f64 {
        if i == 1 {
            self.d_1
        } else {
            self.d_2
        }
    }
}

/// K_H = 2^{1/2 − 1/(2H)} √π / √(H(1−H)).
pub fn k_h(h: f64) -> f64 {
    2f64.powf(0.5 - 0.5 / h) * std::f64::consts::PI.sqrt() / (h * (1.0 - h)).sqrt()
}

/// 𝔺_H = c^H q^{1−H} / (H^H (1−H)^{1−H}).
pub fn c_h(h: f64, c: f64, q: f64) -> f64 {
    c.powf(h) * q.powf(1.0 - h) / (h.powf(h) * (1.0 - h).powf(1.0 - h))
}

/// D = c² (1−H)^{2−1/H} / (2^{1/(2H)} H²).
pub fn d_const(h: f64, c: f64) -> f64 {
    c * c * (1.0 - h).powf(2.0 - 1.0 / h) / (2f64.powf(0.5 / h) * h * h)
}

pub fn structural_constants(p: &ModelParams) -> StructuralConstants {
    let h = p.h;
    let ts = critical_times(p).t_star;
    let (c1, c2, q1, q2) = (p.c1, p.c2, p.q1, p.q2);
    let d_h = (c1 * ts + q1) / ts.powf(h);
    let cross = c1 * q2 - q1 * c2;
    let two_inv_2h = 2f64.powf(0.5 / h);
    let a = (1.0 / (h * (c1 * ts + q1) - c1 * ts).abs() + 1.0 / (h * (c2 * ts + q2) - c2 * ts).abs())
        * ts.powf(h)
        * d_h.powf(1.0 / h - 1.0)
        / two_inv_2h;
    StructuralConstants {
        k_h: k_h(h),
        c_h_1: c_h(h, c1, q1),
        c_h_2: c_h(h, c2, q2),
        d_1: d_const(h, c1),
        d_2: d_const(h, c2),
        d_h,
        a,
        d_bar: (c1 * ts + q1).powf(1.0 / h) / (two_inv_2h * ts * ts),
        t_prime: p.t * cross * cross / (2.0 * (c1 - c2) * (c1 - c2)),
        a_d: -(2.0 * c1 * q1 - c1 * q2 - q1 * c2) / cross,
        b_d: (c1 * q2 + c2 * q1 - 2.0 * c2 * q2) / cross,
        regime: classify_regime(p),
    }
}
