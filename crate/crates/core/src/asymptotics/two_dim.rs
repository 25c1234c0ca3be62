use serde::{Deserialize, Serialize};

use super::mills::mills_psi;
use super::one_dim::one_dim_parisian_asymptotic;
use super::provider::{ConstantProvider, ResolvedConstant};
use crate::error::{Error, Result};
use crate::model::{classify_regime, structural_constants, ModelParams, Regime};
use crate::piterbarg::{piterbarg_closed_form, DriftSpec};
use crate::registry::ConstantDescriptor;

/// Which branch of the two-dimensional asymptotics produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaId {
    /// Single dominant barrier, Brownian motion.
    Case1Bm,
    /// Single dominant barrier, fBm with H ≠ 1/2.
    Case1Fbm,
    /// Both barriers active, H > 1/2.
    Case2Smooth,
    /// Both barriers active, H = 1/2, positive delay.
    Case2Bm,
    /// Both barriers active, H = 1/2, no delay: closed-form Piterbarg constant.
    Case2BmNoDelay,
    /// Both barriers active, H < 1/2.
    Case2Rough,
}

impl FormulaId {
    pub fn name(&self) -> &'static str {
        match self {
            FormulaId::Case1Bm => "case1-bm",
            FormulaId::Case1Fbm => "case1-fbm",
            FormulaId::Case2Smooth => "case2-smooth",
            FormulaId::Case2Bm => "case2-bm",
            FormulaId::Case2BmNoDelay => "case2-bm-no-delay",
            FormulaId::Case2Rough => "case2-rough",
        }
    }
}

/// Leading-order equivalent of the simultaneous Parisian ruin probability.
/// It is not itself a probability and may exceed 1 at small `u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticResult {
    pub value: f64,
    pub u: f64,
    pub regime: Regime,
    pub formula_id: FormulaId,
    pub constants_used: Vec<ResolvedConstant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Simulated constants the asymptotic formula for `p` consumes.
pub fn required_constants(p: &ModelParams) -> Result<Vec<ConstantDescriptor>> {
    p.validate()?;
    let s = structural_constants(p);
    let h = p.h;
    Ok(match s.regime.dominant {
        Some(i) if h != 0.5 => vec![ConstantDescriptor::pickands(h, p.t * s.d(i))],
        Some(_) => vec![],
        None if h == 0.5 && p.t > 0.0 => {
            vec![ConstantDescriptor::piterbarg(s.t_prime, s.a_d, s.b_d)]
        }
        None if h < 0.5 => vec![ConstantDescriptor::pickands(h, s.d_bar * p.t)],
        None => vec![],
    })
}

/// Asymptotic simultaneous Parisian ruin probability at scale `u`, for every
/// regime; `provider` resolves the simulated constants the branch needs.
pub fn two_dim_parisian_asymptotic(
    p: &ModelParams,
    u: f64,
    provider: &mut dyn ConstantProvider,
) -> Result<AsymptoticResult> {
    p.validate()?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::invalid(format!("u must be positive, got {u}")));
    }
    let s = structural_constants(p);
    let regime = classify_regime(p);
    let h = p.h;
    let mut used = Vec::new();
    let (value, formula_id) = match regime.dominant {
        Some(i) => {
            let half = if regime.is_boundary() { 0.5 } else { 1.0 };
            if h == 0.5 {
                let v = one_dim_parisian_asymptotic(h, p.c(i), p.q(i), u, p.t, None)?;
                (half * v, FormulaId::Case1Bm)
            } else {
                let f = provider.resolve(&ConstantDescriptor::pickands(h, p.t * s.d(i)))?;
                let v = one_dim_parisian_asymptotic(h, p.c(i), p.q(i), u, p.t, Some(f.value))?;
                used.push(f);
                (half * v, FormulaId::Case1Fbm)
            }
        }
        None => {
            let psi = mills_psi(s.d_h * u.powf(1.0 - h));
            if h > 0.5 {
                if p.t > 0.0 {
                    return Err(Error::WrongRegime(format!(
                        "interior regime with H = {h} > 1/2 needs T_u u^(2-1/H) -> 0, \
                         which fails for T = {} > 0",
                        p.t
                    )));
                }
                (psi, FormulaId::Case2Smooth)
            } else if h == 0.5 {
                if p.t == 0.0 {
                    let d = DriftSpec::new(s.a_d, s.b_d)?;
                    (piterbarg_closed_form(&d) * psi, FormulaId::Case2BmNoDelay)
                } else {
                    let f = provider.resolve(&ConstantDescriptor::piterbarg(s.t_prime, s.a_d, s.b_d))?;
                    let v = f.value * psi;
                    used.push(f);
                    (v, FormulaId::Case2Bm)
                }
            } else {
                let f = provider.resolve(&ConstantDescriptor::pickands(h, s.d_bar * p.t))?;
                let v = f.value * s.a * u.powf((1.0 - h) * (1.0 / h - 2.0)) * psi;
                used.push(f);
                (v, FormulaId::Case2Rough)
            }
        }
    };
    let mut warnings = Vec::new();
    if value > 1.0 {
        warnings.push(format!(
            "leading-order value {value} exceeds 1; u = {u} is too small for the asymptotics"
        ));
    }
    Ok(AsymptoticResult { value, u, regime, formula_id, constants_used: used, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::provider::{FixedConstants, NoConstants};
    use crate::model::RegimeTag;
    use crate::asymptotics::{parisian_bm_exact, parisian_bm_prefactor};

    #[test]
    fn brownian_case_one_is_the_dominant_company_formula() {
        // t_* = 2 ≥ t̄_2 = 4/3: company 2 drives
        let p = ModelParams::new(1.0, 0.75, 0.5, 1.0, 0.5, 0.3).unwrap();
        let r = two_dim_parisian_asymptotic(&p, 4.0, &mut NoConstants).unwrap();
        assert_eq!(r.regime.tag, RegimeTag::RightOfT2);
        assert_eq!(r.formula_id, FormulaId::Case1Bm);
        assert_eq!(r.value, parisian_bm_prefactor(0.75, 0.3) * (-2.0f64 * 0.75 * 1.0 * 4.0).exp());
        assert_eq!(r.value, parisian_bm_exact(0.75, 4.0, 0.3));
        assert!(r.constants_used.is_empty());
    }

    #[test]
    fn boundary_halves_the_value() {
        // c=(2,1), q=(1,2), H=2/3 sits on t_1
        let p = ModelParams::new(2.0, 1.0, 1.0, 2.0, 2.0 / 3.0, 1.0).unwrap();
        let need = required_constants(&p).unwrap();
        let mut fixed = FixedConstants::new().with(need[0].clone(), 0.8, 0.01);
        let r = two_dim_parisian_asymptotic(&p, 10.0, &mut fixed).unwrap();
        let full = one_dim_parisian_asymptotic(p.h, 2.0, 1.0, 10.0, 1.0, Some(0.8)).unwrap();
        assert_eq!(r.value, 0.5 * full);
        assert_eq!(r.constants_used.len(), 1);
    }

    #[test]
    fn interior_brownian_uses_the_piterbarg_constant() {
        let p = ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.5, 1.0).unwrap();
        let need = required_constants(&p).unwrap();
        assert_eq!(need, vec![ConstantDescriptor::piterbarg(4.5, 1.0 / 3.0, 1.0 / 3.0)]);
        let mut fixed = FixedConstants::new().with(need[0].clone(), 1.9, 0.02);
        let r = two_dim_parisian_asymptotic(&p, 10.0, &mut fixed).unwrap();
        assert_eq!(r.formula_id, FormulaId::Case2Bm);
        assert_eq!(r.value, 1.9 * mills_psi(3.0 * 10f64.sqrt()));
        assert!(matches!(
            two_dim_parisian_asymptotic(&p, 10.0, &mut NoConstants),
            Err(Error::MissingConstant { .. })
        ));
    }

    #[test]
    fn interior_brownian_without_delay_needs_no_simulation() {
        let p = ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.5, 0.0).unwrap();
        let r = two_dim_parisian_asymptotic(&p, 10.0, &mut NoConstants).unwrap();
        assert_eq!(r.formula_id, FormulaId::Case2BmNoDelay);
        let d = DriftSpec::new(1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert_eq!(r.value, piterbarg_closed_form(&d) * mills_psi(3.0 * 10f64.sqrt()));
        assert!(r.constants_used.is_empty());
    }

    #[test]
    fn smooth_interior_refuses_positive_delay() {
        // c=(2,1), q=(1,2), H=0.6: t_1 = 0.75 < 1 < t_2 = 3
        let p = ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.6, 1.0).unwrap();
        assert!(matches!(
            two_dim_parisian_asymptotic(&p, 10.0, &mut NoConstants),
            Err(Error::WrongRegime(_))
        ));
        let p = ModelParams { t: 0.0, ..p };
        let r = two_dim_parisian_asymptotic(&p, 10.0, &mut NoConstants).unwrap();
        assert_eq!(r.value, mills_psi(3.0 * 10f64.powf(0.4)));
    }

    #[test]
    fn rough_interior_formula() {
        let p = ModelParams::new(1.0, 0.25, 0.25, 0.75, 0.25, 1.0).unwrap();
        let s = structural_constants(&p);
        let need = required_constants(&p).unwrap();
        let mut fixed = FixedConstants::new().with(need[0].clone(), 0.3, 0.01);
        let r = two_dim_parisian_asymptotic(&p, 8.0, &mut fixed).unwrap();
        let expect = 0.3 * s.a * 8f64.powf(0.75 * 2.0) * mills_psi(s.d_h * 8f64.powf(0.75));
        assert!((r.value - expect).abs() <= 1e-15 * expect);
        assert_eq!(r.formula_id, FormulaId::Case2Rough);
    }

    #[test]
    fn every_branch_is_positive_and_decays() {
        let cases = [
            ModelParams::new(1.0, 0.75, 0.5, 1.0, 0.5, 0.3).unwrap(),
            ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.5, 1.0).unwrap(),
            ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.5, 0.0).unwrap(),
            ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.6, 0.0).unwrap(),
            ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.25, 1.0).unwrap(),
            ModelParams::new(2.0, 1.0, 1.0, 2.0, 0.9, 1.0).unwrap(),
            ModelParams::new(1.0, 0.25, 0.25, 0.75, 0.25, 1.0).unwrap(),
        ];
        for p in cases {
            let mut fixed = FixedConstants::new();
            for d in required_constants(&p).unwrap() {
                fixed = fixed.with(d, 0.5, 0.01);
            }
            let v: Vec<f64> = [5.0, 10.0, 20.0]
                .iter()
                .map(|&u| two_dim_parisian_asymptotic(&p, u, &mut fixed).unwrap().value)
                .collect();
            assert!(v[0] > v[1] && v[1] > v[2] && v[2] > 0.0, "{p:?}: {v:?}");
        }
    }
}
