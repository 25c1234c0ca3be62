use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Monte-Carlo settings shared by the constant estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Truncation half-width of the time axis.
    pub m: f64,
    /// Grid step.
    pub tau: f64,
    /// Denominator grid step (Pickands only); defaults to `tau`.
    pub eta: Option<f64>,
    pub n: u64,
    pub seed: u64,
}

impl SimConfig {
    pub const DEFAULT_TAU: f64 = 0.005;
    pub const DEFAULT_N: u64 = 10_000;

    pub fn new(m: f64, tau: f64, n: u64, seed: u64) -> Self {
        SimConfig { m, tau, eta: None, n, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::invalid(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.m >= self.tau && self.m.is_finite()) {
            return Err(Error::invalid(format!("need tau <= M, got M={} tau={}", self.m, self.tau)));
        }
        if self.n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::invalid(format!("eta must be positive, got {eta}")));
            }
        }
        Ok(())
    }
}

/// A Monte-Carlo result together with the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub n: u64,
    pub config: SimConfig,
    /// Analytic `(lower, upper)` bounds for the estimated quantity, if known.
    pub bounds: Option<(f64, f64)>,
    /// Analytic bound on the error from truncating the time axis, if known.
    pub trunc_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Estimate {
    pub fn from_samples(samples: &[f64], config: SimConfig) -> Self {
        let (value, std_error) = crate::stats::mean_and_std_error(samples);
        Estimate {
            value,
            std_error,
            n: samples.len() as u64,
            config,
            bounds: None,
            trunc_bound: None,
            warnings: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(7.0, 0.005, 10, 0).validate().is_ok());
        assert!(SimConfig::new(0.001, 0.005, 10, 0).validate().is_err());
        assert!(SimConfig::new(7.0, 0.0, 10, 0).validate().is_err());
        assert!(SimConfig::new(7.0, 0.005, 0, 0).validate().is_err());
        let mut c = SimConfig::new(7.0, 0.005, 10, 0);
        c.eta = Some(-1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn estimate_from_samples() {
        let e = Estimate::from_samples(&[1.0, 3.0], SimConfig::new(1.0, 0.1, 2, 0));
        assert_eq!(e.value, 2.0);
        assert_eq!(e.n, 2);
        assert!((e.std_error - 1.0).abs() < 1e-15);
    }
}
