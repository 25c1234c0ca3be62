use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::ConstantDescriptor;

/// A constant value handed to an asymptotic formula, with where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConstant {
    pub descriptor: ConstantDescriptor,
    pub value: f64,
    pub std_error: f64,
    /// `registry:<key>`, `simulated:<key>` or `supplied`.
    pub source: String,
}

/// Supplies simulated Pickands/Piterbarg constants to the asymptotic
/// formulas.
pub trait ConstantProvider {
    fn resolve(&mut self, descriptor: &ConstantDescriptor) -> Result<ResolvedConstant>;
}

/// Provider backed by values given up front.
#[derive(Debug, Clone, Default)]
pub struct FixedConstants {
    entries: Vec<(ConstantDescriptor, f64, f64)>,
}

impl FixedConstants {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, descriptor: ConstantDescriptor, value: f64, std_error: f64) -> Self {
        self.entries.push((descriptor, value, std_error));
        self
    }
}

impl ConstantProvider for FixedConstants {
    fn resolve(&mut self, descriptor: &ConstantDescriptor) -> Result<ResolvedConstant> {
        self.entries
            .iter()
            .find(|(d, _, _)| d.matches(descriptor))
            .map(|(d, v, se)| ResolvedConstant {
                descriptor: d.clone(),
                value: *v,
                std_error: *se,
                source: "supplied".into(),
            })
            .ok_or_else(|| Error::MissingConstant { descriptor: descriptor.to_string() })
    }
}

/// Provider that never has anything; formulas needing no constants work with it.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoConstants;

impl ConstantProvider for NoConstants {
    fn resolve(&mut self, descriptor: &ConstantDescriptor) -> Result<ResolvedConstant> {
        Err(Error::MissingConstant { descriptor: descriptor.to_string() })
    }
}
