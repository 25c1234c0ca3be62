//! Monte-Carlo estimation of Pickands- and Piterbarg-type constants and
//! exact/asymptotic Parisian ruin probabilities for one- and two-dimensional
//! (fractional) Brownian risk models under quota-share reinsurance.

pub mod asymptotics;
pub mod error;
pub mod estimate;
pub mod fbm;
pub mod mc_ruin;
pub mod model;
pub mod pickands;
pub mod piterbarg;
pub mod registry;
pub mod rng;
pub mod stats;
pub mod validation;
mod window;

pub use error::{Error, Result};
pub use estimate::{Estimate, SimConfig};
pub use model::{ModelParams, QuotaShareInputs, Regime, RegimeTag, StructuralConstants};
pub use registry::{ConstantDescriptor, ConstantKind, ConstantRecord, Registry, ResolvePolicy};
