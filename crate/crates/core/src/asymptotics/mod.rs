//! Closed-form and leading-order ruin probabilities.

mod bm;
mod mills;
mod one_dim;
mod provider;
mod small_h;
mod tu;
mod two_dim;

pub use bm::{classical_bm_ruin, parisian_bm_exact, parisian_bm_prefactor};
pub use mills::{log_mills_psi, mills_psi, mills_psi_asymptotic, normal_cdf};
pub use one_dim::{one_dim_parisian_asymptotic, one_dim_pickands_window};
pub use provider::{ConstantProvider, FixedConstants, NoConstants, ResolvedConstant};
pub use small_h::{small_h_bounds, SmallHBounds};
pub use tu::{check_Tu_condition, TuLimit};
pub use two_dim::{required_constants, two_dim_parisian_asymptotic, AsymptoticResult, FormulaId};
