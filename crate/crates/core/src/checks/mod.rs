//! Margin-reporting verifiers for the scalar and vector inequalities.
//!
//! Every checker returns a signed margin, `RHS - LHS` of the inequality in
//! the direction in which it is expected to hold, so negative means violated.

mod maclaurin;
mod newton;
mod nonsharp;
pub(crate) mod reduction;
mod simplex;
mod szasz;

pub use maclaurin::{
    check_classical_maclaurin, check_vector_maclaurin, check_vector_maclaurin_with, MaclaurinReport,
    Verdict,
};
pub use newton::{check_vector_newton, newton_margin};
pub use nonsharp::{check_nonsharp, nonsharp_bound, NonSharpReport};
pub use reduction::{check_reduction, check_reduction_at, ratio_r, RatioPair};
pub use simplex::{barycentric_coordinates, check_claim, Barycentric};
pub use szasz::{check_szasz, SzaszReport};

/// Default verdict tolerance on normalized means.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Margins this small are reported as equality.
pub const EQUALITY_TOLERANCE: f64 = 1e-12;

/// Knobs shared by the enumeration-based checkers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub tolerance: f64,
    pub cap: u128,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            cap: crate::subsets::DEFAULT_SUBSET_CAP,
        }
    }
}
