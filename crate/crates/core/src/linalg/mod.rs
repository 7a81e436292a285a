//! Gram matrices, wedge volumes, projections and symmetric polynomials.

mod family;
mod gram;
mod project;
mod symmetric_poly;

pub use family::{dot, norm, VectorFamily};
pub use gram::{gram, wedge_volume, EigenSpectrum, GramMatrix, CLAMP_REL, LOG_PRODUCT_MIN_K};
pub use project::{complement_direction, orthonormal_basis, project_complement};
pub use symmetric_poly::{elementary_symmetric, elementary_symmetric_all};
