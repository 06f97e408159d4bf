//! Uniform-grid discretization of spinor fields and the Dirac operators
//! acting on them.
//!
//! Fields live on a periodic box `[-R, R]^n`; admissible test functions are
//! supported in an annulus strictly inside the box, so periodization plays no
//! role at the accuracy of the spectral derivatives.

mod field;
mod grid;
mod ops;
pub(crate) mod spectral;

pub use field::{
    bump_profile, gauge_transform, make_annulus_bump, MagneticPotential, SpinorField,
};
pub use grid::GridSpec;
pub use ops::{
    apply_angular_operator, apply_dirac, apply_magnetic_dirac, apply_variant,
    commutator_residual, spectral_laplacian, OperatorVariant,
};
