//! Dirac operators, weight-pair positivity criteria, and desk-scale numerical
//! verification of weighted Hardy-Carleman inequalities `c ||a u|| <= ||b H u||`.
//!
//! The crate has four layers:
//!
//! * [`clifford`] constructs the Hermitian anticommuting matrix families
//!   behind a Dirac operator in any spatial dimension, exactly.
//! * [`weights`] is a catalogue of radial weight pairs `(a, b)` with analytic
//!   derivatives, plus the scalar radial reductions of the positivity
//!   criteria that govern when the inequality holds.
//! * [`dirac`] discretizes spinor fields on a periodic grid and applies the
//!   free, massive, and magnetic Dirac operators with spectral accuracy.
//! * [`verifier`] evaluates criteria, computes predicted constants, measures
//!   Rayleigh quotients over seeded families of admissible test functions,
//!   and emits machine-readable reports.
//!
//! The narrative guide in `book/` walks through each concept; its code
//! listings compile and run as doc-tests of this crate (see [`guide`]).

pub mod clifford;
pub mod dirac;
pub mod error;
pub mod guide;
pub mod verifier;
pub mod weights;

mod rng;

pub use error::{Error, Result};
