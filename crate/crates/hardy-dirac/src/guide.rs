//! The book chapters from `book/`, embedded so that every code listing in the
//! guide compiles and runs under `cargo test --doc`.
//!
//! Each module below renders one chapter; the content lives in
//! `book/src/*.md` and is the same markdown that `mdbook build book` turns
//! into the rendered guide.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/clifford-families.md")]
pub mod clifford_families {}

#[doc = include_str!("../../../book/src/weight-pairs.md")]
pub mod weight_pairs {}

#[doc = include_str!("../../../book/src/discretization.md")]
pub mod discretization {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/power-weights.md")]
pub mod power_weights {}

#[doc = include_str!("../../../book/src/magnetic-fields.md")]
pub mod magnetic_fields {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
