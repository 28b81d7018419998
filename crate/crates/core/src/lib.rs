//! Exact integral computations on the first two pages of the homotopy
//! spectral sequence of the cosimplicial model for long knots, and the
//! unitrivalent graph picture of its diagonal.

pub mod bracket;
pub mod config_space;
pub mod correspondence;
pub mod cosimplicial;
pub mod spectral;
pub mod utg;
pub mod zlinalg;

pub use bracket::{Gen, LinearCombo, Term};
