//! Ray class fields of imaginary quadratic fields, Siegel-Ramachandra invariants
//! and numerical checks that their norms generate abelian extensions.

pub mod abgroup;
pub mod bigcomplex;
pub mod chars;
pub mod clgroup;
pub mod conjecture;
pub mod error;
pub mod fixtures;
pub mod kronecker;
pub mod qfield;
pub mod rayclass;
pub mod report;
pub mod siegel;

pub use error::{Error, Result};
