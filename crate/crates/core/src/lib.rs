//! Exact Chevalley–Eilenberg cohomology and almost complex structure
//! classification on finite-dimensional real Lie algebras.

pub mod acs;
pub mod catalog;
pub mod error;
pub mod expr;
pub mod families;
pub mod form;
pub mod lie;
pub mod linalg;
pub mod manifest;
pub mod purefull;
pub mod scalar;
pub mod symplectic;

pub use error::{Error, Result};
pub use form::{KForm, MultiIndex};
pub use scalar::{CScalar, Rational};
