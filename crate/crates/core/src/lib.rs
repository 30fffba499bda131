//! Flock generalised quadrangles in the Knarr model, hemisystems built from
//! BLT-sets, and exact certification of everything claimed about them.

pub mod blt;
pub mod error;
pub mod field;
pub mod fieldred;
pub mod hemisystem;
pub mod knarr;
pub mod polar;
pub mod pqgraph;
pub mod projspace;

mod par;

pub use error::{Error, Result};
pub use field::{FieldElement, GaloisField, QuadraticExtension};
pub use projspace::{Subspace, Vector};
