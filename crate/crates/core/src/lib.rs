//! Exact F_p computations of the V(1)-homotopy of THH and TC of the
//! connective Adams summand modulo p, by spectral sequence
//! pages over finite degree windows.

pub mod checks;
pub mod error;
pub mod fp_linalg;
pub mod graded_algebra;
pub mod instances;
pub mod invariants;
pub mod numerics;
pub mod par;
pub mod report;
pub mod spectral_sequence;
pub mod steenrod;
pub mod tc;

pub use error::{Error, Result};
