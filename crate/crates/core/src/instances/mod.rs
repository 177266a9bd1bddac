//! Concrete spectral sequences.

pub mod bokstedt;
pub mod degree_checks;
pub mod hh;
pub mod tate;
pub mod v1;
