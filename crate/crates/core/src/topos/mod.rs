//! Category-level structure: limits of T-sets, the sheaf topos, and the
//! exposition example.

pub mod exposition;
pub mod sheaves;
pub mod tsets;

pub use exposition::{exposition_counterexample, ExpositionReport};
pub use sheaves::{check_topos_axioms, classify, exponential, omega, sg_check, Omega, Pool};
