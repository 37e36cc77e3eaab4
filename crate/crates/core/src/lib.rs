//! Exact computations of difference (σ-twisted) cohomology in finite models.

pub mod cech;
pub mod complex;
pub mod error;
pub mod field;
pub mod galois;
pub mod json;
pub mod linalg;
pub mod quadratic;
pub mod run;
pub mod sigma;
pub mod simplicial;
pub mod suite;

pub use error::{Error, Result};
