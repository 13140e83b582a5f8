//! Exact computation of the geometric Picard lattice of the double sextic
//! family w² = x⁶ + y⁶ + z⁶ + t x²y²z².

pub mod cohomology;
pub mod error;
pub mod field;
pub mod group;
pub mod indexcheck;
pub mod intersect;
pub mod latbuild;
pub mod lattice;
pub mod pipeline;
pub mod poly;
pub mod stages;
pub mod surface;

pub use error::{Error, Result};
