//! The family X: w² = x⁶ + y⁶ + z⁶ + t x²y²z², its divisor catalog and
//! automorphisms.

mod aut;
mod curve;
pub mod family;
pub mod fibers;
pub mod inose;
pub mod structure;
mod orbit;
pub mod tritangent;

pub use aut::{galois_generators, h_generators, parse_word, Atom, Psi, SurfAut};
pub use curve::{
    b4_as_printed, divisor_catalog, sextic, xyz_ring, DivisorCurve, EmbeddedCurve, FamilyEquation,
};
pub use orbit::{orbit_generate, Orbit};
