//! Exact computations on even hyperbolic lattices: root enumeration, Weyl
//! chambers, nef-preserving isometry groups, Sterk-style fundamental domains
//! and orbit tables of nodal, elliptic and genus-g classes.
//!
//! All arithmetic is over arbitrary precision integers and rationals.

pub mod arith;
pub mod binary;
pub mod cone;
pub mod enumerate;
pub mod error;
pub mod group;
pub mod io;
pub mod lattice;
pub mod orbits;
pub mod sterk;
pub mod weyl;

pub use error::{Error, Result};
pub use lattice::{validate_problem, ClassVector, Isometry, Lattice, Problem};
