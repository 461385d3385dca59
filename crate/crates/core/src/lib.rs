//! Exact computations around quadratic refinements of intersection forms:
//! integral lattices and Gauss sums, cochain-level Wu classes and Steenrod
//! squares on triangulated manifolds, differential cochains, characteristic
//! series, and simplicial abelian groups.

pub mod differential;
pub mod error;
pub mod finite_form;
pub mod homotopy;
pub mod lattice;
pub mod linalg;
pub mod rng;
pub mod selftest;
pub mod series;
pub mod topology;

pub use error::{Error, Result};
