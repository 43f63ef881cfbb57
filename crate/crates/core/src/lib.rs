//! Exact polyhedral chains with prescribed weighted Gaussian images.
//!
//! The crate builds cycles, fillings and positively oriented multigraphs whose
//! tangent-plane distributions approximate a finite atomic measure on the
//! oriented Grassmannian, and evaluates anisotropic energies on them.

pub mod chains;
pub mod constructions;
pub mod energy;
pub mod grassmann;
pub mod linalg;
pub mod rational;
pub mod torus;
