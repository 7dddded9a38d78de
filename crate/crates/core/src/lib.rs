//! Honeycomb measures on the triangular lattice and the lattice polynomials
//! they produce for Schubert intersection problems with a unique solution.
//!
//! The crate is organised bottom-up:
//!
//! * [`trilattice`]: coordinates, directions and the triangle `Δ_r`.
//! * [`measure`]: balanced integer edge measures, their boundary data and
//!   the set-triple presentation `(n, I, J, K)`.
//! * [`hive`]: exhaustive enumeration, Littlewood-Richardson coefficients,
//!   the recursive Horn test and honeycombs.
//! * [`rigidity`]: evil turns, evil loops and the rigidity test.
//! * [`skeleton`]: descendance, root edges and extremal decomposition.
//! * [`synth`]: lattice polynomials and the recursive synthesis.
//! * [`flagcheck`]: exact linear algebra over a prime field and a numerical
//!   eigenvalue check.
//! * [`census`]: sweeps over every triple of a given size.

pub mod census;
pub mod error;
pub mod flagcheck;
pub mod hive;
pub mod measure;
pub mod rigidity;
pub mod skeleton;
pub mod synth;
pub mod trilattice;

pub use error::{Error, Result};
pub use measure::{BoundaryData, SetTriple, TriMeasure};
pub use trilattice::{Chirality, Direction, EdgeRef, LatticePoint, Side};

#[cfg(test)]
mod testutil;
