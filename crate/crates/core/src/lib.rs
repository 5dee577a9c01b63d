//! Orbit dimensions of bosonic multimode states under passive, displaced, active and full
//! Gaussian linear-optical groups.
//!
//! States live in sparse Fock representation. The orbit of a state under a group is a smooth
//! manifold whose dimension equals the real rank of the tangent vectors generated by a basis of
//! the group's Lie algebra; [`orbit::orbit_dimension`] computes it from a Gram matrix spectrum.
//! The [`dynamics`] module recovers the same Gram entries from overlaps of time-evolved copies.

// Negated float comparisons deliberately treat NaN as a failed check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#![no_std]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod generators;
pub mod linalg;
pub mod orbit;

pub use error::{Error, Result};
pub use fock::{outer, DensityOperator, Occupation, SparseKet, SparseOperator};
pub use generators::{Generator, GroupKind, LieBasis};
pub use orbit::{gram, orbit_dimension, PictureKind};
