//! Exact Kirwan-Ness stratification of symplectic representations and
//! exactness certificates for twisted quantum Hamiltonian reduction.
//!
//! The pipeline runs [`kn::enumerate_kn`] to list the destabilizing
//! one-parameter subgroups, [`shift::compute_shift`] for the shift and slice
//! semigroup of each, and [`exactness::check`] or [`exactness::forbidden`] to
//! decide a parameter. All arithmetic is exact; the perturbation parameter is
//! kept symbolic. [`oracle`] re-derives the strata independently at concrete
//! values of the perturbation.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod convex;
pub mod error;
pub mod exactness;
pub mod group;
pub mod io;
pub mod kn;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod semigroup;
pub mod shift;
pub mod vector;

pub use error::{KnxError, Result};
