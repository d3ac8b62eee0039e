//! Exact Ehrhart δ-vectors of lattice polytopes.
//!
//! The crate computes δ-vectors (h*-vectors) with two independent engines,
//! checks symmetry and inequality properties, builds the shifted-symmetric
//! polytope families, and classifies shifted-symmetric (0,1) δ-vectors of
//! normalized volume at most five.

pub mod error;
pub mod exactla;
pub mod polytope;
pub mod ehrhart;
pub mod deltaprops;
pub mod families;
pub mod classify;
pub mod cli;

pub use error::{Error, Result};
