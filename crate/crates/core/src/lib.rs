//! Exact symbolic computation in the connective K-homology ring of `BU(1)`,
//! the rational Hopf ring it pairs with, and the multisymmetric function
//! algebras that describe the same objects on the cohomology side.
//!
//! Everything here is exact: coefficients are arbitrary-precision integers
//! or rationals, and every linear solve is fraction-free. The crate is
//! `no_std` + `alloc`; IO, JSON and the command line live in the companion
//! `kucomm` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod charcls;
pub mod exact;
pub mod gens;
pub mod hopf;
pub mod ku;
pub mod linalg;
pub mod multisym;
pub mod poly;
pub mod s4;

pub use exact::{Int, Rat};
