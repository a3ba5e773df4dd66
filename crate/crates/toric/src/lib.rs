//! Exact-arithmetic toolkit for canonical toric Fano varieties defined by
//! lattice polytopes: classification predicates, stringy E-functions and
//! stringy Euler numbers, and verifiers for the combinatorial identities they
//! satisfy (the 24 identity and the stringy Libgober-Wood identity).
//!
//! All geometry is computed over arbitrary-precision integers and rationals;
//! there is no floating point anywhere.

pub mod error;
pub mod fan;
pub mod fano;
pub mod identities;
pub mod linalg;
pub mod polytope;
pub mod stringy;

pub use error::{Error, Result};
