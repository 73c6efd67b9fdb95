//! Semiclassical discrete orthogonal polynomials on the non-negative integers.
//!
//! The crate builds monic orthogonal polynomials for weights fixed by a
//! discrete Pearson equation, in arbitrary precision, and checks the
//! structure and contiguous-shift identities they satisfy. Everything is
//! `no_std` with `alloc`.

#![no_std]

extern crate alloc;

pub mod banded;
pub mod bigreal;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod orthopoly;
pub mod report;
pub mod structure;
pub mod suites;
pub mod transforms;
pub mod weights;

pub use bigreal::BigReal;
pub use error::{Error, Result};
pub use orthopoly::OrthoSystem;
pub use report::VerificationReport;
pub use weights::{ParameterSet, PearsonWeight, ShiftKind, ShiftSpec};

/// Extra bits carried through series summation.
pub const GUARD_BITS: usize = 64;
