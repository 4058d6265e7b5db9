// SPDX-License-Identifier: Apache-2.0
//! Verification toolkit for equivariant special-value identities: exact cyclotomic and
//! group-ring algebra, p-adic rings at fixed precision, Gauss sums, Euler factors, Coleman
//! maps, determinant calculus and Dirichlet L-values.

// Index loops mirror the matrix formulas; `from_*_like` constructors are deliberate.
#![allow(clippy::needless_range_loop, clippy::wrong_self_convention)]

pub mod algebra_core;
pub mod cli;
pub mod coleman;
pub mod det_calculus;
pub mod error;
pub mod euler_units;
pub mod gauss_sums;
pub mod lfunctions;
pub mod local_ring;

pub use error::{Error, Result};
