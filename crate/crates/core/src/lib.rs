//! Adjoint-free recovery of linear operators.
//!
//! The crate has two halves. [`sketch`] studies the finite-dimensional
//! problem: how far apart can two rank-`k`, near-symmetric matrices be when
//! they agree on a sketch `AX = FX`? [`adjoint_free`] approximates the
//! solution operator `A` of an elliptic PDE by `A P_n`, querying `A` only on
//! eigenfunctions of a self-adjoint prior `L`, and certifies the error with
//! the forward-computable constant `‖L A*‖`.
//!
//! [`linalg`] and [`pde`] hold the dense kernels and the finite-difference
//! machinery they share. Everything here is `no_std` + `alloc`; IO, file
//! formats and the command line live in the `adjfree` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod adjoint_free;
mod error;
pub mod linalg;
pub(crate) mod math;
pub mod pde;
pub mod sketch;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, Seed, SvdTriple};
