//! Worst-case analysis of the fixed-step gradient method on smooth functions.
//!
//! Everything revolves around one question: over all functions with an
//! `L`-Lipschitz gradient and initial gap `f(x1) - f_star <= delta`, how large
//! can `min_k ||grad f(x_k)||` be after running gradient descent with a fixed
//! step schedule? The crate answers it four independent ways and cross-checks
//! them against each other:
//!
//! - [`bounds`] evaluates the closed-form worst-case bounds, per-step weights,
//!   and the schedule that optimizes them.
//! - [`pep`] + [`sdp`] assemble the finite performance-estimation program in
//!   Gram-matrix form and solve it with a dense primal-dual interior-point
//!   method, giving the exact worst case numerically.
//! - [`certify`] rebuilds the dual multipliers that prove the main bound and
//!   machine-checks the aggregation identity behind the proof.
//! - [`tight`] constructs the univariate piecewise-quadratic instance on which
//!   gradient descent attains the bound exactly, and simulates it.
//!
//! [`interp`] provides the smooth interpolation conditions that tie the finite
//! formulation to actual functions.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature and enable `libm` for embedded or kernel targets.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is the NaN-rejecting form of the validations here.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index-based loops are clearer than iterator chains in the dense kernels
#![allow(clippy::needless_range_loop)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("pepgrad-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod bounds;
pub mod certify;
mod error;
pub mod interp;
pub mod linalg;
mod num;
pub mod pep;
mod problem;
pub mod sdp;
pub mod tight;

pub use error::CoreError;
pub use problem::{
    classify_regime, IterateTriple, RegimeClass, SmoothProblemSpec, StepSchedule, SQRT_3, TOL_EQ,
};
