//! Numerical laboratory for convexity of `-log ∫ e^{-φ}` along Monge–Ampère
//! geodesics, Kähler–Einstein potentials and their uniqueness, on the
//! S¹-invariant model of the Riemann sphere and on convex bodies in `R^n`.
//!
//! Potentials are functions of `s = log|z|^2`; positivity of curvature is
//! convexity in `s`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convex_core;
pub mod einstein;
pub mod error;
pub mod functionals;
pub mod geodesic;
pub mod models;
pub mod prekopa_bm;

pub use error::{LabError, Result};
