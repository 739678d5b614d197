//! Numerical laboratory for mixed joint universality of zeta-functions.
//!
//! The crate evaluates the Riemann, Hurwitz and periodic Hurwitz
//! zeta-functions on vertical strips, represents Euler-product members of
//! the Matsumoto and Steuding classes, and measures how often vertical
//! shifts `s + iτ` approximate prescribed target functions on compact sets.
//!
//! Module map:
//!
//! * [`zeta`]: Euler–Maclaurin evaluation with explicit truncation bounds.
//! * [`matsumoto`]: polynomial Euler factors, Dirichlet coefficients, class audits.
//! * [`targets`]: compact sets, sampling grids, sup distances, polynomial targets.
//! * [`density`]: shift scans, hit intervals and the density curve `ε ↦ D_T(ε)`.
//! * [`joint`]: several periodic Hurwitz functions scanned jointly with `φ`.
//! * [`lab`]: experiment configuration, CSV artifacts and run manifests.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod density;
pub mod joint;
pub mod lab;
pub mod matsumoto;
pub mod primes;
pub mod targets;
pub mod zeta;

pub use complex::{parse_complex, ComplexValue, ScalarLiteral};
