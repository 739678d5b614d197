//! Compact sets in vertical strips, sampling grids, sup-norm distances and
//! admissible target functions.

mod compact;
mod fit;
mod target;

use num_complex::Complex64;
use thiserror::Error;

pub use compact::{sample_points, sample_points_capped, CompactSet, SampleGrid, Shape, DEFAULT_POINT_CAP};
pub use fit::{polynomial_target, FittedPolynomial, DEFAULT_DEGREE, MAX_CONDITION};
pub use target::{exp_polynomial_target, TargetFunction, TargetKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TargetError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("compact set spans Re s in [{lo}, {hi}], not inside the open strip ({a}, {b})")]
    OutsideStrip { lo: f64, hi: f64, a: f64, b: f64 },
    #[error("mesh {0} must be positive and finite")]
    InvalidMesh(f64),
    #[error("mesh too fine: {points} sample points exceed the cap of {cap}")]
    MeshTooFine { points: usize, cap: usize },
    #[error("need at least {needed} samples for degree {degree}, got {got}")]
    InsufficientSamples { needed: usize, got: usize, degree: usize },
    #[error("sample points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("least-squares system is ill-conditioned (condition estimate {0:.3e})")]
    IllConditioned(f64),
    #[error("tabulated target has no value at s = {0}")]
    NotTabulated(Complex64),
    #[error("non-finite sample value at s = {0}")]
    NonFinite(Complex64),
}

/// `max_{s ∈ grid} |g(s) - f(s)|`, a lower bound on the sup over the
/// compact set. The grid mesh bounds the discretization error through any
/// Lipschitz constant of `g - f`.
pub fn sup_distance<G, E>(g: G, f: &TargetFunction, grid: &SampleGrid) -> Result<f64, E>
where
    G: Fn(Complex64) -> Result<Complex64, E>,
    E: From<TargetError>,
{
    let mut sup = 0.0f64;
    for &s in grid.points() {
        let d = (g(s)? - f.value(s)?).norm();
        sup = sup.max(d);
    }
    Ok(sup)
}
