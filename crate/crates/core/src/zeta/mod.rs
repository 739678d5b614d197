//! Riemann, Hurwitz and periodic Hurwitz zeta-functions on `Re s > -1`.
//!
//! Every evaluation goes through the Euler–Maclaurin formula with an explicit
//! remainder bound: the truncation index starts at `N = max(⌈|t|⌉, 20)` and
//! the Bernoulli order grows until the bound drops below
//! [`EvalControls::abs_tol`]. If no order suffices, `N` is doubled, up to
//! [`EvalControls::max_terms`].

mod bernoulli;
mod euler_maclaurin;
mod grid;
mod sequence;

use num_complex::Complex64;
use thiserror::Error;

pub use grid::ShiftedGrid;
pub use sequence::{HurwitzParameter, PeriodicSequence, Provenance};

use crate::complex::is_finite;
use euler_maclaurin::regular_tail;

/// Evaluations closer than this to `s = 1` are rejected when a pole is present.
pub const POLE_EXCLUSION_RADIUS: f64 = 1e-8;

/// Smallest accepted `abs_tol`.
pub const MIN_ABS_TOL: f64 = 1e-15;

/// Lower edge of the supported half-plane.
pub const MIN_SIGMA: f64 = -1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("s = {0} is within {POLE_EXCLUSION_RADIUS:e} of the pole at s = 1")]
    PoleAtOne(Complex64),
    #[error("accuracy {abs_tol:e} unreachable at s = {s} within {max_terms} terms")]
    AccuracyUnreachable {
        s: Complex64,
        abs_tol: f64,
        max_terms: usize,
    },
    #[error("s = {0} is outside the supported half-plane Re s > -1")]
    UnsupportedRegion(Complex64),
    #[error("non-finite argument or result at s = {0}")]
    NonFinite(Complex64),
    #[error("invalid evaluation controls: {0}")]
    InvalidControls(String),
    #[error("Hurwitz parameter {0} is outside (0, 1]")]
    InvalidParameter(f64),
    #[error("invalid periodic sequence: {0}")]
    InvalidSequence(String),
}

/// Accuracy controls for a single evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalControls {
    /// Target absolute error of the truncation.
    pub abs_tol: f64,
    /// Cap on the number of directly summed terms per Hurwitz component.
    pub max_terms: usize,
}

impl EvalControls {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self, ZetaError> {
        if !(abs_tol >= MIN_ABS_TOL) || !abs_tol.is_finite() {
            return Err(ZetaError::InvalidControls(format!(
                "abs_tol {abs_tol:e} must be finite and at least {MIN_ABS_TOL:e}"
            )));
        }
        if max_terms < 16 {
            return Err(ZetaError::InvalidControls(format!(
                "max_terms {max_terms} must be at least 16"
            )));
        }
        Ok(Self { abs_tol, max_terms })
    }

    pub fn with_tol(abs_tol: f64) -> Result<Self, ZetaError> {
        Self::new(abs_tol, Self::default().max_terms)
    }
}

impl Default for EvalControls {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_terms: 10_000_000,
        }
    }
}

/// `ζ(s)`.
pub fn eval_riemann_zeta(s: Complex64, ctl: &EvalControls) -> Result<Complex64, ZetaError> {
    hurwitz_with_pole(s, 1.0, ctl)
}

/// `ζ(s, α)`.
pub fn eval_hurwitz_zeta(
    s: Complex64,
    a: &HurwitzParameter,
    ctl: &EvalControls,
) -> Result<Complex64, ZetaError> {
    hurwitz_with_pole(s, a.value(), ctl)
}

/// `ζ(s, α; B) = k^{-s} Σ_{m<k} b_m ζ(s, (m+α)/k)`.
///
/// When the residue `(1/k) Σ b_m` vanishes the function is entire and `s = 1`
/// is accepted.
pub fn eval_periodic_hurwitz(
    s: Complex64,
    a: &HurwitzParameter,
    b: &PeriodicSequence,
    ctl: &EvalControls,
) -> Result<Complex64, ZetaError> {
    periodic_combination(s, a.value(), b, ctl)
}

/// The residue `(1/k) Σ b_m` of `ζ(s, α; B)` at `s = 1`.
pub fn residue_at_one(b: &PeriodicSequence) -> Complex64 {
    b.mean()
}

/// A periodic Hurwitz series `Σ_{j≥0} b_{j mod k} (j+α)^{-s}` bundled with
/// its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicHurwitz {
    alpha: HurwitzParameter,
    seq: PeriodicSequence,
}

impl PeriodicHurwitz {
    pub fn new(alpha: HurwitzParameter, seq: PeriodicSequence) -> Self {
        Self { alpha, seq }
    }

    pub fn riemann() -> Self {
        Self::new(
            HurwitzParameter::new(1.0).expect("1 is a valid parameter"),
            PeriodicSequence::constant(Complex64::new(1.0, 0.0)),
        )
    }

    pub fn alpha(&self) -> &HurwitzParameter {
        &self.alpha
    }

    pub fn sequence(&self) -> &PeriodicSequence {
        &self.seq
    }

    pub fn eval(&self, s: Complex64, ctl: &EvalControls) -> Result<Complex64, ZetaError> {
        periodic_combination(s, self.alpha.value(), &self.seq, ctl)
    }

    pub fn residue(&self) -> Complex64 {
        residue_at_one(&self.seq)
    }

    pub(crate) fn has_pole(&self) -> bool {
        !residue_is_zero(&self.seq)
    }
}

fn residue_is_zero(b: &PeriodicSequence) -> bool {
    b.mean().norm() <= 8.0 * f64::EPSILON * b.abs_sum() / b.period() as f64
}

fn check_point(s: Complex64) -> Result<(), ZetaError> {
    if !is_finite(s) {
        return Err(ZetaError::NonFinite(s));
    }
    if s.re <= MIN_SIGMA {
        return Err(ZetaError::UnsupportedRegion(s));
    }
    Ok(())
}

fn near_pole(s: Complex64) -> bool {
    (s - 1.0).norm() < POLE_EXCLUSION_RADIUS
}

fn finite_or(s: Complex64, z: Complex64) -> Result<Complex64, ZetaError> {
    if is_finite(z) {
        Ok(z)
    } else {
        Err(ZetaError::NonFinite(s))
    }
}

fn hurwitz_with_pole(s: Complex64, a: f64, ctl: &EvalControls) -> Result<Complex64, ZetaError> {
    check_point(s)?;
    if near_pole(s) {
        return Err(ZetaError::PoleAtOne(s));
    }
    let reg = hurwitz_regular(s, a, ctl.abs_tol, ctl.max_terms)?;
    finite_or(s, reg + 1.0 / (s - 1.0))
}

pub(crate) fn initial_terms(t: f64) -> usize {
    (t.abs().ceil() as usize).max(20)
}

/// `ζ(s, a) - 1/(s-1)` with truncation error at most `tol`.
fn hurwitz_regular(s: Complex64, a: f64, tol: f64, max_terms: usize) -> Result<Complex64, ZetaError> {
    let mut n = initial_terms(s.im);
    loop {
        if n > max_terms {
            return Err(ZetaError::AccuracyUnreachable {
                s,
                abs_tol: tol,
                max_terms,
            });
        }
        if let Some(tail) = regular_tail(s, a, n, tol) {
            let direct: Complex64 = (0..n).map(|i| (-s * (i as f64 + a).ln()).exp()).sum();
            return Ok(direct + tail);
        }
        n *= 2;
    }
}

fn periodic_combination(
    s: Complex64,
    alpha: f64,
    b: &PeriodicSequence,
    ctl: &EvalControls,
) -> Result<Complex64, ZetaError> {
    check_point(s)?;
    let pole = !residue_is_zero(b);
    if pole && near_pole(s) {
        return Err(ZetaError::PoleAtOne(s));
    }
    let k = b.period() as f64;
    let weight = k.powf(-s.re) * b.abs_sum();
    if weight == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let tol = ctl.abs_tol / weight;
    let mut sum = Complex64::new(0.0, 0.0);
    for (m, &bm) in b.values().iter().enumerate() {
        if bm == Complex64::new(0.0, 0.0) {
            continue;
        }
        let a = (m as f64 + alpha) / k;
        sum += bm * hurwitz_regular(s, a, tol, ctl.max_terms)?;
    }
    let k_pow = (-s * k.ln()).exp();
    let mut value = k_pow * sum;
    if pole {
        value += k * k_pow * b.mean() / (s - 1.0);
    }
    finite_or(s, value)
}
