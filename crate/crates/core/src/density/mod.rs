//! Shift scans `τ ↦ (d₁(τ), d₂(τ))`, hit intervals, and the empirical
//! density `D_T(ε) = (1/T) meas{τ ∈ [0,T] : max(d₁, d₂) < ε}`.

mod intervals;
mod scan;

use thiserror::Error;

pub use intervals::{
    best_shift, convergence_diagnostic, density_curve, density_curve_from_hits, density_estimate, hit_intervals,
    ConvergenceReport, ConvergenceRow, DensityCurve, DensityPoint, HitIntervals, Refiner,
};
pub use scan::{
    scan_shifts, shifted_values, Component, ScanSetup, ShiftProblem, DEFAULT_MESH,
};

use crate::targets::TargetError;
use crate::zeta::ZetaError;

/// Default coarse step.
pub const DEFAULT_DELTA: f64 = 0.05;
/// Default bisection depth at threshold crossings.
pub const DEFAULT_REFINE_DEPTH: u32 = 20;
/// Deepest accepted bisection.
pub const MAX_REFINE_DEPTH: u32 = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScanError {
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),
    /// A hypothesis of the approximation theorem fails.
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("evaluation failed at tau = {tau}: {message}")]
    Evaluator { tau: f64, message: String },
    #[error("no records")]
    NoRecords,
    #[error(
        "density decreases from {previous} to {current} at epsilon = {epsilon} beyond the \
         refinement uncertainty {allowed}"
    )]
    MonotonicityViolation {
        epsilon: f64,
        previous: f64,
        current: f64,
        allowed: f64,
    },
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

/// Coarse grid `τ = start, start+δ, …` over `[start, start+T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub t_max: f64,
    pub delta: f64,
    pub refine_depth: u32,
    pub epsilon_grid: Vec<f64>,
    pub start: f64,
}

impl ScanConfig {
    pub fn new(t_max: f64, delta: f64, refine_depth: u32, epsilon_grid: Vec<f64>) -> Result<Self, ScanError> {
        let cfg = Self {
            t_max,
            delta,
            refine_depth,
            epsilon_grid,
            start: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_start(mut self, start: f64) -> Result<Self, ScanError> {
        self.start = start;
        self.validate()?;
        Ok(self)
    }

    /// A step coarser than `T/100` is accepted with a warning.
    pub fn validate(&self) -> Result<(), ScanError> {
        let bad = |m: String| Err(ScanError::InvalidConfig(m));
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("T = {} must be positive", self.t_max));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return bad(format!("delta = {} must be positive", self.delta));
        }
        if self.delta > self.t_max {
            return bad(format!("delta = {} exceeds T = {}", self.delta, self.t_max));
        }
        if !self.start.is_finite() {
            return bad(format!("start = {} must be finite", self.start));
        }
        if self.refine_depth > MAX_REFINE_DEPTH {
            return bad(format!("refine_depth {} exceeds {MAX_REFINE_DEPTH}", self.refine_depth));
        }
        if self.epsilon_grid.is_empty() {
            return bad("epsilon grid is empty".into());
        }
        if self.epsilon_grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return bad("epsilon values must be positive and finite".into());
        }
        if self.epsilon_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("epsilon grid must be strictly increasing".into());
        }
        if self.delta > self.t_max / 100.0 {
            log::warn!(
                "coarse step {} exceeds T/100 = {}; features narrower than the step are invisible",
                self.delta,
                self.t_max / 100.0
            );
        }
        Ok(())
    }

    /// Grid shifts: `start + iδ` for `iδ ≤ T`, plus `start + T` if the step
    /// does not land on it.
    pub fn taus(&self) -> Vec<f64> {
        let n = (self.t_max / self.delta * (1.0 + 1e-12)).floor() as usize;
        let mut taus: Vec<f64> = (0..=n).map(|i| self.start + i as f64 * self.delta).collect();
        let end = self.start + self.t_max;
        let last = *taus.last().expect("at least one shift");
        if end - last > 1e-9 * self.delta {
            taus.push(end);
        } else {
            *taus.last_mut().expect("at least one shift") = end;
        }
        taus
    }

    pub fn epsilon_min(&self) -> f64 {
        self.epsilon_grid[0]
    }

    /// Evaluator tolerance for scans: `ε_min / 100`.
    pub fn scan_tolerance(&self) -> f64 {
        (self.epsilon_min() / 100.0).max(crate::zeta::MIN_ABS_TOL)
    }
}

/// Distances at one shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub tau: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Anything with a shift and a set of distances.
pub trait ShiftSample {
    fn tau(&self) -> f64;
    fn max_distance(&self) -> f64;
}

impl ShiftSample for ScanRecord {
    fn tau(&self) -> f64 {
        self.tau
    }

    fn max_distance(&self) -> f64 {
        self.d1.max(self.d2)
    }
}

impl ShiftSample for (f64, f64) {
    fn tau(&self) -> f64 {
        self.0
    }

    fn max_distance(&self) -> f64 {
        self.1
    }
}
