use num_complex::Complex64;
use rayon::prelude::*;

use super::{HitIntervals, ScanConfig, ScanError, ScanRecord};
use crate::matsumoto::StripFunction;
use crate::targets::{sample_points, CompactSet, SampleGrid, TargetFunction};
use crate::zeta::{EvalControls, PeriodicHurwitz, ShiftedGrid};

/// Default sampling mesh on compact sets.
pub const DEFAULT_MESH: f64 = 0.01;

/// Shifts handed to one rayon task at a time.
const CHUNK: usize = 64;

/// One sup-distance constraint `sup_{s ∈ K} |g(s + iτ) - f(s)|`.
#[derive(Debug, Clone)]
pub struct Component {
    label: String,
    grid: ShiftedGrid,
    targets: Vec<Complex64>,
}

impl Component {
    /// `g(s) = series(s + shift)` sampled at `points`.
    pub fn new(
        label: impl Into<String>,
        series: &PeriodicHurwitz,
        shift: f64,
        points: &SampleGrid,
        target: &TargetFunction,
        ctl: EvalControls,
        tau_max: f64,
    ) -> Result<Self, ScanError> {
        let essential = points.essential();
        let pts: Vec<Complex64> = essential.points().copied().collect();
        let targets = pts
            .iter()
            .map(|&s| target.value(s))
            .collect::<Result<Vec<_>, _>>()?;
        let shifted = pts.iter().map(|&s| s + shift).collect();
        let grid = ShiftedGrid::new(series.clone(), shifted, ctl, tau_max)?;
        Ok(Self {
            label: label.into(),
            grid,
            targets,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn distance(&self, tau: f64) -> Result<f64, ScanError> {
        let values = self.grid.eval_at(tau).map_err(|e| ScanError::Evaluator {
            tau,
            message: format!("{}: {e}", self.label),
        })?;
        Ok(values
            .iter()
            .zip(&self.targets)
            .map(|(g, f)| (g - f).norm())
            .fold(0.0, f64::max))
    }
}

/// A list of constraints sharing the shift `τ`.
#[derive(Debug, Clone)]
pub struct ShiftProblem {
    components: Vec<Component>,
}

impl ShiftProblem {
    pub fn new(components: Vec<Component>) -> Self {
        Self { components }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn distances(&self, tau: f64) -> Result<Vec<f64>, ScanError> {
        self.components.iter().map(|c| c.distance(tau)).collect()
    }

    pub fn max_distance(&self, tau: f64) -> Result<f64, ScanError> {
        Ok(self.distances(tau)?.into_iter().fold(0.0, f64::max))
    }

    /// Distances at every shift, computed in parallel chunks and returned in
    /// input order. The result does not depend on `threads`.
    pub fn scan(&self, taus: &[f64], threads: usize) -> Result<Vec<(f64, Vec<f64>)>, ScanError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| ScanError::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| {
            taus.par_chunks(CHUNK)
                .map(|chunk| {
                    chunk
                        .iter()
                        .map(|&tau| Ok((tau, self.distances(tau)?)))
                        .collect::<Result<Vec<_>, ScanError>>()
                })
                .collect::<Result<Vec<_>, ScanError>>()
                .map(|chunks| chunks.into_iter().flatten().collect())
        })
    }

    /// Checks each hit interval at its midpoint.
    /// Returns the number of intervals whose midpoint stays below `ε`.
    pub fn confirm(&self, hits: &HitIntervals) -> Result<usize, ScanError> {
        let mut confirmed = 0;
        for &(a, b) in &hits.intervals {
            if self.max_distance(0.5 * (a + b))? < hits.epsilon {
                confirmed += 1;
            }
        }
        Ok(confirmed)
    }
}

/// Inputs of the two-function scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanSetup<'a> {
    pub phi: &'a StripFunction,
    /// Lower edge of the strip allowed for `K₁`.
    pub sigma_star: f64,
    pub zeta_b: &'a PeriodicHurwitz,
    pub k1: &'a CompactSet,
    pub k2: &'a CompactSet,
    pub f1: &'a TargetFunction,
    pub f2: &'a TargetFunction,
    pub mesh: f64,
}

impl ScanSetup<'_> {
    /// `K₁ ⊂ D(σ*, 1)`, `K₂ ⊂ D(1/2, 1)` and `f₁` nonvanishing on `K₁`.
    pub fn check_preconditions(&self) -> Result<(), ScanError> {
        self.k1.check_in_strip(self.sigma_star, 1.0).map_err(|e| {
            ScanError::Precondition(format!("K1 must lie in D(sigma*, 1) = D({}, 1): {e}", self.sigma_star))
        })?;
        self.k2
            .check_in_strip(0.5, 1.0)
            .map_err(|e| ScanError::Precondition(format!("K2 must lie in D(1/2, 1): {e}")))?;
        if !self.f1.nonvanishing_flag() {
            return Err(ScanError::Precondition(
                "f1 must be nonvanishing on K1 (H0^c(K1)): it has a zero in K1 or is not certified".into(),
            ));
        }
        Ok(())
    }

    /// The constraint pair sampled at `mesh`.
    pub fn problem(&self, cfg: &ScanConfig, mesh: f64) -> Result<ShiftProblem, ScanError> {
        self.check_preconditions()?;
        let ctl = EvalControls::with_tol(cfg.scan_tolerance())?;
        let tau_max = cfg.start + cfg.t_max;
        let g1 = sample_points(self.k1, mesh)?;
        let g2 = sample_points(self.k2, mesh)?;
        Ok(ShiftProblem::new(vec![
            Component::new("phi", self.phi.series(), self.phi.shift(), &g1, self.f1, ctl, tau_max)?,
            Component::new("zeta_b", self.zeta_b, 0.0, &g2, self.f2, ctl, tau_max)?,
        ]))
    }
}

/// One record per coarse shift, in `τ` order.
pub fn scan_shifts(setup: &ScanSetup, cfg: &ScanConfig, threads: usize) -> Result<Vec<ScanRecord>, ScanError> {
    let problem = setup.problem(cfg, setup.mesh)?;
    Ok(problem
        .scan(&cfg.taus(), threads)?
        .into_iter()
        .map(|(tau, d)| ScanRecord {
            tau,
            d1: d[0],
            d2: d[1],
        })
        .collect())
}

/// `(s, g(s + iτ₀))` at the points a [`Component`] built from the same
/// arguments samples, with bit-identical values.
pub fn shifted_values(
    series: &PeriodicHurwitz,
    shift: f64,
    points: &SampleGrid,
    ctl: EvalControls,
    tau_max: f64,
    tau0: f64,
) -> Result<Vec<(Complex64, Complex64)>, ScanError> {
    let pts: Vec<Complex64> = points.essential().points().copied().collect();
    let shifted = pts.iter().map(|&s| s + shift).collect();
    let grid = ShiftedGrid::new(series.clone(), shifted, ctl, tau_max)?;
    let values = grid.eval_at(tau0).map_err(|e| ScanError::Evaluator {
        tau: tau0,
        message: e.to_string(),
    })?;
    Ok(pts.into_iter().zip(values).collect())
}
