//! Joint scans over one Euler-product function and several periodic Hurwitz
//! functions `ζ(s, α_j; B_jl)` under a common shift.

mod rank;

use num_complex::Complex64;
use thiserror::Error;

pub use rank::{exact_rank, numerical_rank, UNDERFLOW_GUARD};

use crate::density::{
    hit_intervals, density_estimate, Component, Refiner, ScanConfig, ScanError, ShiftProblem, ShiftSample,
};
use crate::matsumoto::StripFunction;
use crate::targets::{sample_points, CompactSet, TargetFunction};
use crate::zeta::{EvalControls, HurwitzParameter, PeriodicHurwitz, PeriodicSequence};

/// Default relative singular-value cutoff.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JointError {
    #[error("invalid joint spec: {0}")]
    InvalidSpec(String),
    #[error("{rows}x{cols} matrix has no entry above the underflow guard")]
    DegenerateMatrix { rows: usize, cols: usize },
    #[error("rank(B_j) < l(j) for j in {offending:?}")]
    RankPreconditionFailed { offending: Vec<usize> },
    #[error(transparent)]
    Scan(#[from] ScanError),
}

/// One parameter `α_j` with its sequences `B_j1, …, B_jl(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointGroup {
    pub alpha: HurwitzParameter,
    pub sequences: Vec<PeriodicSequence>,
}

impl JointGroup {
    /// `k_j`, the least common multiple of the periods.
    pub fn lcm_period(&self) -> usize {
        self.sequences
            .iter()
            .map(PeriodicSequence::period)
            .fold(1, |a, b| a / gcd(a, b) * b)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointSpec {
    groups: Vec<JointGroup>,
}

impl JointSpec {
    pub fn new(groups: Vec<JointGroup>) -> Result<Self, JointError> {
        if groups.is_empty() {
            return Err(JointError::InvalidSpec("r must be at least 1".into()));
        }
        for (j, g) in groups.iter().enumerate() {
            let a = g.alpha.value();
            if !(a > 0.0 && a < 1.0) {
                return Err(JointError::InvalidSpec(format!(
                    "alpha_{} = {a} must satisfy 0 < alpha < 1",
                    j + 1
                )));
            }
            if g.sequences.is_empty() {
                return Err(JointError::InvalidSpec(format!("l({}) must be at least 1", j + 1)));
            }
        }
        let user: Vec<String> = groups
            .iter()
            .filter(|g| !g.alpha.is_preset())
            .map(|g| g.alpha.to_string())
            .collect();
        if !user.is_empty() {
            log::warn!(
                "user-supplied parameters {user:?}: algebraic independence over Q is assumed, not checked"
            );
        }
        Ok(Self { groups })
    }

    pub fn groups(&self) -> &[JointGroup] {
        &self.groups
    }

    pub fn r(&self) -> usize {
        self.groups.len()
    }

    /// `λ = l(1) + … + l(r)`.
    pub fn lambda(&self) -> usize {
        self.groups.iter().map(|g| g.sequences.len()).sum()
    }

    /// `(j, l)` pairs, 1-based, in spec order.
    pub fn labels(&self) -> Vec<(usize, usize)> {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(j, g)| (0..g.sequences.len()).map(move |l| (j + 1, l + 1)))
            .collect()
    }

    /// Checks `rank(B_j) = l(j)` for every `j`, exactly when the entries are
    /// Gaussian integers.
    pub fn check_ranks(&self, tol: f64) -> Result<(), JointError> {
        let mut offending = Vec::new();
        for j in 1..=self.r() {
            let m = build_matrix(self, j).expect("j in range");
            let numeric = numerical_rank(&m, tol)?;
            let rank = match exact_rank(&m) {
                Some(exact) => {
                    if exact != numeric {
                        log::warn!("B_{j}: exact rank {exact}, numerical rank {numeric} at tol {tol}");
                    }
                    exact
                }
                None => numeric,
            };
            if rank != m.cols {
                offending.push(j);
            }
        }
        if offending.is_empty() {
            Ok(())
        } else {
            Err(JointError::RankPreconditionFailed { offending })
        }
    }
}

/// `k_j × l(j)` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Complex64>,
}

impl CoefficientMatrix {
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| x * c).collect(),
        }
    }
}

/// `B_j` for `1 ≤ j ≤ r`: column `l` holds `b_0, …, b_{k_j - 1}` of `B_jl`.
pub fn build_matrix(spec: &JointSpec, j: usize) -> Option<CoefficientMatrix> {
    let group = spec.groups.get(j.checked_sub(1)?)?;
    let rows = group.lcm_period();
    let cols = group.sequences.len();
    let mut entries = Vec::with_capacity(rows * cols);
    for m in 0..rows {
        entries.extend(group.sequences.iter().map(|b| b.at(m)));
    }
    Some(CoefficientMatrix { rows, cols, entries })
}

/// Distances at one shift: `φ` first, then `(j, l)` in spec order.
#[derive(Debug, Clone, PartialEq)]
pub struct JointScanRecord {
    pub tau: f64,
    pub d_phi: f64,
    pub d: Vec<f64>,
}

impl ShiftSample for JointScanRecord {
    fn tau(&self) -> f64 {
        self.tau
    }

    fn max_distance(&self) -> f64 {
        self.d.iter().copied().fold(self.d_phi, f64::max)
    }
}

/// Inputs of the joint scan. `k2` and `f2` are indexed like
/// [`JointSpec::labels`].
#[derive(Debug, Clone, Copy)]
pub struct JointSetup<'a> {
    pub phi: &'a StripFunction,
    pub sigma_star: f64,
    pub spec: &'a JointSpec,
    pub k1: &'a CompactSet,
    pub f1: &'a TargetFunction,
    pub k2: &'a [CompactSet],
    pub f2: &'a [TargetFunction],
    pub mesh: f64,
    pub rank_tol: f64,
}

impl JointSetup<'_> {
    pub fn check_preconditions(&self) -> Result<(), JointError> {
        let lambda = self.spec.lambda();
        if self.k2.len() != lambda || self.f2.len() != lambda {
            return Err(JointError::InvalidSpec(format!(
                "need {lambda} compact sets and targets for the Hurwitz components, got {} and {}",
                self.k2.len(),
                self.f2.len()
            )));
        }
        self.spec.check_ranks(self.rank_tol)?;
        self.k1.check_in_strip(self.sigma_star, 1.0).map_err(|e| {
            ScanError::Precondition(format!("K1 must lie in D(sigma*, 1) = D({}, 1): {e}", self.sigma_star))
        })?;
        for (k, (j, l)) in self.k2.iter().zip(self.spec.labels()) {
            k.check_in_strip(0.5, 1.0).map_err(|e| {
                ScanError::Precondition(format!("K2_{j}_{l} must lie in D(1/2, 1): {e}"))
            })?;
        }
        if !self.f1.nonvanishing_flag() {
            return Err(ScanError::Precondition(
                "f1 must be nonvanishing on K1 (H0^c(K1)): it has a zero in K1 or is not certified".into(),
            )
            .into());
        }
        Ok(())
    }

    pub fn problem(&self, cfg: &ScanConfig, mesh: f64) -> Result<ShiftProblem, JointError> {
        self.check_preconditions()?;
        let ctl = EvalControls::with_tol(cfg.scan_tolerance()).map_err(ScanError::from)?;
        let tau_max = cfg.start + cfg.t_max;
        let g1 = sample_points(self.k1, mesh).map_err(ScanError::from)?;
        let mut components = vec![Component::new(
            "phi",
            self.phi.series(),
            self.phi.shift(),
            &g1,
            self.f1,
            ctl,
            tau_max,
        )?];
        let series = self.spec.groups.iter().flat_map(|g| {
            g.sequences
                .iter()
                .map(move |b| PeriodicHurwitz::new(g.alpha.clone(), b.clone()))
        });
        for (((series, k), f), (j, l)) in series.zip(self.k2).zip(self.f2).zip(self.spec.labels()) {
            let grid = sample_points(k, mesh).map_err(ScanError::from)?;
            components.push(Component::new(format!("{j}_{l}"), &series, 0.0, &grid, f, ctl, tau_max)?);
        }
        Ok(ShiftProblem::new(components))
    }
}

/// One record per coarse shift with all `λ + 1` distances.
pub fn joint_scan(setup: &JointSetup, cfg: &ScanConfig, threads: usize) -> Result<Vec<JointScanRecord>, JointError> {
    let problem = setup.problem(cfg, setup.mesh)?;
    Ok(problem
        .scan(&cfg.taus(), threads)?
        .into_iter()
        .map(|(tau, d)| JointScanRecord {
            tau,
            d_phi: d[0],
            d: d[1..].to_vec(),
        })
        .collect())
}

/// `(1/T) meas{τ : all λ+1 distances < ε}`.
pub fn joint_density(
    records: &[JointScanRecord],
    epsilon: f64,
    cfg: &ScanConfig,
    refine: Option<Refiner>,
) -> Result<f64, JointError> {
    let hits = hit_intervals(records, epsilon, cfg, refine)?;
    Ok(density_estimate(&hits, cfg.t_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> PeriodicSequence {
        PeriodicSequence::new(v.iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap()
    }

    fn spec(groups: Vec<Vec<PeriodicSequence>>) -> JointSpec {
        let alphas = ["1/pi", "1/e", "log2"];
        JointSpec::new(
            groups
                .into_iter()
                .zip(alphas)
                .map(|(sequences, a)| JointGroup {
                    alpha: HurwitzParameter::preset(a).unwrap(),
                    sequences,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn matrix_examples() {
        let s = spec(vec![vec![seq(&[1.0, -1.0])]]);
        let m = build_matrix(&s, 1).unwrap();
        assert_eq!((m.rows, m.cols), (2, 1));
        assert_eq!(m.entries, vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        let s = spec(vec![vec![seq(&[1.0]), seq(&[1.0, 0.0])]]);
        let m = build_matrix(&s, 1).unwrap();
        assert_eq!((m.rows, m.cols), (2, 2));
        let want: Vec<Complex64> = [1.0, 1.0, 1.0, 0.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert_eq!(m.entries, want);
        assert!(build_matrix(&s, 0).is_none() && build_matrix(&s, 2).is_none());
    }

    #[test]
    fn duplicated_column_fails_rank() {
        let s = spec(vec![vec![seq(&[1.0])], vec![seq(&[1.0, 2.0]), seq(&[1.0, 2.0])]]);
        assert_eq!(
            s.check_ranks(DEFAULT_RANK_TOL),
            Err(JointError::RankPreconditionFailed { offending: vec![2] })
        );
        assert_eq!(s.lambda(), 3);
        assert_eq!(s.labels(), vec![(1, 1), (2, 1), (2, 2)]);
    }

    #[test]
    fn alpha_one_rejected() {
        let g = JointGroup {
            alpha: HurwitzParameter::new(1.0).unwrap(),
            sequences: vec![seq(&[1.0])],
        };
        assert!(matches!(JointSpec::new(vec![g]), Err(JointError::InvalidSpec(_))));
    }
}
