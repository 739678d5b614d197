use super::{ScanConfig, ScanError, ShiftSample};

/// Re-evaluates `max_j d_j(τ)` during bisection.
pub type Refiner<'a> = &'a (dyn Fn(f64) -> Result<f64, ScanError> + Sync);

/// Disjoint closed subintervals of the scanned range where the maximal
/// distance is below `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct HitIntervals {
    pub epsilon: f64,
    pub intervals: Vec<(f64, f64)>,
    /// Located threshold crossings (interval endpoints inside the range).
    pub crossings: usize,
    /// Largest distance between a located endpoint and the true crossing,
    /// assuming one crossing per coarse step.
    pub endpoint_accuracy: f64,
    /// Bound on the error of the total measure from endpoint placement.
    pub uncertainty: f64,
    /// Coarse step; features narrower than this can be missed.
    pub resolution: f64,
}

impl HitIntervals {
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }
}

/// Assembles the set `{τ : max distance < ε}` from coarse records, locating
/// each sign change by bisection when a refiner is given and by linear
/// interpolation otherwise. Ties count as outside.
pub fn hit_intervals<R: ShiftSample>(
    records: &[R],
    epsilon: f64,
    cfg: &ScanConfig,
    refine: Option<Refiner>,
) -> Result<HitIntervals, ScanError> {
    if records.is_empty() {
        return Err(ScanError::NoRecords);
    }
    if records.windows(2).any(|w| !(w[0].tau() < w[1].tau())) {
        return Err(ScanError::InvalidConfig("records must be strictly increasing in tau".into()));
    }
    let inside: Vec<bool> = records.iter().map(|r| r.max_distance() < epsilon).collect();
    let mut crossings = 0;
    let mut endpoint_accuracy = 0.0f64;
    let mut uncertainty = 0.0;
    let mut locate = |i_in: usize, i_out: usize| -> Result<f64, ScanError> {
        let (a, b) = (&records[i_in], &records[i_out]);
        let (endpoint, error) = match refine {
            Some(f) => {
                let (mut t_in, mut t_out) = (a.tau(), b.tau());
                for _ in 0..cfg.refine_depth {
                    let mid = 0.5 * (t_in + t_out);
                    if f(mid)? < epsilon {
                        t_in = mid;
                    } else {
                        t_out = mid;
                    }
                }
                (0.5 * (t_in + t_out), 0.5 * (t_out - t_in).abs())
            }
            None => {
                let (ma, mb) = (a.max_distance(), b.max_distance());
                let w = if mb > ma { (epsilon - ma) / (mb - ma) } else { 0.5 };
                let t = a.tau() + w.clamp(0.0, 1.0) * (b.tau() - a.tau());
                (t, (b.tau() - a.tau()).abs())
            }
        };
        crossings += 1;
        endpoint_accuracy = endpoint_accuracy.max(error);
        uncertainty += error;
        Ok(endpoint)
    };
    let mut intervals = Vec::new();
    let mut i = 0;
    while i < records.len() {
        if !inside[i] {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < records.len() && inside[i + 1] {
            i += 1;
        }
        let last = i;
        let lo = if first == 0 {
            records[0].tau()
        } else {
            locate(first, first - 1)?
        };
        let hi = if last + 1 == records.len() {
            records[last].tau()
        } else {
            locate(last, last + 1)?
        };
        intervals.push((lo, hi));
        i += 1;
    }
    Ok(HitIntervals {
        epsilon,
        intervals,
        crossings,
        endpoint_accuracy,
        uncertainty,
        resolution: cfg.delta,
    })
}

/// Total interval length over `T`, clamped to `[0, 1]`.
pub fn density_estimate(intervals: &HitIntervals, t: f64) -> f64 {
    // `+ 0.0` turns an empty measure's -0 into +0.
    (intervals.measure() / t).clamp(0.0, 1.0) + 0.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPoint {
    pub epsilon: f64,
    pub density: f64,
    pub uncertainty: f64,
}

/// Sampled `ε ↦ D_T(ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    pub points: Vec<DensityPoint>,
    pub t_max: f64,
    pub resolution: f64,
}

impl DensityCurve {
    /// Indices where the curve leaves `[0, 1]` or decreases.
    pub fn violations(&self) -> Vec<usize> {
        let mut bad = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            let in_range = (0.0..=1.0).contains(&p.density);
            let monotone = i == 0 || p.density >= self.points[i - 1].density;
            if !(in_range && monotone) {
                bad.push(i);
            }
        }
        bad
    }

    pub fn density_at(&self, epsilon: f64) -> Option<f64> {
        self.points.iter().find(|p| p.epsilon == epsilon).map(|p| p.density)
    }
}

/// `D_T(ε)` for every `ε` of the configured grid, with a monotonicity
/// post-check. Decreases within the combined refinement uncertainty are
/// flattened; larger ones are reported as errors.
pub fn density_curve<R: ShiftSample>(
    records: &[R],
    cfg: &ScanConfig,
    refine: Option<Refiner>,
) -> Result<DensityCurve, ScanError> {
    let hits = cfg
        .epsilon_grid
        .iter()
        .map(|&epsilon| hit_intervals(records, epsilon, cfg, refine))
        .collect::<Result<Vec<_>, _>>()?;
    density_curve_from_hits(&hits, cfg)
}

/// As [`density_curve`], from hit sets already assembled in increasing `ε`.
pub fn density_curve_from_hits(hits: &[HitIntervals], cfg: &ScanConfig) -> Result<DensityCurve, ScanError> {
    let mut points: Vec<DensityPoint> = Vec::with_capacity(hits.len());
    for h in hits {
        let epsilon = h.epsilon;
        let mut density = density_estimate(h, cfg.t_max);
        let uncertainty = (h.uncertainty / cfg.t_max).min(1.0);
        if let Some(prev) = points.last() {
            if density < prev.density {
                let allowed = prev.uncertainty + uncertainty + 1e-12;
                if prev.density - density > allowed {
                    return Err(ScanError::MonotonicityViolation {
                        epsilon,
                        previous: prev.density,
                        current: density,
                        allowed,
                    });
                }
                density = prev.density;
            }
        }
        points.push(DensityPoint {
            epsilon,
            density,
            uncertainty,
        });
    }
    Ok(DensityCurve {
        points,
        t_max: cfg.t_max,
        resolution: cfg.delta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    /// `D_{T_i}(ε)` in the order of the input curves.
    pub densities: Vec<f64>,
    /// `|D_{T_{i+1}} - D_{T_i}|`.
    pub differences: Vec<f64>,
    pub max_difference: f64,
    /// The last difference exceeds the endpoint uncertainty and is no smaller
    /// than the first: candidate discontinuity or slow mixing.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub horizons: Vec<f64>,
    pub rows: Vec<ConvergenceRow>,
}

/// Successive differences of `D_{T_i}(ε)` along increasing horizons.
pub fn convergence_diagnostic(curves: &[(f64, DensityCurve)]) -> Result<ConvergenceReport, ScanError> {
    if curves.len() < 3 {
        return Err(ScanError::InvalidConfig(format!(
            "convergence diagnostic needs at least 3 horizons, got {}",
            curves.len()
        )));
    }
    if curves.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(ScanError::InvalidConfig("horizons must be strictly increasing".into()));
    }
    let grid: Vec<f64> = curves[0].1.points.iter().map(|p| p.epsilon).collect();
    for (t, c) in curves {
        if c.points.len() != grid.len() || c.points.iter().zip(&grid).any(|(p, &e)| p.epsilon != e) {
            return Err(ScanError::InvalidConfig(format!(
                "curve at T = {t} uses a different epsilon grid"
            )));
        }
    }
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, &epsilon)| {
            let densities: Vec<f64> = curves.iter().map(|(_, c)| c.points[i].density).collect();
            let differences: Vec<f64> = densities.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            let max_difference = differences.iter().copied().fold(0.0, f64::max);
            let first = differences[0];
            let last = *differences.last().expect("at least two differences");
            // A difference inside the endpoint uncertainty of its two curves is noise.
            let n = curves.len();
            let noise = curves[n - 2].1.points[i].uncertainty + curves[n - 1].1.points[i].uncertainty + 1e-12;
            ConvergenceRow {
                epsilon,
                densities,
                flagged: last > noise && last >= first,
                differences,
                max_difference,
            }
        })
        .collect();
    Ok(ConvergenceReport {
        horizons: curves.iter().map(|(t, _)| *t).collect(),
        rows,
    })
}

/// The record with the smallest maximal distance; ties go to the smallest `τ`.
pub fn best_shift<R: ShiftSample + Clone>(records: &[R]) -> Option<R> {
    let mut best: Option<&R> = None;
    for r in records {
        best = match best {
            None => Some(r),
            Some(b) => {
                let (m, mb) = (r.max_distance(), b.max_distance());
                if m < mb || (m == mb && r.tau() < b.tau()) {
                    Some(r)
                } else {
                    Some(b)
                }
            }
        };
    }
    best.cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::ScanRecord;

    fn cfg(t: f64, delta: f64, depth: u32, eps: Vec<f64>) -> ScanConfig {
        ScanConfig::new(t, delta, depth, eps).unwrap()
    }

    fn records(f: impl Fn(f64) -> f64, cfg: &ScanConfig) -> Vec<ScanRecord> {
        cfg.taus()
            .into_iter()
            .map(|tau| ScanRecord { tau, d1: f(tau), d2: 0.0 })
            .collect()
    }

    #[test]
    fn all_inside_and_all_outside() {
        let c = cfg(10.0, 0.1, 5, vec![0.5]);
        let inside = records(|_| 0.1, &c);
        let h = hit_intervals(&inside, 0.5, &c, None).unwrap();
        assert_eq!(h.intervals, vec![(0.0, 10.0)]);
        assert_eq!(density_estimate(&h, 10.0), 1.0);
        let outside = records(|_| 0.9, &c);
        let h = hit_intervals(&outside, 0.5, &c, None).unwrap();
        assert!(h.intervals.is_empty());
        assert_eq!(density_estimate(&h, 10.0), 0.0);
    }

    #[test]
    fn ties_are_outside() {
        let c = cfg(1.0, 0.01, 0, vec![0.5]);
        let r = records(|_| 0.5, &c);
        assert!(hit_intervals(&r, 0.5, &c, None).unwrap().intervals.is_empty());
        assert!(hit_intervals(&r, 0.0, &c, None).unwrap().intervals.is_empty());
    }

    #[test]
    fn arithmetic_density() {
        let h = HitIntervals {
            epsilon: 1.0,
            intervals: vec![(0.0, 1.0), (4.0, 6.0)],
            crossings: 0,
            endpoint_accuracy: 0.0,
            uncertainty: 0.0,
            resolution: 0.1,
        };
        assert!((density_estimate(&h, 10.0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn bisection_finds_sine_crossings() {
        let c = cfg(10.0, 0.01, 20, vec![0.5]);
        let f = |t: f64| t.sin().abs();
        let r = records(f, &c);
        let refine = |t: f64| Ok(f(t));
        let h = hit_intervals(&r, 0.5, &c, Some(&refine)).unwrap();
        let a = 0.5f64.asin();
        let pi = std::f64::consts::PI;
        let expected = [(0.0, a), (pi - a, pi + a), (2.0 * pi - a, 2.0 * pi + a), (3.0 * pi - a, 3.0 * pi + a)];
        assert_eq!(h.intervals.len(), expected.len());
        for (got, want) in h.intervals.iter().zip(expected) {
            assert!((got.0 - want.0).abs() < 1e-5 && (got.1 - want.1).abs() < 1e-5, "{got:?} {want:?}");
        }
    }

    #[test]
    fn curve_limits_and_monotone() {
        let c = cfg(10.0, 0.05, 10, vec![0.1, 0.3, 0.7, 2.0]);
        let f = |t: f64| t.sin().abs();
        let r = records(f, &c);
        let curve = density_curve(&r, &c, Some(&|t: f64| Ok(f(t)))).unwrap();
        assert!(curve.violations().is_empty());
        assert_eq!(curve.density_at(2.0), Some(1.0));
    }

    #[test]
    fn best_shift_ties() {
        let r = vec![
            ScanRecord { tau: 1.0, d1: 0.5, d2: 0.1 },
            ScanRecord { tau: 3.0, d1: 0.2, d2: 0.1 },
            ScanRecord { tau: 7.0, d1: 0.1, d2: 0.2 },
        ];
        assert_eq!(best_shift(&r).unwrap().tau, 3.0);
        assert_eq!(best_shift(&r[..1]).unwrap(), r[0]);
        assert!(best_shift::<ScanRecord>(&[]).is_none());
    }

    #[test]
    fn convergence_identical_curves() {
        let curve = DensityCurve {
            points: vec![DensityPoint { epsilon: 0.5, density: 0.3, uncertainty: 0.0 }],
            t_max: 1.0,
            resolution: 0.01,
        };
        let report = convergence_diagnostic(&[(1.0, curve.clone()), (2.0, curve.clone()), (3.0, curve)]).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].max_difference, 0.0);
        assert!(!report.rows[0].flagged);
    }
}
