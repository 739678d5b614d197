//! End-to-end pipelines behind `zlab scan` and `zlab joint-scan`.

use super::csvio::{density_csv, joint_scan_csv, plot_csv, scan_csv};
use super::{Experiment, LabError, RunManifest};
use crate::density::{
    best_shift, density_curve_from_hits, hit_intervals, DensityCurve, HitIntervals, ScanConfig, ScanRecord,
    ScanSetup, ShiftProblem,
};
use crate::joint::{JointScanRecord, JointSetup};

/// Hit intervals re-checked on a grid four times finer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Confirmation {
    pub epsilon: f64,
    pub intervals: usize,
    /// Intervals whose midpoint stays below `ε` at `mesh / 4`.
    pub confirmed: usize,
}

fn assemble<R: crate::density::ShiftSample>(
    records: &[R],
    cfg: &ScanConfig,
    coarse: &ShiftProblem,
    fine: &ShiftProblem,
) -> Result<(Vec<HitIntervals>, DensityCurve, Vec<Confirmation>), LabError> {
    let refine = |tau: f64| coarse.max_distance(tau);
    let hits = cfg
        .epsilon_grid
        .iter()
        .map(|&eps| hit_intervals(records, eps, cfg, Some(&refine)))
        .collect::<Result<Vec<_>, _>>()?;
    let curve = density_curve_from_hits(&hits, cfg)?;
    let confirmations = hits
        .iter()
        .map(|h| {
            Ok(Confirmation {
                epsilon: h.epsilon,
                intervals: h.intervals.len(),
                confirmed: fine.confirm(h)?,
            })
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    Ok((hits, curve, confirmations))
}

fn common_notes(exp: &Experiment, confirmations: &[Confirmation]) -> Vec<String> {
    let mut notes = vec![format!(
        "resolution limit: features of tau narrower than delta = {} are invisible; \
         distances are sampled on a grid of mesh {} and are lower bounds on the true sup",
        exp.scan.delta, exp.mesh
    )];
    if exp.sigma_star_heuristic {
        notes.push(format!("HEURISTIC sigma* = {} from the empirical diagnostic", exp.sigma_star));
    }
    for c in confirmations {
        notes.push(format!(
            "epsilon {}: {} of {} hit intervals confirmed at mesh/4",
            c.epsilon, c.confirmed, c.intervals
        ));
    }
    notes
}

fn manifest(command: &str, exp: &Experiment, notes: Vec<String>) -> RunManifest {
    let mut m = RunManifest::new(command, exp.digest());
    m.resolution_delta = Some(exp.scan.delta);
    m.refine_depth = Some(exp.scan.refine_depth);
    m.evaluator_tolerance = Some(exp.scan.scan_tolerance());
    m.mesh = Some(exp.mesh);
    m.sigma_star = Some(exp.sigma_star);
    m.sigma_star_heuristic = Some(exp.sigma_star_heuristic);
    m.notes = notes;
    m
}

#[derive(Debug, Clone)]
pub struct ScanArtifacts {
    pub records: Vec<ScanRecord>,
    pub hits: Vec<HitIntervals>,
    pub curve: DensityCurve,
    pub confirmations: Vec<Confirmation>,
    pub best: ScanRecord,
    pub manifest: RunManifest,
}

impl ScanArtifacts {
    /// `(file name, contents)` of every CSV artifact.
    pub fn files(&self) -> Vec<(String, String)> {
        vec![
            ("scan.csv".into(), scan_csv(&self.records)),
            ("density.csv".into(), density_csv(&self.curve)),
            ("density_plot.csv".into(), plot_csv(&self.curve)),
        ]
    }
}

/// Scans `[start, start + T]`, assembles hit intervals with bisection,
/// builds the density curve and confirms hits at `mesh / 4`.
pub fn run_scan(exp: &Experiment, threads: usize) -> Result<ScanArtifacts, LabError> {
    let (Some(zeta_b), Some(k2), Some(f2)) = (&exp.zeta_b, &exp.k2, &exp.f2) else {
        return Err(LabError::input("scan needs the [hurwitz], [k2] and [f2] blocks"));
    };
    let setup = ScanSetup {
        phi: &exp.phi,
        sigma_star: exp.sigma_star,
        zeta_b,
        k1: &exp.k1,
        k2,
        f1: &exp.f1,
        f2,
        mesh: exp.mesh,
    };
    let cfg = &exp.scan;
    let coarse = setup.problem(cfg, exp.mesh)?;
    let fine = setup.problem(cfg, exp.mesh / 4.0)?;
    let records: Vec<ScanRecord> = coarse
        .scan(&cfg.taus(), threads)?
        .into_iter()
        .map(|(tau, d)| ScanRecord { tau, d1: d[0], d2: d[1] })
        .collect();
    let (hits, curve, confirmations) = assemble(&records, cfg, &coarse, &fine)?;
    let best = best_shift(&records).expect("scan has records");
    let manifest = manifest("scan", exp, common_notes(exp, &confirmations));
    Ok(ScanArtifacts {
        records,
        hits,
        curve,
        confirmations,
        best,
        manifest,
    })
}

#[derive(Debug, Clone)]
pub struct JointArtifacts {
    pub labels: Vec<(usize, usize)>,
    pub records: Vec<JointScanRecord>,
    pub hits: Vec<HitIntervals>,
    pub curve: DensityCurve,
    pub confirmations: Vec<Confirmation>,
    pub best: JointScanRecord,
    pub manifest: RunManifest,
}

impl JointArtifacts {
    pub fn files(&self) -> Vec<(String, String)> {
        vec![
            ("joint_scan.csv".into(), joint_scan_csv(&self.labels, &self.records)),
            ("joint_density.csv".into(), density_csv(&self.curve)),
            ("joint_density_plot.csv".into(), plot_csv(&self.curve)),
        ]
    }
}

pub fn run_joint_scan(exp: &Experiment, threads: usize) -> Result<JointArtifacts, LabError> {
    let Some(joint) = &exp.joint else {
        return Err(LabError::input("joint-scan needs a [joint] block"));
    };
    let setup = JointSetup {
        phi: &exp.phi,
        sigma_star: exp.sigma_star,
        spec: &joint.spec,
        k1: &exp.k1,
        f1: &exp.f1,
        k2: &joint.k2,
        f2: &joint.f2,
        mesh: exp.mesh,
        rank_tol: joint.rank_tol,
    };
    let cfg = &exp.scan;
    let coarse = setup.problem(cfg, exp.mesh)?;
    let fine = setup.problem(cfg, exp.mesh / 4.0)?;
    let records: Vec<JointScanRecord> = coarse
        .scan(&cfg.taus(), threads)?
        .into_iter()
        .map(|(tau, d)| JointScanRecord {
            tau,
            d_phi: d[0],
            d: d[1..].to_vec(),
        })
        .collect();
    let (hits, curve, confirmations) = assemble(&records, cfg, &coarse, &fine)?;
    let best = best_shift(&records).expect("scan has records");
    let manifest = manifest("joint-scan", exp, common_notes(exp, &confirmations));
    Ok(JointArtifacts {
        labels: joint.spec.labels(),
        records,
        hits,
        curve,
        confirmations,
        best,
        manifest,
    })
}

/// Density curve from stored records alone (no evaluator): crossings are
/// located by linear interpolation and `T` is the scanned span.
pub fn density_curve_from_records<R: crate::density::ShiftSample>(
    records: &[R],
    epsilon_grid: Vec<f64>,
) -> Result<DensityCurve, LabError> {
    let (Some(first), Some(last)) = (records.first(), records.last()) else {
        return Err(LabError::input("no records"));
    };
    let span = last.tau() - first.tau();
    if records.len() == 1 || span <= 0.0 {
        let probe = ScanConfig::new(1.0, 1.0, 0, epsilon_grid)?;
        let m = first.max_distance();
        let points = probe
            .epsilon_grid
            .iter()
            .map(|&epsilon| crate::density::DensityPoint {
                epsilon,
                density: if m < epsilon { 1.0 } else { 0.0 },
                uncertainty: 0.0,
            })
            .collect();
        return Ok(DensityCurve {
            points,
            t_max: 0.0,
            resolution: 0.0,
        });
    }
    let gap = records
        .windows(2)
        .map(|w| w[1].tau() - w[0].tau())
        .fold(0.0, f64::max);
    let cfg = ScanConfig::new(span, gap, 0, epsilon_grid)?.with_start(first.tau())?;
    Ok(crate::density::density_curve(records, &cfg, None)?)
}
