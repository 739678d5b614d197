mod common;

use std::f64::consts::PI;

use common::sine_measure;
use proptest::prelude::*;
use zlab_core::density::{
    best_shift, convergence_diagnostic, density_curve, density_estimate, hit_intervals, ScanConfig, ScanError,
    ScanRecord,
};

fn sine_records(cfg: &ScanConfig) -> Vec<ScanRecord> {
    cfg.taus()
        .into_iter()
        .map(|tau| ScanRecord { tau, d1: tau.sin().abs(), d2: 0.0 })
        .collect()
}

#[test]
fn sine_family_matches_closed_form() {
    let periods = 100;
    let cfg = ScanConfig::new(periods as f64 * PI, 0.05, 30, vec![0.1, 0.5, 0.9]).unwrap();
    let records = sine_records(&cfg);
    let refine = |tau: f64| -> Result<f64, ScanError> { Ok(tau.sin().abs()) };
    for &eps in &cfg.epsilon_grid {
        let hits = hit_intervals(&records, eps, &cfg, Some(&refine)).unwrap();
        let want = sine_measure(eps, periods) / cfg.t_max;
        let got = density_estimate(&hits, cfg.t_max);
        assert!((got - want).abs() < 1e-4, "eps {eps}: {got} vs {want}");
        // Interior intervals are (kπ - a, kπ + a).
        let a = eps.asin();
        assert_eq!(hits.intervals.len(), periods + 1);
        assert!(hits.intervals[0].0 == 0.0 && (hits.intervals[0].1 - a).abs() < 1e-5);
        for (k, &(lo, hi)) in hits.intervals.iter().enumerate().skip(1).take(periods - 1) {
            let centre = k as f64 * PI;
            assert!((lo - (centre - a)).abs() < 1e-5 && (hi - (centre + a)).abs() < 1e-5, "k = {k}");
        }
        assert!(hits.endpoint_accuracy < 1e-5);
    }
}

#[test]
fn interpolation_without_refiner_reports_its_error() {
    let cfg = ScanConfig::new(10.0 * PI, 0.1, 0, vec![0.5]).unwrap();
    let records = sine_records(&cfg);
    let hits = hit_intervals(&records, 0.5, &cfg, None).unwrap();
    let want = sine_measure(0.5, 10);
    assert!((hits.measure() - want).abs() <= hits.uncertainty);
}

#[test]
fn ties_are_outside_and_bad_input_is_rejected() {
    let cfg = ScanConfig::new(2.0, 1.0, 0, vec![0.5]).unwrap();
    let flat: Vec<ScanRecord> = cfg.taus().into_iter().map(|tau| ScanRecord { tau, d1: 0.5, d2: 0.0 }).collect();
    assert_eq!(hit_intervals(&flat, 0.5, &cfg, None).unwrap().measure(), 0.0);
    assert!(matches!(hit_intervals::<ScanRecord>(&[], 0.5, &cfg, None), Err(ScanError::NoRecords)));
    let unordered = vec![flat[1], flat[0]];
    assert!(hit_intervals(&unordered, 0.5, &cfg, None).is_err());
    assert!(ScanConfig::new(1.0, 2.0, 0, vec![0.1]).is_err());
    assert!(ScanConfig::new(1.0, 0.1, 0, vec![0.2, 0.1]).is_err());
}

#[test]
fn best_shift_prefers_the_earliest_minimum() {
    let records = vec![
        ScanRecord { tau: 0.0, d1: 0.3, d2: 0.1 },
        ScanRecord { tau: 1.0, d1: 0.2, d2: 0.2 },
        ScanRecord { tau: 2.0, d1: 0.1, d2: 0.2 },
    ];
    assert_eq!(best_shift(&records).unwrap().tau, 1.0);
}

#[test]
fn convergence_report_flags_only_unsettled_thresholds() {
    let horizons = [25.0 * PI, 50.0 * PI, 100.0 * PI];
    let curves: Vec<_> = horizons
        .iter()
        .map(|&t| {
            let cfg = ScanConfig::new(t, 0.05, 25, vec![0.2, 0.7]).unwrap();
            let refine = |tau: f64| -> Result<f64, ScanError> { Ok(tau.sin().abs()) };
            (t, density_curve(&sine_records(&cfg), &cfg, Some(&refine)).unwrap())
        })
        .collect();
    let report = convergence_diagnostic(&curves).unwrap();
    assert!(report.rows.iter().all(|r| !r.flagged), "{report:?}");
}

#[test]
fn convergence_report_flags_growing_differences() {
    use zlab_core::density::{DensityCurve, DensityPoint};
    let curve = |d: f64, t: f64| DensityCurve {
        points: vec![DensityPoint { epsilon: 0.5, density: d, uncertainty: 1e-6 }],
        t_max: t,
        resolution: 0.05,
    };
    let report = convergence_diagnostic(&[(10.0, curve(0.3, 10.0)), (20.0, curve(0.31, 20.0)), (40.0, curve(0.4, 40.0))])
        .unwrap();
    assert!(report.rows[0].flagged);
}

fn records_from(values: Vec<(f64, f64)>) -> Vec<ScanRecord> {
    values
        .into_iter()
        .enumerate()
        .map(|(i, (d1, d2))| ScanRecord { tau: i as f64 * 0.5, d1, d2 })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn density_curves_are_monotone_and_bounded(
        values in prop::collection::vec((0.0f64..2.0, 0.0f64..2.0), 2..200),
        mut eps in prop::collection::btree_set(1u32..2000, 1..12),
    ) {
        let records = records_from(values);
        let t = records.last().unwrap().tau;
        let grid: Vec<f64> = std::mem::take(&mut eps).into_iter().map(|e| e as f64 / 1000.0).collect();
        let cfg = ScanConfig::new(t, 0.5, 0, grid).unwrap();
        let curve = density_curve(&records, &cfg, None).unwrap();
        prop_assert!(curve.violations().is_empty(), "{curve:?}");
    }

    // Hit sets grow with ε and lie inside the scanned range.
    #[test]
    fn hit_sets_are_nested(
        values in prop::collection::vec((0.0f64..2.0, 0.0f64..2.0), 2..100),
        e1 in 0.01f64..1.0,
        gap in 0.0f64..1.0,
    ) {
        let records = records_from(values);
        let t = records.last().unwrap().tau;
        let cfg = ScanConfig::new(t, 0.5, 0, vec![e1]).unwrap();
        let small = hit_intervals(&records, e1, &cfg, None).unwrap();
        let large = hit_intervals(&records, e1 + gap, &cfg, None).unwrap();
        for &(a, b) in &small.intervals {
            prop_assert!(a <= b && a >= 0.0 && b <= t);
            prop_assert!(large.intervals.iter().any(|&(c, d)| c <= a && b <= d));
        }
        for w in large.intervals.windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
    }
}
