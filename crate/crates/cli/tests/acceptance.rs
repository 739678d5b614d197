//! End-to-end acceptance run. Every criterion is evaluated and reported on
//! its own line; the test fails afterwards if any of them failed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{brute_periodic_hurwitz, c, random_points, rng, sine_measure};
use num_complex::Complex64;
use rand::Rng;
use zlab_core::density::{density_curve, hit_intervals, DensityCurve, ScanConfig, ScanError, ScanRecord};
use zlab_core::lab::{run_joint_scan, run_scan, Experiment, RawConfig};
use zlab_core::matsumoto::{dirichlet_coefficients, euler_product_eval, steuding_kappa, MatsumotoSpec};
use zlab_core::zeta::{
    eval_hurwitz_zeta, eval_periodic_hurwitz, eval_riemann_zeta, EvalControls, HurwitzParameter, PeriodicSequence,
};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Runs one criterion, failing it if it errors or overruns its budget.
fn criterion(n: usize, budget: Duration, f: impl FnOnce() -> Result<Outcome, String>) -> bool {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (pass, detail) = match result {
        Ok(o) => (o.pass && elapsed <= budget, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let line = format!(
        "criterion {n}: {} ({:.1} s, budget {} s) {detail}\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    // Straight to stderr: the harness captures print! even on success.
    let _ = std::io::stderr().write_all(line.as_bytes());
    pass
}

fn identities() -> Result<Outcome, String> {
    let ctl = EvalControls::default();
    let one = HurwitzParameter::new(1.0).map_err(|e| e.to_string())?;
    let half = HurwitzParameter::new(0.5).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for s in random_points(2024, 200, (0.6, 3.0), (-50.0, 50.0)) {
        let z = eval_riemann_zeta(s, &ctl).map_err(|e| e.to_string())?;
        let a = eval_hurwitz_zeta(s, &one, &ctl).map_err(|e| e.to_string())?;
        let b = eval_hurwitz_zeta(s, &half, &ctl).map_err(|e| e.to_string())?;
        let two_s = (s * std::f64::consts::LN_2).exp();
        worst = worst.max((a - z).norm()).max((b - (two_s - 1.0) * z).norm());
    }
    Ok(outcome(worst <= 1e-10, format!("200 points, max error {worst:.3e} (limit 1e-10)")))
}

fn series_oracles() -> Result<Outcome, String> {
    let ctl = EvalControls::default();
    let mut r = rng(77);
    let mut worst = 0.0f64;
    let mut worst_bound = 0.0f64;
    for s in random_points(1977, 50, (2.0, 4.0), (-10.0, 10.0)) {
        let a = r.gen_range(0.05..=1.0);
        let alpha = HurwitzParameter::new(a).map_err(|e| e.to_string())?;
        let (want, bound) = brute_periodic_hurwitz(s, a, &[c(1.0, 0.0)], 1_000_000);
        let got = eval_hurwitz_zeta(s, &alpha, &ctl).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).norm());
        worst_bound = worst_bound.max(bound);

        let k = r.gen_range(1..=4);
        let b: Vec<Complex64> = (0..k).map(|_| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let Ok(seq) = PeriodicSequence::new(b.clone()) else { continue };
        let (want, bound) = brute_periodic_hurwitz(s, a, &b, 1_000_000);
        let got = eval_periodic_hurwitz(s, &alpha, &seq, &ctl).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).norm());
        worst_bound = worst_bound.max(bound);
    }
    Ok(outcome(
        worst <= 1e-9,
        format!("50 points x 2 functions, max error {worst:.3e} (limit 1e-9), oracle bound {worst_bound:.1e}"),
    ))
}

fn euler_consistency() -> Result<Outcome, String> {
    let mut checked = 0;
    let mut failures = 0;
    let mut worst_ratio = 0.0f64;
    for name in ["riemann", "dirichlet-mod4"] {
        let spec = MatsumotoSpec::preset(name).ok_or("missing preset")?;
        let coeffs = dirichlet_coefficients(&spec, 1_000_000);
        for s in random_points(31 + checked as u64, 50, (1.5, 3.0), (-30.0, 30.0)) {
            let e = euler_product_eval(&spec, s, 100_000).map_err(|e| e.to_string())?;
            let (series, tail) = coeffs.partial_sum(s);
            let diff = (series - e.value).norm();
            let bound = tail + e.tail_bound;
            worst_ratio = worst_ratio.max(diff / bound);
            if diff > bound {
                failures += 1;
            }
            checked += 1;
        }
    }
    Ok(outcome(
        failures == 0,
        format!("{checked} points, {failures} outside bounds, max diff/bound {worst_ratio:.3}"),
    ))
}

fn prime_mean_square() -> Result<Outcome, String> {
    let riemann = MatsumotoSpec::preset("riemann").ok_or("missing preset")?;
    let mod4 = MatsumotoSpec::preset("dirichlet-mod4").ok_or("missing preset")?;
    let exact = [10u64, 100, 1000, 10_000, 100_000, 1_000_000]
        .iter()
        .all(|&x| steuding_kappa(&riemann, x) == 1.0);
    let k = steuding_kappa(&mod4, 1_000_000);
    Ok(outcome(
        exact && (k - 1.0).abs() <= 1e-3,
        format!("riemann exactly 1: {exact}; mod 4 at 1e6: {k:.8}"),
    ))
}

fn sine_curves() -> Result<Vec<(String, DensityCurve)>, ScanError> {
    let cfg = ScanConfig::new(100.0 * PI, 0.05, 30, vec![0.1, 0.5, 0.9])?;
    let records: Vec<ScanRecord> = cfg
        .taus()
        .into_iter()
        .map(|tau| ScanRecord { tau, d1: tau.sin().abs(), d2: 0.0 })
        .collect();
    let refine = |tau: f64| -> Result<f64, ScanError> { Ok(tau.sin().abs()) };
    Ok(vec![
        ("sine refined".into(), density_curve(&records, &cfg, Some(&refine))?),
        ("sine interpolated".into(), density_curve(&records, &cfg, None)?),
    ])
}

fn measure_oracle() -> Result<Outcome, String> {
    let cfg = ScanConfig::new(100.0 * PI, 0.05, 30, vec![0.1, 0.5, 0.9]).map_err(|e| e.to_string())?;
    let records: Vec<ScanRecord> = cfg
        .taus()
        .into_iter()
        .map(|tau| ScanRecord { tau, d1: tau.sin().abs(), d2: 0.0 })
        .collect();
    let refine = |tau: f64| -> Result<f64, ScanError> { Ok(tau.sin().abs()) };
    let mut worst_density = 0.0f64;
    let mut worst_endpoint = 0.0f64;
    for &eps in &cfg.epsilon_grid {
        let hits = hit_intervals(&records, eps, &cfg, Some(&refine)).map_err(|e| e.to_string())?;
        let want = sine_measure(eps, 100) / cfg.t_max;
        worst_density = worst_density.max((hits.measure() / cfg.t_max - want).abs());
        let a = eps.asin();
        for &(lo, hi) in &hits.intervals {
            let k = ((lo + hi) / 2.0 / PI).round();
            let (want_lo, want_hi) = ((k * PI - a).max(0.0), (k * PI + a).min(cfg.t_max));
            worst_endpoint = worst_endpoint.max((lo - want_lo).abs()).max((hi - want_hi).abs());
        }
    }
    Ok(outcome(
        worst_density <= 1e-4 && worst_endpoint <= 1e-5,
        format!("density error {worst_density:.2e} (limit 1e-4), endpoint error {worst_endpoint:.2e} (limit 1e-5)"),
    ))
}

fn smoke_scan() -> Result<(Outcome, DensityCurve), String> {
    let exp = Experiment::load(&root().join("configs/smoke.toml")).map_err(|e| e.to_string())?;
    let art = run_scan(&exp, threads()).map_err(|e| e.to_string())?;
    let best = art.best;
    let best_max = best.d1.max(best.d2);
    let d = art.curve.density_at(0.4).ok_or("0.4 not on the epsilon grid")?;
    let conf = art.confirmations.iter().find(|c| c.epsilon == 0.4).ok_or("no confirmation at 0.4")?;
    let pass = best_max < 0.4 && d > 0.0 && conf.confirmed >= 1;
    Ok((
        outcome(
            pass,
            format!(
                "{} shifts; best tau {:.2} with max(d1,d2) = {best_max:.4}; D_T(0.4) = {d:.3e}; {} of {} intervals confirmed at mesh/4",
                art.records.len(),
                best.tau,
                conf.confirmed,
                conf.intervals
            ),
        ),
        art.curve,
    ))
}

fn reduction() -> Result<Outcome, String> {
    let smoke = std::fs::read_to_string(root().join("configs/smoke.toml")).map_err(|e| e.to_string())?;
    let text = format!(
        "{}\n[joint]\n[[joint.groups]]\nalpha = \"1/pi\"\nsequences = [[1]]\n[[joint.components]]\nk = {{ shape = \"disk\", center = 0.75, radius = 0.05 }}\nf = {{ kind = \"constant\", value = 0 }}\n",
        smoke.replace("T = 5000.0", "T = 500.0")
    );
    let base = root().join("configs");
    let exp = Experiment::from_raw(RawConfig::parse(&text).map_err(|e| e.to_string())?, &base).map_err(|e| e.to_string())?;
    let single = run_scan(&exp, threads()).map_err(|e| e.to_string())?;
    let joint = run_joint_scan(&exp, threads()).map_err(|e| e.to_string())?;
    let worst = single
        .curve
        .points
        .iter()
        .zip(&joint.curve.points)
        .map(|(a, b)| (a.density - b.density).abs())
        .fold(0.0, f64::max);
    let same_len = single.curve.points.len() == joint.curve.points.len();

    let dup = text.replace("sequences = [[1]]", "sequences = [[1, 2], [1, 2]]").replace(
        "[[joint.components]]\nk",
        "[[joint.components]]\nk = { shape = \"disk\", center = 0.75, radius = 0.05 }\nf = { kind = \"constant\", value = 0 }\n[[joint.components]]\nk",
    );
    let rejected = match Experiment::from_raw(RawConfig::parse(&dup).map_err(|e| e.to_string())?, &base) {
        Err(e) => e.exit_code() == 3,
        Ok(_) => false,
    };
    Ok(outcome(
        same_len && worst <= 1e-12 && rejected,
        format!("max density difference {worst:.1e} (limit 1e-12); duplicated column rejected: {rejected}"),
    ))
}

fn determinism() -> Result<Outcome, String> {
    let config = root().join("configs/smoke.toml");
    let dirs = [tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?];
    for (dir, n) in dirs.iter().zip(["1", "8"]) {
        let status = Command::new(env!("CARGO_BIN_EXE_zlab"))
            .args(["scan", config.to_str().unwrap(), "--threads", n, "--out", dir.path().to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("zlab scan --threads {n}: {}", String::from_utf8_lossy(&status.stderr)));
        }
    }
    let mut same = Vec::new();
    for name in ["scan.csv", "density.csv", "density_plot.csv"] {
        let a = std::fs::read(dirs[0].path().join(name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dirs[1].path().join(name)).map_err(|e| e.to_string())?;
        same.push((name, a == b, a.len()));
    }
    let ok = same.iter().all(|s| s.1);
    let detail = same.iter().map(|(n, eq, len)| format!("{n} ({len} bytes) identical: {eq}")).collect::<Vec<_>>().join("; ");
    Ok(outcome(ok, detail))
}

#[test]
fn acceptance() {
    let mut results = vec![
        criterion(1, Duration::from_secs(10), identities),
        criterion(2, Duration::from_secs(60), series_oracles),
        criterion(3, Duration::from_secs(60), euler_consistency),
        criterion(4, Duration::from_secs(30), prime_mean_square),
        criterion(5, Duration::from_secs(5), measure_oracle),
    ];

    let mut curves: Vec<(String, DensityCurve)> = Vec::new();
    results.push(criterion(7, Duration::from_secs(15 * 60), || {
        let (o, curve) = smoke_scan()?;
        curves.push(("smoke".into(), curve));
        Ok(o)
    }));
    results.push(criterion(6, Duration::from_secs(15 * 60), || {
        curves.extend(sine_curves().map_err(|e| e.to_string())?);
        for name in ["self_approximation.toml", "joint_two_sequences.toml"] {
            let exp = Experiment::load(&root().join("configs").join(name)).map_err(|e| e.to_string())?;
            let curve = if exp.joint.is_some() {
                run_joint_scan(&exp, threads()).map_err(|e| e.to_string())?.curve
            } else {
                run_scan(&exp, threads()).map_err(|e| e.to_string())?.curve
            };
            curves.push((name.into(), curve));
        }
        let bad: Vec<String> = curves
            .iter()
            .filter(|(_, c)| !c.violations().is_empty())
            .map(|(n, c)| format!("{n}: {:?}", c.violations()))
            .collect();
        let points: usize = curves.iter().map(|(_, c)| c.points.len()).sum();
        Ok(outcome(
            bad.is_empty(),
            format!("{} curves, {points} points, violations: {}", curves.len(), if bad.is_empty() { "none".into() } else { bad.join(", ") }),
        ))
    }));
    results.push(criterion(8, Duration::from_secs(5 * 60), reduction));
    results.push(criterion(9, Duration::from_secs(30 * 60), determinism));

    let failed = results.iter().filter(|p| !**p).count();
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
