//! Numerical audits of the class conditions. None of these can prove a
//! condition; they report finite-sample evidence.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{check_growth_bounds, GrowthCheck, MatsumotoError, MatsumotoSpec, StripFunction};
use crate::complex::format_real;
use crate::primes::primes_up_to;
use crate::zeta::{
    EvalControls, HurwitzParameter, PeriodicHurwitz, PeriodicSequence, ShiftedGrid,
};

/// Node spacing used for mean squares over long `t` ranges.
const MEAN_SQUARE_STEP: f64 = 0.25;

/// Relative agreement required by [`sigma_star_diagnostic`].
pub const SIGMA_STAR_TOLERANCE: f64 = 0.2;

fn diagnostic_controls() -> EvalControls {
    EvalControls::with_tol(1e-10).expect("valid tolerance")
}

/// `(1/π(x)) Σ_{p≤x} |a(p)|²`.
pub fn steuding_kappa(spec: &MatsumotoSpec, x: u64) -> f64 {
    let primes = primes_up_to(x);
    if primes.is_empty() {
        return 0.0;
    }
    let total: f64 = primes
        .iter()
        .enumerate()
        .map(|(i, &p)| spec.prime_coefficient(i + 1, p).norm_sqr())
        .sum();
    total / primes.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSquare {
    /// Trapezoid estimate of `(1/T) ∫_0^T |φ(σ₀+it)|² dt`.
    pub value: f64,
    /// `|I_h - I_{2h}|`.
    pub quad_error: f64,
    pub nodes: usize,
}

/// See [`StripFunction::mean_square`].
pub fn mean_square_line(
    spec: &MatsumotoSpec,
    sigma0: f64,
    t: f64,
    n: usize,
) -> Result<MeanSquare, MatsumotoError> {
    spec.strip_function()?.mean_square(sigma0, t, n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaStarRow {
    pub sigma: f64,
    /// `(1/2T) ∫_{-T}^{T} |φ(σ+it)|² dt`.
    pub mean_square: f64,
    /// `Σ |a(m)|² m^{-2σ}`.
    pub dirichlet_sum: f64,
    pub agrees: bool,
}

/// Empirical estimate of `σ*`. Always heuristic: a finite `T` cannot decide
/// an asymptotic relation.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaStarEstimate {
    pub sigma: Option<f64>,
    pub rows: Vec<SigmaStarRow>,
    pub heuristic: bool,
}

/// Smallest grid `σ` whose two-sided mean square is within 20% of
/// `Σ |a(m)|² m^{-2σ}`.
pub fn sigma_star_diagnostic(
    spec: &MatsumotoSpec,
    sigma_grid: &[f64],
    t: f64,
) -> Result<SigmaStarEstimate, MatsumotoError> {
    spec.strip_function()?.sigma_star(sigma_grid, t)
}

impl StripFunction {
    /// Trapezoid estimate of `(1/T) ∫_0^T |φ(σ₀+it)|² dt` on `n` nodes
    /// (rounded up to odd so the half-resolution estimate exists).
    pub fn mean_square(&self, sigma0: f64, t: f64, n: usize) -> Result<MeanSquare, MatsumotoError> {
        if n < 100 {
            return Err(MatsumotoError::InvalidParameter(format!(
                "mean square needs at least 100 nodes, got {n}"
            )));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(MatsumotoError::InvalidParameter(format!("T = {t} must be positive")));
        }
        let s0 = Complex64::new(sigma0, 0.0);
        if !(sigma0 > 0.5) {
            return Err(MatsumotoError::OutsideStrip(s0));
        }
        let n = n | 1;
        let grid = ShiftedGrid::new(
            self.series().clone(),
            vec![s0 + self.shift()],
            diagnostic_controls(),
            t,
        )?;
        let h = t / (n - 1) as f64;
        let values = (0..n)
            .map(|i| Ok(grid.eval_at(i as f64 * h)?[0].norm_sqr()))
            .collect::<Result<Vec<f64>, MatsumotoError>>()?;
        let fine = trapezoid(&values, h) / t;
        let coarse_values: Vec<f64> = values.iter().step_by(2).copied().collect();
        let coarse = trapezoid(&coarse_values, 2.0 * h) / t;
        Ok(MeanSquare {
            value: fine,
            quad_error: (fine - coarse).abs(),
            nodes: n,
        })
    }

    pub fn sigma_star(&self, sigma_grid: &[f64], t: f64) -> Result<SigmaStarEstimate, MatsumotoError> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(MatsumotoError::InvalidParameter(format!("T = {t} must be positive")));
        }
        let mut grid: Vec<f64> = sigma_grid.to_vec();
        grid.sort_by(f64::total_cmp);
        if let Some(&bad) = grid.iter().find(|&&s| !(s > 0.5)) {
            return Err(MatsumotoError::OutsideStrip(Complex64::new(bad, 0.0)));
        }
        let points: Vec<Complex64> = grid
            .iter()
            .map(|&s| Complex64::new(s + self.shift(), 0.0))
            .collect();
        let evaluator = ShiftedGrid::new(self.series().clone(), points, diagnostic_controls(), t)?;
        let intervals = ((2.0 * t / MEAN_SQUARE_STEP).ceil() as usize).max(200);
        let h = 2.0 * t / intervals as f64;
        let mut sums = vec![0.0; grid.len()];
        for i in 0..=intervals {
            let weight = if i == 0 || i == intervals { 0.5 } else { 1.0 };
            let values = evaluator.eval_at(-t + i as f64 * h)?;
            for (acc, v) in sums.iter_mut().zip(values) {
                *acc += weight * v.norm_sqr();
            }
        }
        let squares: Vec<Complex64> = self
            .series()
            .sequence()
            .values()
            .iter()
            .map(|b| Complex64::new(b.norm_sqr(), 0.0))
            .collect();
        let square_series = PeriodicHurwitz::new(
            HurwitzParameter::new(1.0)?,
            PeriodicSequence::reduced(squares)?,
        );
        let mut rows = Vec::with_capacity(grid.len());
        for (&sigma, sum) in grid.iter().zip(sums) {
            let mean_square = sum * h / (2.0 * t);
            let exponent = Complex64::new(2.0 * (sigma + self.shift()), 0.0);
            let dirichlet_sum = square_series.eval(exponent, &diagnostic_controls())?.re;
            let agrees = (mean_square - dirichlet_sum).abs() <= SIGMA_STAR_TOLERANCE * dirichlet_sum;
            rows.push(SigmaStarRow {
                sigma,
                mean_square,
                dirichlet_sum,
                agrees,
            });
        }
        Ok(SigmaStarEstimate {
            sigma: rows.iter().find(|r| r.agrees).map(|r| r.sigma),
            rows,
            heuristic: true,
        })
    }

    /// Least-squares slope of `log|φ(σ+it)|` against `log t` for `t` in
    /// `[10, 1000]`, log-spaced. Advisory only.
    pub fn growth_slope(&self, sigma: f64, samples: usize) -> Result<Option<f64>, MatsumotoError> {
        let samples = samples.max(2);
        let ctl = diagnostic_controls();
        let mut xs = Vec::with_capacity(samples);
        let mut ys = Vec::with_capacity(samples);
        for i in 0..samples {
            let log_t = 10f64.ln() + (100f64.ln()) * i as f64 / (samples - 1) as f64;
            let v = self.eval(Complex64::new(sigma, log_t.exp()), &ctl)?.norm();
            if v > 1e-300 {
                xs.push(log_t);
                ys.push(v.ln());
            }
        }
        if xs.len() < 2 {
            return Ok(None);
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        Ok(Some(sxy / sxx))
    }
}

/// See [`StripFunction::growth_slope`].
pub fn growth_slope(spec: &MatsumotoSpec, sigma: f64, samples: usize) -> Result<Option<f64>, MatsumotoError> {
    spec.strip_function()?.growth_slope(sigma, samples)
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => h * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

/// Output of the class audit run by `zlab diagnose`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteudingReport {
    pub spec_name: String,
    /// `(x, (1/π(x)) Σ_{p≤x} |a(p)|²)`.
    pub kappa_estimates: Vec<(u64, f64)>,
    pub growth: GrowthCheck,
    pub growth_ok: bool,
    /// `(T, (1/T) ∫_0^T |φ(σ₀+it)|² dt)` at the line `sigma0`.
    pub mean_square_ratios: Vec<(f64, f64)>,
    pub mean_square_sigma: Option<f64>,
    pub growth_slope: Option<f64>,
    pub notes: Vec<String>,
}

impl SteudingReport {
    pub fn run(spec: &MatsumotoSpec) -> Result<Self, MatsumotoError> {
        let kappa_estimates = [1_000u64, 10_000, 100_000, 1_000_000]
            .iter()
            .map(|&x| (x, steuding_kappa(spec, x)))
            .collect();
        let growth = check_growth_bounds(spec, 1000);
        let mut notes = Vec::new();
        let mut mean_square_ratios = Vec::new();
        let mut mean_square_sigma = None;
        let mut slope = None;
        match spec.strip_function() {
            Ok(strip) => {
                let sigma_star = spec.declared_sigma_star().unwrap_or(0.5);
                let sigma0 = 0.5 * (sigma_star + 1.0);
                mean_square_sigma = Some(sigma0);
                for t in [100.0, 200.0, 400.0, 800.0] {
                    let n = (8.0 * t) as usize + 1;
                    mean_square_ratios.push((t, strip.mean_square(sigma0, t, n)?.value));
                }
                slope = strip.growth_slope(sigma0, 41)?;
                notes.push(format!(
                    "mean square sampled on Re s = {sigma0}; bounded ratios across T support a bounded mean square"
                ));
                notes.push(
                    "growth slope is a finite-sample log-log fit; it cannot confirm an O-bound".into(),
                );
            }
            Err(_) => notes.push(
                "strategy is euler-product-only: strip conditions not sampled".into(),
            ),
        }
        if spec.declared_sigma_star().is_none() {
            notes.push("sigma_star not declared; scans fall back to the heuristic diagnostic".into());
        }
        Ok(Self {
            spec_name: spec.name().to_string(),
            kappa_estimates,
            growth_ok: growth.ok,
            growth,
            mean_square_ratios,
            mean_square_sigma,
            growth_slope: slope,
            notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "class audit for spec '{}'", self.spec_name);
        let _ = writeln!(out);
        let _ = writeln!(out, "prime mean square of a(p)");
        for (x, k) in &self.kappa_estimates {
            let _ = writeln!(out, "  x = {x:>8}  kappa_x = {k:.12}");
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "growth bounds g(m) <= C1 p^alpha0, |a| <= p^beta0 (m <= {}): {}",
            self.growth.checked,
            if self.growth_ok { "hold" } else { "VIOLATED" }
        );
        if let Some(v) = &self.growth.first_violation {
            let _ = writeln!(out, "  first violation: {v}");
        }
        if let Some(sigma) = self.mean_square_sigma {
            let _ = writeln!(out);
            let _ = writeln!(out, "mean square (1/T) int_0^T |phi({sigma} + it)|^2 dt");
            for (t, v) in &self.mean_square_ratios {
                let _ = writeln!(out, "  T = {t:>6}  {v:.8}");
            }
        }
        if let Some(slope) = self.growth_slope {
            let _ = writeln!(out);
            let _ = writeln!(out, "order of growth: log-log slope {slope:.4} (advisory)");
        }
        let _ = writeln!(out);
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }

    /// `quantity,parameter,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,parameter,value\n");
        for (x, k) in &self.kappa_estimates {
            let _ = writeln!(out, "kappa,{x},{}", format_real(*k));
        }
        let _ = writeln!(
            out,
            "growth_ok,{},{}",
            self.growth.checked,
            if self.growth_ok { 1 } else { 0 }
        );
        for (t, v) in &self.mean_square_ratios {
            let _ = writeln!(out, "mean_square,{},{}", format_real(*t), format_real(*v));
        }
        if let (Some(slope), Some(sigma)) = (self.growth_slope, self.mean_square_sigma) {
            let _ = writeln!(out, "growth_slope,{},{}", format_real(sigma), format_real(slope));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_kappa_is_exactly_one() {
        let spec = MatsumotoSpec::preset("riemann").unwrap();
        for x in [2, 10, 10_000] {
            assert_eq!(steuding_kappa(&spec, x), 1.0);
        }
    }

    #[test]
    fn zero_spec_kappa_and_growth() {
        let spec = MatsumotoSpec::preset("zero").unwrap();
        assert_eq!(steuding_kappa(&spec, 1000), 0.0);
        let report = SteudingReport::run(&spec).unwrap();
        assert!(report.growth_ok);
        assert!(report.kappa_estimates.iter().all(|&(_, k)| k == 0.0));
        assert!(report.mean_square_ratios.is_empty());
    }

    #[test]
    fn zero_function_mean_square() {
        let m = StripFunction::zero().mean_square(0.75, 50.0, 200).unwrap();
        assert_eq!(m.value, 0.0);
        let est = StripFunction::zero().sigma_star(&[0.6, 0.8], 10.0).unwrap();
        assert!(est.rows.iter().all(|r| r.agrees && r.mean_square == 0.0));
        assert_eq!(est.sigma, Some(0.6));
    }

    #[test]
    fn riemann_mean_square_at_two() {
        let spec = MatsumotoSpec::preset("riemann").unwrap();
        let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
        let m = mean_square_line(&spec, 2.0, 100.0, 1001).unwrap();
        assert!((m.value - zeta4).abs() < 5e-2, "{m:?}");
        let doubled = mean_square_line(&spec, 2.0, 100.0, 2002).unwrap();
        assert!((doubled.value - m.value).abs() <= m.quad_error, "{m:?} {doubled:?}");
    }

    #[test]
    fn trapezoid_edges() {
        assert_eq!(trapezoid(&[], 1.0), 0.0);
        assert_eq!(trapezoid(&[3.0], 1.0), 0.0);
        assert_eq!(trapezoid(&[1.0, 1.0, 1.0], 0.5), 1.0);
    }
}
