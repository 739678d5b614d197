//! Euler-product zeta-functions of the Matsumoto class and the Steuding
//! subclass.
//!
//! A member is given by polynomial Euler factors
//! `A_m(X) = Π_j (1 - a_m^{(j)} X^{f(j,m)})` at the `m`-th prime and the
//! shift `α₀ + β₀`; the function studied is
//! `φ(s) = Π_m A_m(p_m^{-s-α₀-β₀})^{-1} = Σ c_k k^{-s}`.
//!
//! Continuation into the strip is available only for degree-one members with
//! periodic coefficients (ζ, Dirichlet L-functions), through a Hurwitz
//! combination. Everything else is evaluated on `σ > 1` only.

mod coefficients;
mod diagnostics;
mod specfile;

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

pub use coefficients::{dirichlet_coefficients, DirichletCoefficients};
pub use diagnostics::{
    growth_slope, mean_square_line, sigma_star_diagnostic, steuding_kappa, MeanSquare,
    SigmaStarEstimate, SteudingReport,
};
pub use specfile::{RawFactor, RawRule, RawSpec, RawStrategy};

use crate::primes::{first_primes, primes_up_to};
use crate::zeta::{EvalControls, HurwitzParameter, PeriodicHurwitz, PeriodicSequence, ZetaError};

/// `euler_product_eval` requires `σ` above `1 + CONVERGENCE_MARGIN`.
pub const CONVERGENCE_MARGIN: f64 = 0.05;

/// `|A_m(X)|` below this is treated as a zero of the Euler factor.
pub const FACTOR_ZERO_GUARD: f64 = 1e-14;

/// Rosser–Schoenfeld: `π(x) < 1.25506 x / ln x` for `x > 1`.
const PRIME_COUNT_CONSTANT: f64 = 1.25506;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatsumotoError {
    /// Violates a hard structural constraint (multiple poles, wrong primes,
    /// strategy inconsistent with the Euler factors).
    #[error("spec structure: {0}")]
    Structure(String),
    #[error("invalid spec parameter: {0}")]
    InvalidParameter(String),
    #[error("spec parse error: {0}")]
    Parse(String),
    #[error("Euler factor at p = {prime} vanishes at s = {s}")]
    FactorVanishes { prime: u64, s: Complex64 },
    #[error("Euler product diverges or is not certified at Re s = {0} (need Re s > 1.05)")]
    DivergentRegion(f64),
    #[error("strip evaluation needs the hurwitz-combination strategy")]
    UnsupportedStrategy,
    #[error("s = {0} is outside the strip-evaluation region Re s > 1/2")]
    OutsideStrip(Complex64),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

/// Euler factor `A_m(X)` at the `m`-th prime.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerFactor {
    pub prime_index: usize,
    pub prime: u64,
    /// `(f(j,m), a_m^{(j)})` for `j = 1..=g(m)`.
    pub terms: Vec<(u32, Complex64)>,
}

impl EulerFactor {
    pub fn degree_count(&self) -> usize {
        self.terms.len()
    }

    /// `A_m(X)`.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(f, a)| Complex64::new(1.0, 0.0) - a * x.powu(f))
            .product()
    }

    /// Coefficients of `A_m(X)` up to degree `max_degree`.
    pub fn polynomial(&self, max_degree: usize) -> Vec<Complex64> {
        let mut poly = vec![Complex64::new(0.0, 0.0); max_degree + 1];
        poly[0] = Complex64::new(1.0, 0.0);
        for &(f, a) in &self.terms {
            let f = f as usize;
            for d in (f..=max_degree).rev() {
                let lower = poly[d - f];
                poly[d] -= a * lower;
            }
        }
        poly
    }
}

/// How the Euler factors are generated.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorRule {
    /// `A_m(X) = 1 - X`.
    Riemann,
    /// `A_m(X) = 1 - χ(p_m) X` with `values[r] = χ(n)` for `n ≡ r (mod q)`.
    DirichletCharacter { modulus: usize, values: Vec<Complex64> },
    /// Explicit factors keyed by prime index; unlisted primes get `A_m = 1`.
    Table(BTreeMap<usize, EulerFactor>),
}

/// How `φ` is evaluated for `σ <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum StripStrategy {
    EulerProductOnly,
    /// `Σ a(n) n^{-s}` with `coefficients[r] = a(n)` for `n ≡ r (mod period)`.
    HurwitzCombination {
        period: usize,
        coefficients: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatsumotoSpec {
    name: String,
    rule: FactorRule,
    alpha0: f64,
    beta0: f64,
    c1: f64,
    strategy: StripStrategy,
    declared_sigma_star: Option<f64>,
    /// Strip evaluator derived from the strategy, with the `α₀+β₀` shift.
    strip: Option<StripFunction>,
}

/// A periodic Dirichlet series `Σ_{n≥1} a(n) n^{-(s+shift)}` evaluated through
/// `ζ(s, 1; B)` with `b_j = a(j+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StripFunction {
    series: PeriodicHurwitz,
    shift: f64,
}

impl StripFunction {
    /// `coefficients[r] = a(n)` for `n ≡ r (mod q)`.
    pub fn new(coefficients: &[Complex64], shift: f64) -> Result<Self, MatsumotoError> {
        let q = coefficients.len();
        if q == 0 {
            return Err(MatsumotoError::InvalidParameter("empty coefficient list".into()));
        }
        let b: Vec<Complex64> = (0..q).map(|j| coefficients[(j + 1) % q]).collect();
        let seq = PeriodicSequence::reduced(b)?;
        let alpha = HurwitzParameter::new(1.0)?;
        Ok(Self {
            series: PeriodicHurwitz::new(alpha, seq),
            shift,
        })
    }

    pub fn zero() -> Self {
        Self::new(&[Complex64::new(0.0, 0.0)], 0.0).expect("zero series is valid")
    }

    pub fn series(&self) -> &PeriodicHurwitz {
        &self.series
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `a(n)` without the `n^{-shift}` factor.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.series.sequence().at(n - 1)
    }

    pub fn eval(&self, s: Complex64, ctl: &EvalControls) -> Result<Complex64, MatsumotoError> {
        if !(s.re > 0.5) {
            return Err(MatsumotoError::OutsideStrip(s));
        }
        Ok(self.series.eval(s + self.shift, ctl)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProductValue {
    pub value: Complex64,
    /// Bound on `|φ(s) - value|` from the primes above the cap.
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCheck {
    pub ok: bool,
    pub checked: usize,
    pub first_violation: Option<String>,
}

impl MatsumotoSpec {
    /// Validates parameters and, for the Hurwitz strategy, that the Euler
    /// factors really produce the declared periodic coefficients.
    pub fn new(
        name: impl Into<String>,
        rule: FactorRule,
        alpha0: f64,
        beta0: f64,
        c1: f64,
        strategy: StripStrategy,
        declared_sigma_star: Option<f64>,
    ) -> Result<Self, MatsumotoError> {
        let bad = |msg: String| Err(MatsumotoError::InvalidParameter(msg));
        if !(alpha0 >= 0.0 && alpha0.is_finite()) {
            return bad(format!("alpha0 = {alpha0} must be a finite non-negative number"));
        }
        if !(beta0 >= 0.0 && beta0.is_finite()) {
            return bad(format!("beta0 = {beta0} must be a finite non-negative number"));
        }
        if !(c1 > 0.0 && c1.is_finite()) {
            return bad(format!("C1 = {c1} must be positive"));
        }
        if let Some(ss) = declared_sigma_star {
            if !(0.5..1.0).contains(&ss) {
                return bad(format!("sigma_star = {ss} must lie in [1/2, 1)"));
            }
        }
        validate_rule(&rule)?;
        let shift = alpha0 + beta0;
        let strip = match &strategy {
            StripStrategy::EulerProductOnly => None,
            StripStrategy::HurwitzCombination {
                period,
                coefficients,
            } => {
                if *period == 0 || coefficients.len() != *period {
                    return Err(MatsumotoError::Structure(format!(
                        "hurwitz-combination period {period} does not match {} coefficients",
                        coefficients.len()
                    )));
                }
                Some(StripFunction::new(coefficients, shift)?)
            }
        };
        let spec = Self {
            name: name.into(),
            rule,
            alpha0,
            beta0,
            c1,
            strategy,
            declared_sigma_star,
            strip,
        };
        spec.check_strategy_round_trip()?;
        Ok(spec)
    }

    /// `riemann`, `dirichlet-mod4` (the non-principal character mod 4) or
    /// `zero` (all Euler coefficients zero, so `φ ≡ 1`).
    pub fn preset(name: &str) -> Option<Self> {
        let c = |re: f64| Complex64::new(re, 0.0);
        let spec = match name {
            "riemann" => Self::new(
                "riemann",
                FactorRule::Riemann,
                0.0,
                0.0,
                1.0,
                StripStrategy::HurwitzCombination {
                    period: 1,
                    coefficients: vec![c(1.0)],
                },
                Some(0.5),
            ),
            "dirichlet-mod4" => {
                let values = vec![c(0.0), c(1.0), c(0.0), c(-1.0)];
                Self::new(
                    "dirichlet-mod4",
                    FactorRule::DirichletCharacter {
                        modulus: 4,
                        values: values.clone(),
                    },
                    0.0,
                    0.0,
                    1.0,
                    StripStrategy::HurwitzCombination {
                        period: 4,
                        coefficients: values,
                    },
                    Some(0.5),
                )
            }
            "zero" => Self::new(
                "zero",
                FactorRule::Table(BTreeMap::new()),
                0.0,
                0.0,
                1.0,
                StripStrategy::EulerProductOnly,
                None,
            ),
            _ => return None,
        };
        Some(spec.expect("presets are valid"))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rule(&self) -> &FactorRule {
        &self.rule
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn shift(&self) -> f64 {
        self.alpha0 + self.beta0
    }

    pub fn strategy(&self) -> &StripStrategy {
        &self.strategy
    }

    pub fn declared_sigma_star(&self) -> Option<f64> {
        self.declared_sigma_star
    }

    pub fn strip_function(&self) -> Result<&StripFunction, MatsumotoError> {
        self.strip.as_ref().ok_or(MatsumotoError::UnsupportedStrategy)
    }

    /// `A_m` for the `m`-th prime `p`.
    pub fn factor(&self, prime_index: usize, prime: u64) -> EulerFactor {
        let terms = match &self.rule {
            FactorRule::Riemann => vec![(1, Complex64::new(1.0, 0.0))],
            FactorRule::DirichletCharacter { modulus, values } => {
                vec![(1, values[(prime % *modulus as u64) as usize])]
            }
            FactorRule::Table(table) => match table.get(&prime_index) {
                Some(f) => f.terms.clone(),
                None => vec![(1, Complex64::new(0.0, 0.0))],
            },
        };
        EulerFactor {
            prime_index,
            prime,
            terms,
        }
    }

    /// `a(p)`: the Dirichlet coefficient at the prime `p` (index `m`), shifted.
    pub fn prime_coefficient(&self, prime_index: usize, prime: u64) -> Complex64 {
        let f = self.factor(prime_index, prime);
        let unshifted: Complex64 = f.terms.iter().filter(|(e, _)| *e == 1).map(|(_, a)| a).sum();
        if self.shift() == 0.0 {
            unshifted
        } else {
            unshifted * (prime as f64).powf(-self.shift())
        }
    }

    fn check_strategy_round_trip(&self) -> Result<(), MatsumotoError> {
        let StripStrategy::HurwitzCombination {
            period,
            coefficients,
        } = &self.strategy
        else {
            return Ok(());
        };
        let kmax = (4 * period * period).clamp(64, 20_000);
        let c = coefficients::expand(self, kmax, false);
        for k in 1..=kmax {
            let want = coefficients[k % period];
            let got = c.get(k);
            if (got - want).norm() > 1e-12 * (1.0 + want.norm()) {
                return Err(MatsumotoError::Structure(format!(
                    "hurwitz-combination coefficients disagree with the Euler factors at k = {k}: \
                     declared {want}, Euler product gives {got}"
                )));
            }
        }
        Ok(())
    }
}

fn validate_rule(rule: &FactorRule) -> Result<(), MatsumotoError> {
    match rule {
        FactorRule::Riemann => Ok(()),
        FactorRule::DirichletCharacter { modulus, values } => {
            if *modulus == 0 || values.len() != *modulus {
                return Err(MatsumotoError::Structure(format!(
                    "character modulus {modulus} needs exactly {modulus} values, got {}",
                    values.len()
                )));
            }
            Ok(())
        }
        FactorRule::Table(table) => {
            let max_index = table.keys().copied().max().unwrap_or(0);
            let primes = first_primes(max_index);
            for (&m, f) in table {
                if m == 0 || f.prime_index != m {
                    return Err(MatsumotoError::Structure(format!(
                        "factor keyed {m} has prime index {}",
                        f.prime_index
                    )));
                }
                if primes[m - 1] != f.prime {
                    return Err(MatsumotoError::Structure(format!(
                        "factor {m} lists p = {} but the {m}-th prime is {}",
                        f.prime,
                        primes[m - 1]
                    )));
                }
                if f.terms.is_empty() {
                    return Err(MatsumotoError::Structure(format!("factor {m} has g(m) = 0")));
                }
                if f.terms.iter().any(|&(e, a)| e == 0 || !(a.re.is_finite() && a.im.is_finite())) {
                    return Err(MatsumotoError::Structure(format!(
                        "factor {m} needs exponents >= 1 and finite coefficients"
                    )));
                }
            }
            Ok(())
        }
    }
}

/// `Π_{p ≤ P} A_m(p^{-s-α₀-β₀})^{-1}` with a bound on the omitted primes.
///
/// The bound assumes the growth conditions `g(m) ≤ C₁ p^{α₀}` and
/// `|a_m^{(j)}| ≤ p^{β₀}` hold for every prime above the cap.
pub fn euler_product_eval(
    spec: &MatsumotoSpec,
    s: Complex64,
    prime_cap: u64,
) -> Result<EulerProductValue, MatsumotoError> {
    if !(s.re > 1.0 + CONVERGENCE_MARGIN) || !s.im.is_finite() {
        return Err(MatsumotoError::DivergentRegion(s.re));
    }
    if prime_cap < 2 {
        return Err(MatsumotoError::InvalidParameter(format!(
            "prime cap {prime_cap} must be at least 2"
        )));
    }
    let shifted = s + spec.shift();
    let mut value = Complex64::new(1.0, 0.0);
    for (i, &p) in primes_up_to(prime_cap).iter().enumerate() {
        let x = (-shifted * (p as f64).ln()).exp();
        let a = spec.factor(i + 1, p).eval(x);
        if a.norm() < FACTOR_ZERO_GUARD {
            return Err(MatsumotoError::FactorVanishes { prime: p, s });
        }
        value /= a;
    }
    let sigma = s.re;
    let cap = prime_cap as f64;
    let prime_tail = PRIME_COUNT_CONSTANT * sigma * cap.powf(1.0 - sigma) / ((sigma - 1.0) * cap.ln());
    let log_bound = spec.c1() * prime_tail / (1.0 - cap.powf(-sigma));
    Ok(EulerProductValue {
        value,
        tail_bound: value.norm() * log_bound.exp_m1(),
    })
}

/// `φ(s)` on `σ > 1/2` via the Hurwitz combination.
pub fn strip_eval(
    spec: &MatsumotoSpec,
    s: Complex64,
    ctl: &EvalControls,
) -> Result<Complex64, MatsumotoError> {
    spec.strip_function()?.eval(s, ctl)
}

/// Checks `g(m) ≤ C₁ p_m^{α₀}` and `|a_m^{(j)}| ≤ p_m^{β₀}` for `m ≤ m_max`.
pub fn check_growth_bounds(spec: &MatsumotoSpec, m_max: usize) -> GrowthCheck {
    for (i, &p) in first_primes(m_max).iter().enumerate() {
        let m = i + 1;
        let f = spec.factor(m, p);
        let pf = p as f64;
        let g_cap = spec.c1() * pf.powf(spec.alpha0());
        if f.degree_count() as f64 > g_cap {
            return GrowthCheck {
                ok: false,
                checked: m,
                first_violation: Some(format!(
                    "m = {m} (p = {p}): g(m) = {} exceeds C1 p^alpha0 = {g_cap}",
                    f.degree_count()
                )),
            };
        }
        let a_cap = pf.powf(spec.beta0());
        if let Some((j, (_, a))) = f
            .terms
            .iter()
            .enumerate()
            .find(|(_, (_, a))| a.norm() > a_cap)
        {
            return GrowthCheck {
                ok: false,
                checked: m,
                first_violation: Some(format!(
                    "m = {m} (p = {p}): |a^({})| = {} exceeds p^beta0 = {a_cap}",
                    j + 1,
                    a.norm()
                )),
            };
        }
    }
    GrowthCheck {
        ok: true,
        checked: m_max,
        first_violation: None,
    }
}
