//! Test-only reference computations. Nothing here calls the library's
//! evaluators.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Compensated complex sum.
#[derive(Default)]
pub struct Kahan {
    sum: Complex64,
    comp: Complex64,
}

impl Kahan {
    pub fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

/// `(n + α)^{-s}` computed directly.
pub fn power(n: f64, s: Complex64) -> Complex64 {
    (-s * n.ln()).exp()
}

/// Direct summation of `Σ_{n≥0} b_{n mod k} (n+α)^{-s}` over the first `n`
/// terms, plus a tail estimate and a bound on the error of the whole.
///
/// The tail splits into the mean part `μ Σ (n+α)^{-s}` (integral plus half
/// the first term; trapezoid error `|s(s+1)|/12 · ∫ x^{-σ-2}`) and a
/// zero-mean periodic part, bounded by summation by parts as
/// `k · max|b-μ| · |s| · (N+α)^{-σ} / σ`.
pub fn brute_periodic_hurwitz(s: Complex64, alpha: f64, b: &[Complex64], n: usize) -> (Complex64, f64) {
    assert!(s.re > 1.0);
    let k = b.len();
    let mut acc = Kahan::default();
    for j in (0..n).rev() {
        let coeff = b[j % k];
        if coeff != Complex64::new(0.0, 0.0) {
            acc.add(coeff * power(j as f64 + alpha, s));
        }
    }
    let mu = b.iter().sum::<Complex64>() / k as f64;
    let x = n as f64 + alpha;
    let sigma = s.re;
    let mean_tail = mu * (power(x, s - 1.0) / (s - 1.0) + 0.5 * power(x, s));
    let trap_err = mu.norm() * (s * (s + 1.0)).norm() / 12.0 * x.powf(-sigma - 1.0) / (sigma + 1.0);
    let spread = b.iter().map(|&v| (v - mu).norm()).fold(0.0, f64::max);
    let periodic_err = k as f64 * spread * (s.norm() / sigma + 1.0) * x.powf(-sigma);
    // Rounding: 1e6 terms with compensation, each term accurate to a few ulps.
    let rounding = 1e-15 * b.iter().map(|v| v.norm()).fold(0.0, f64::max) * 4.0;
    (acc.value() + mean_tail, trap_err + periodic_err + rounding)
}

/// Catalan's constant `Σ (-1)^n/(2n+1)^2` by the alternating series.
/// Adding half the first omitted term leaves an error of order `n^{-3}`.
pub fn catalan() -> f64 {
    let n = 2_000_000u64;
    let sign = |j: u64| if j % 2 == 0 { 1.0 } else { -1.0 };
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for j in (0..n).rev() {
        let y = sign(j) / ((2 * j + 1) as f64).powi(2) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum + 0.5 * sign(n) / ((2 * n + 1) as f64).powi(2)
}

/// Uniform points in a rectangle of the s-plane, avoiding a disk around 1.
pub fn random_points(seed: u64, count: usize, sigma: (f64, f64), t: (f64, f64)) -> Vec<Complex64> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = c(r.gen_range(sigma.0..=sigma.1), r.gen_range(t.0..=t.1));
        if (s - 1.0).norm() > 0.1 {
            out.push(s);
        }
    }
    out
}

/// `{τ : |sin τ| < ε}` on `[0, Nπ]` has measure `2N arcsin ε`.
pub fn sine_measure(epsilon: f64, periods: usize) -> f64 {
    2.0 * periods as f64 * epsilon.asin()
}
