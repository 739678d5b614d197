//! Dirichlet coefficients of an Euler product.

use num_complex::Complex64;

use super::MatsumotoSpec;
use crate::primes::{primes_up_to, smallest_prime_factors};

/// `c_k` for `1 <= k <= kmax`, already including the `k^{-α₀-β₀}` shift.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCoefficients {
    c: Vec<Complex64>,
}

impl DirichletCoefficients {
    pub fn kmax(&self) -> usize {
        self.c.len() - 1
    }

    /// `c_k`; panics outside `1..=kmax`.
    pub fn get(&self, k: usize) -> Complex64 {
        assert!(k >= 1 && k <= self.kmax(), "coefficient index {k} out of range");
        self.c[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.c.iter().copied().enumerate().skip(1)
    }

    /// `Σ_{k≤K} c_k k^{-s}` and a bound on the omitted tail.
    ///
    /// The tail bound is `max_k |c_k| · K^{1-σ}/(σ-1)`, rigorous whenever
    /// the coefficients stay bounded by their maximum over `1..=K` (true for
    /// ζ and Dirichlet L-functions).
    pub fn partial_sum(&self, s: Complex64) -> (Complex64, f64) {
        let kmax = self.kmax();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        // Smallest terms first, with Kahan compensation.
        for k in (1..=kmax).rev() {
            let c = self.c[k];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let term = c * (-s * (k as f64).ln()).exp() - comp;
            let next = sum + term;
            comp = (next - sum) - term;
            sum = next;
        }
        let bound_coeff = self.c[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let tail = if s.re > 1.0 {
            bound_coeff * (kmax as f64).powf(1.0 - s.re) / (s.re - 1.0)
        } else {
            f64::INFINITY
        };
        (sum, tail)
    }
}

/// Expands each `A_m(X)^{-1}` as a power series and combines them
/// multiplicatively.
pub fn dirichlet_coefficients(spec: &MatsumotoSpec, kmax: usize) -> DirichletCoefficients {
    expand(spec, kmax.max(1), true)
}

pub(super) fn expand(spec: &MatsumotoSpec, kmax: usize, shifted: bool) -> DirichletCoefficients {
    let zero = Complex64::new(0.0, 0.0);
    let mut c = vec![zero; kmax + 1];
    c[1] = Complex64::new(1.0, 0.0);
    let shift = if shifted { spec.shift() } else { 0.0 };
    for (i, &p) in primes_up_to(kmax as u64).iter().enumerate() {
        let mut emax = 0;
        let mut pe = 1u64;
        while pe * p <= kmax as u64 {
            pe *= p;
            emax += 1;
        }
        let poly = spec.factor(i + 1, p).polynomial(emax);
        let series = reciprocal_series(&poly, emax);
        let mut pe = 1usize;
        for &r in series.iter().skip(1) {
            pe *= p as usize;
            c[pe] = if shift == 0.0 {
                r
            } else {
                r * (pe as f64).powf(-shift)
            };
        }
    }
    let spf = smallest_prime_factors(kmax);
    for k in 2..=kmax {
        let p = spf[k] as usize;
        let mut pe = p;
        while k % (pe * p) == 0 {
            pe *= p;
        }
        if pe != k {
            c[k] = c[pe] * c[k / pe];
        }
    }
    DirichletCoefficients { c }
}

/// Power series of `1/A(X)` to degree `n`, assuming `A(0) = 1`.
pub(crate) fn reciprocal_series(poly: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut r = vec![Complex64::new(0.0, 0.0); n + 1];
    r[0] = Complex64::new(1.0, 0.0);
    for d in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=d.min(poly.len() - 1) {
            acc += poly[i] * r[d - i];
        }
        r[d] = -acc;
    }
    r
}
