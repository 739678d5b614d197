//! Euler–Maclaurin tail of the Hurwitz series with a rigorous remainder bound.
//!
//! For `f(x) = (x+a)^{-s}` and truncation index `N`,
//!
//! ```text
//! Σ_{n≥N} (n+a)^{-s} = (N+a)^{1-s}/(s-1) + (N+a)^{-s}/2
//!                      + Σ_{k=1}^{M} B_{2k}/(2k)! (s)_{2k-1} (N+a)^{-s-2k+1} + R_M,
//! |R_M| ≤ |B_{2M}|/(2M)! |(s)_{2M}| (N+a)^{1-σ-2M} / (σ+2M-1).
//! ```
//!
//! The pole term is returned in regularised form `((N+a)^{1-s} - 1)/(s-1)`,
//! so the result is the tail minus `1/(s-1)`, which is entire in `s`.

use num_complex::Complex64;

use super::bernoulli::{scaled_even, MAX_ORDER};

/// `Σ_{n≥N} (n+a)^{-s} - 1/(s-1)` with truncation error at most `tol`.
///
/// Returns `None` when no order up to [`MAX_ORDER`] brings the remainder
/// bound below `tol` for this `N`; the caller should increase `N`.
pub(crate) fn regular_tail(s: Complex64, a: f64, n: usize, tol: f64) -> Option<Complex64> {
    let x = n as f64 + a;
    let log_x = x.ln();
    let one = Complex64::new(1.0, 0.0);
    let x_pow = (-s * log_x).exp(); // (N+a)^{-s}

    let w = (one - s) * log_x;
    let pole_part = -log_x * exprel(w); // ((N+a)^{1-s} - 1)/(s-1)
    let mut sum = pole_part + 0.5 * x_pow;

    let inv_x2 = 1.0 / (x * x);
    // term_k = B_{2k}/(2k)! (s)_{2k-1} x^{-s-2k+1}
    let mut term = scaled_even(1) * s * x_pow / x;
    let mut best = f64::INFINITY;
    for k in 1..=MAX_ORDER {
        sum += term;
        let kf = k as f64;
        let denom = s.re + 2.0 * kf - 1.0;
        let bound = if denom > 0.0 {
            term.norm() * (s + (2.0 * kf - 1.0)).norm() / denom
        } else {
            f64::INFINITY
        };
        if bound <= tol {
            return Some(sum);
        }
        if bound > best && k > 4 {
            // Asymptotic series has turned around.
            return None;
        }
        best = best.min(bound);
        if k < MAX_ORDER {
            let ratio = scaled_even(k + 1) / scaled_even(k);
            term = term * ratio * (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf) * inv_x2;
        }
    }
    None
}

/// `(e^w - 1)/w`, accurate near `w = 0`.
pub(crate) fn exprel(w: Complex64) -> Complex64 {
    if w.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..40 {
            term = term * w / k as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (w.exp() - 1.0) / w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exprel_is_continuous_across_switch() {
        for &r in &[0.49999, 0.5, 0.50001] {
            let w = Complex64::from_polar(r, 0.7);
            let direct = (w.exp() - 1.0) / w;
            assert!((exprel(w) - direct).norm() < 1e-14);
        }
        assert_eq!(exprel(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn tightening_stays_within_loose_bound() {
        let s = Complex64::new(0.75, 40.0);
        let loose = regular_tail(s, 0.5, 40, 1e-4).unwrap();
        let tight = regular_tail(s, 0.5, 40, 1e-13).unwrap();
        assert!((tight - loose).norm() <= 1e-4 + 1e-13);
    }

    #[test]
    fn too_short_truncation_is_refused() {
        // N far below |t|/(2π) cannot reach high accuracy.
        assert!(regular_tail(Complex64::new(0.5, 1000.0), 1.0, 3, 1e-12).is_none());
    }
}
