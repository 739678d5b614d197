use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{TargetError, TargetFunction};

/// Degree used when a configuration does not set one.
pub const DEFAULT_DEGREE: usize = 12;

/// Largest accepted singular-value ratio of the design matrix.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct FittedPolynomial {
    pub target: TargetFunction,
    pub max_residual: f64,
    pub condition: f64,
}

/// Least-squares polynomial of the given degree through `(s_i, v_i)`.
///
/// The basis is centered at the sample mean and scaled by the sample
/// radius, which keeps the design matrix well conditioned.
pub fn polynomial_target(
    samples: &[(Complex64, Complex64)],
    degree: usize,
) -> Result<FittedPolynomial, TargetError> {
    let n = samples.len();
    if n < degree + 1 {
        return Err(TargetError::InsufficientSamples {
            needed: degree + 1,
            got: n,
            degree,
        });
    }
    for (i, &(s, v)) in samples.iter().enumerate() {
        if !(s.re.is_finite() && s.im.is_finite() && v.re.is_finite() && v.im.is_finite()) {
            return Err(TargetError::NonFinite(s));
        }
        if let Some(j) = samples[..i].iter().position(|&(t, _)| t == s) {
            return Err(TargetError::DuplicatePoints(j, i));
        }
    }
    let center = samples.iter().map(|&(s, _)| s).sum::<Complex64>() / n as f64;
    let scale = samples
        .iter()
        .map(|&(s, _)| (s - center).norm())
        .fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let design = DMatrix::from_fn(n, degree + 1, |i, k| {
        ((samples[i].0 - center) / scale).powu(k as u32)
    });
    let rhs = DVector::from_iterator(n, samples.iter().map(|&(_, v)| v));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(TargetError::IllConditioned(condition));
    }
    let coeffs = svd
        .solve(&rhs, 0.0)
        .map_err(|_| TargetError::IllConditioned(condition))?;
    let residual = &design * &coeffs - &rhs;
    let max_residual = residual.iter().map(|r| r.norm()).fold(0.0, f64::max);
    Ok(FittedPolynomial {
        target: TargetFunction::centered_polynomial(coeffs.iter().copied().collect(), center, scale),
        max_residual,
        condition,
    })
}
