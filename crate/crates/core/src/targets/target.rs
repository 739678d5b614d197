use std::collections::HashMap;

use num_complex::Complex64;

use super::{CompactSet, SampleGrid, TargetError};

/// Slack used when deciding whether a root lies in a compact set.
const ROOT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum TargetKind {
    /// `Σ c_k w^k` with `w = (s - center) / scale`.
    Polynomial {
        coeffs: Vec<Complex64>,
        center: Complex64,
        scale: f64,
    },
    /// `exp(Σ c_k w^k)` with `w = (s - center) / scale`.
    ExpPolynomial {
        coeffs: Vec<Complex64>,
        center: Complex64,
        scale: f64,
    },
    Constant(Complex64),
    /// Values known only at listed points (for example a function sampled
    /// at a fixed shift).
    Tabulated(Vec<(Complex64, Complex64)>),
}

#[derive(Debug, Clone)]
pub struct TargetFunction {
    kind: TargetKind,
    nonvanishing: bool,
    table: HashMap<(u64, u64), Complex64>,
}

impl PartialEq for TargetFunction {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.nonvanishing == other.nonvanishing
    }
}

fn key(s: Complex64) -> (u64, u64) {
    // Normalize -0.0 so it tabulates like 0.0.
    ((s.re + 0.0).to_bits(), (s.im + 0.0).to_bits())
}

fn horner(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
}

impl TargetFunction {
    pub fn constant(c: Complex64) -> Self {
        Self {
            kind: TargetKind::Constant(c),
            nonvanishing: c != Complex64::new(0.0, 0.0),
            table: HashMap::new(),
        }
    }

    /// Monomial-basis polynomial. The nonvanishing flag starts false; see
    /// [`TargetFunction::certify_nonvanishing`].
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self::centered_polynomial(coeffs, Complex64::new(0.0, 0.0), 1.0)
    }

    pub fn centered_polynomial(coeffs: Vec<Complex64>, center: Complex64, scale: f64) -> Self {
        assert!(scale > 0.0, "polynomial scale must be positive");
        let kind = TargetKind::Polynomial {
            coeffs,
            center,
            scale,
        };
        Self {
            kind,
            nonvanishing: false,
            table: HashMap::new(),
        }
    }

    pub fn tabulated(samples: Vec<(Complex64, Complex64)>) -> Self {
        let table = samples.iter().map(|&(s, v)| (key(s), v)).collect();
        let nonvanishing = samples.iter().all(|(_, v)| v.norm() > 0.0);
        Self {
            kind: TargetKind::Tabulated(samples),
            nonvanishing,
            table,
        }
    }

    pub fn kind(&self) -> &TargetKind {
        &self.kind
    }

    pub fn nonvanishing_flag(&self) -> bool {
        self.nonvanishing
    }

    pub fn value(&self, s: Complex64) -> Result<Complex64, TargetError> {
        Ok(match &self.kind {
            TargetKind::Constant(c) => *c,
            TargetKind::Polynomial {
                coeffs,
                center,
                scale,
            } => horner(coeffs, (s - center) / *scale),
            TargetKind::ExpPolynomial {
                coeffs,
                center,
                scale,
            } => horner(coeffs, (s - center) / *scale).exp(),
            TargetKind::Tabulated(_) => *self
                .table
                .get(&key(s))
                .ok_or(TargetError::NotTabulated(s))?,
        })
    }

    /// Coefficients in the plain basis `Σ a_k s^k` (polynomial kinds only).
    pub fn monomial_coefficients(&self) -> Option<Vec<Complex64>> {
        let (coeffs, center, scale) = match &self.kind {
            TargetKind::Polynomial {
                coeffs,
                center,
                scale,
            }
            | TargetKind::ExpPolynomial {
                coeffs,
                center,
                scale,
            } => (coeffs, *center, *scale),
            TargetKind::Constant(c) => return Some(vec![*c]),
            TargetKind::Tabulated(_) => return None,
        };
        // Horner in the polynomial ring: p(w) with w = (s - c)/scale.
        let lin = [-center / scale, Complex64::new(1.0 / scale, 0.0)];
        let mut out = vec![Complex64::new(0.0, 0.0)];
        for &c in coeffs.iter().rev() {
            let mut next = vec![Complex64::new(0.0, 0.0); out.len() + 1];
            for (i, &a) in out.iter().enumerate() {
                next[i] += a * lin[0];
                next[i + 1] += a * lin[1];
            }
            next[0] += c;
            out = next;
        }
        while out.len() > 1 && out.last() == Some(&Complex64::new(0.0, 0.0)) {
            out.pop();
        }
        Some(out)
    }

    /// Sets the nonvanishing flag from the data: polynomial targets qualify
    /// when no root lies in `k` and no sample of `grid` is zero.
    pub fn certify_nonvanishing(&mut self, k: &CompactSet, grid: &SampleGrid) {
        self.nonvanishing = match &self.kind {
            TargetKind::Constant(c) => c.norm() > 0.0,
            TargetKind::ExpPolynomial { .. } => true,
            TargetKind::Tabulated(samples) => samples.iter().all(|(_, v)| v.norm() > 0.0),
            TargetKind::Polynomial {
                coeffs,
                center,
                scale,
            } => {
                let roots_outside = polynomial_roots(coeffs)
                    .map(|roots| {
                        roots
                            .iter()
                            .all(|&w| !k.contains(center + w * *scale, ROOT_SLACK))
                    })
                    .unwrap_or(false);
                roots_outside
                    && grid
                        .points()
                        .all(|&s| horner(coeffs, (s - center) / *scale).norm() > 0.0)
            }
        };
    }

    /// Roots of polynomial kinds in the `s` variable.
    pub fn roots(&self) -> Option<Vec<Complex64>> {
        match &self.kind {
            TargetKind::Polynomial {
                coeffs,
                center,
                scale,
            } => polynomial_roots(coeffs).map(|r| r.into_iter().map(|w| center + w * *scale).collect()),
            _ => None,
        }
    }
}

/// `exp(p(s))` with `p` in the plain monomial basis. Never vanishes.
pub fn exp_polynomial_target(coeffs: Vec<Complex64>) -> TargetFunction {
    TargetFunction {
        kind: TargetKind::ExpPolynomial {
            coeffs,
            center: Complex64::new(0.0, 0.0),
            scale: 1.0,
        },
        nonvanishing: true,
        table: HashMap::new(),
    }
}

/// Durand–Kerner iteration. `None` for the zero polynomial.
fn polynomial_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let degree = coeffs.iter().rposition(|&c| c != zero)?;
    if degree == 0 {
        return Some(Vec::new());
    }
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs[..=degree].iter().map(|&c| c / lead).collect();
    // Cauchy bound on root moduli sets the initial circle.
    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| radius * seed.powu(k as u32) / seed.norm().powi(k as i32))
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..degree {
            let z = roots[i];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &w) in roots.iter().enumerate() {
                if j != i {
                    denom *= z - w;
                }
            }
            if denom == zero {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = horner(&monic, z) / denom;
            roots[i] = z - step;
            moved = moved.max(step.norm());
        }
        if moved <= 1e-14 * radius {
            break;
        }
    }
    Some(roots)
}
