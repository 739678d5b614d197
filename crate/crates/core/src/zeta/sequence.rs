use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ZetaError;
use crate::complex::is_finite;

/// One period `b_0, …, b_{k-1}` of a periodic coefficient sequence, with
/// `k` the minimal period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSequence {
    values: Vec<Complex64>,
}

impl PeriodicSequence {
    /// Rejects empty input, non-finite entries and non-minimal periods.
    pub fn new(values: Vec<Complex64>) -> Result<Self, ZetaError> {
        check_entries(&values)?;
        if let Some(d) = smallest_period(&values) {
            if d < values.len() {
                return Err(ZetaError::InvalidSequence(format!(
                    "period {} is not minimal: the values repeat with period {d}",
                    values.len()
                )));
            }
        }
        Ok(Self { values })
    }

    /// Like [`PeriodicSequence::new`], but truncates to the minimal period
    /// instead of rejecting.
    pub fn reduced(mut values: Vec<Complex64>) -> Result<Self, ZetaError> {
        check_entries(&values)?;
        let d = smallest_period(&values).unwrap_or(values.len());
        values.truncate(d);
        Ok(Self { values })
    }

    pub fn constant(value: Complex64) -> Self {
        Self {
            values: vec![value],
        }
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `b_m` for any `m >= 0`.
    pub fn at(&self, m: usize) -> Complex64 {
        self.values[m % self.values.len()]
    }

    pub fn scaled(&self, c: Complex64) -> Result<Self, ZetaError> {
        Self::new(self.values.iter().map(|b| b * c).collect())
    }

    /// `(1/k) Σ b_m`, the residue of `ζ(s, α; B)` at `s = 1`.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub(crate) fn abs_sum(&self) -> f64 {
        self.values.iter().map(|b| b.norm()).sum()
    }
}

fn check_entries(values: &[Complex64]) -> Result<(), ZetaError> {
    if values.is_empty() {
        return Err(ZetaError::InvalidSequence("empty period".into()));
    }
    if !values.iter().all(|b| is_finite(*b)) {
        return Err(ZetaError::InvalidSequence("non-finite entry".into()));
    }
    Ok(())
}

/// Smallest `d` dividing `k` with `b_i = b_{i mod d}`.
fn smallest_period(values: &[Complex64]) -> Option<usize> {
    let k = values.len();
    (1..=k)
        .filter(|d| k % d == 0)
        .find(|&d| (d..k).all(|i| values[i] == values[i % d]))
}

/// Where a Hurwitz parameter value came from. Transcendence cannot be checked
/// numerically, so presets only carry the conventional label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    PresetTranscendental(String),
    UserSupplied,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HurwitzParameter {
    alpha: f64,
    provenance: Provenance,
}

impl HurwitzParameter {
    pub fn new(alpha: f64) -> Result<Self, ZetaError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(ZetaError::InvalidParameter(alpha));
        }
        Ok(Self {
            alpha,
            provenance: Provenance::UserSupplied,
        })
    }

    /// Presets `1/pi`, `1/e` and `log2`.
    pub fn preset(name: &str) -> Option<Self> {
        let alpha = match name {
            "1/pi" => std::f64::consts::FRAC_1_PI,
            "1/e" => (-1.0f64).exp(),
            "log2" => std::f64::consts::LN_2,
            _ => return None,
        };
        Some(Self {
            alpha,
            provenance: Provenance::PresetTranscendental(name.to_string()),
        })
    }

    /// Preset name or a decimal number.
    pub fn parse(text: &str) -> Result<Self, ZetaError> {
        let text = text.trim();
        if let Some(p) = Self::preset(text) {
            return Ok(p);
        }
        let alpha: f64 = text
            .parse()
            .map_err(|_| ZetaError::InvalidSequence(format!("bad Hurwitz parameter {text:?}")))?;
        Self::new(alpha)
    }

    pub fn value(&self) -> f64 {
        self.alpha
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_preset(&self) -> bool {
        matches!(self.provenance, Provenance::PresetTranscendental(_))
    }
}

impl fmt::Display for HurwitzParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.provenance {
            Provenance::PresetTranscendental(name) => write!(f, "{name}"),
            Provenance::UserSupplied => write!(f, "{}", self.alpha),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn minimal_period_is_enforced() {
        assert!(PeriodicSequence::new(vec![c(1.0), c(-1.0)]).is_ok());
        assert!(PeriodicSequence::new(vec![c(1.0), c(1.0)]).is_err());
        assert!(PeriodicSequence::new(vec![c(1.0), c(2.0), c(1.0), c(2.0)]).is_err());
        assert!(PeriodicSequence::new(vec![c(1.0), c(2.0), c(1.0), c(3.0)]).is_ok());
        assert!(PeriodicSequence::new(vec![]).is_err());
        let r = PeriodicSequence::reduced(vec![c(1.0), c(2.0), c(1.0), c(2.0)]).unwrap();
        assert_eq!(r.period(), 2);
    }

    #[test]
    fn parameter_range() {
        assert!(HurwitzParameter::new(0.0).is_err());
        assert!(HurwitzParameter::new(1.0).is_ok());
        assert!(HurwitzParameter::new(1.2).is_err());
        assert!(HurwitzParameter::new(f64::NAN).is_err());
        let p = HurwitzParameter::parse("1/pi").unwrap();
        assert!(p.is_preset());
        assert!(!HurwitzParameter::parse("0.25").unwrap().is_preset());
    }

    #[test]
    fn residue_means() {
        let b = PeriodicSequence::new(vec![c(3.0), Complex64::new(1.0, 1.0), Complex64::new(2.0, -1.0)])
            .unwrap();
        assert_eq!(b.mean(), c(2.0));
    }
}
