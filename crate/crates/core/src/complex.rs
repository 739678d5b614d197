//! Complex scalars, literal parsing and round-trip safe formatting.

use std::fmt;

pub use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number `s = σ + it`. Values leaving the public API are finite.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseComplexError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed complex literal {:?}: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseComplexError {}

/// Parses literals such as `2`, `-1.5e-3`, `3i`, `-i`, `0.8+5i`, `2-3.5i`.
///
/// Whitespace is ignored and `j` is accepted in place of `i`. Non-finite
/// components are rejected.
pub fn parse_complex(input: &str) -> Result<Complex64, ParseComplexError> {
    let err = |reason| ParseComplexError {
        input: input.to_string(),
        reason,
    };
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty"));
    }
    let z = match compact.strip_suffix(['i', 'j']) {
        None => Complex64::new(parse_real(&compact).ok_or_else(|| err("bad real part"))?, 0.0),
        Some(body) => {
            let bytes = body.as_bytes();
            // Split at the last sign that is not a leading sign or an exponent sign.
            let split = (1..bytes.len()).rev().find(|&i| {
                (bytes[i] == b'+' || bytes[i] == b'-')
                    && !matches!(bytes[i - 1], b'e' | b'E')
            });
            let (re_str, im_str) = match split {
                Some(i) => (&body[..i], &body[i..]),
                None => ("", body),
            };
            let re = if re_str.is_empty() {
                0.0
            } else {
                parse_real(re_str).ok_or_else(|| err("bad real part"))?
            };
            let im = match im_str {
                "" | "+" => 1.0,
                "-" => -1.0,
                other => parse_real(other).ok_or_else(|| err("bad imaginary part"))?,
            };
            Complex64::new(re, im)
        }
    };
    if is_finite(z) {
        Ok(z)
    } else {
        Err(err("non-finite component"))
    }
}

fn parse_real(s: &str) -> Option<f64> {
    // `f64::from_str` accepts "inf" and "nan"; only plain decimals are allowed here.
    let ok = s
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'));
    if !ok {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// 17 significant digits, round-trip safe.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Formats as `re+imi` / `re-imi` with 17 significant digits per component.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", format_real(z.re), sign, format_real(z.im.abs()))
}

/// A number or a complex literal string, as written in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarLiteral {
    Real(f64),
    Text(String),
}

impl ScalarLiteral {
    pub fn to_complex(&self) -> Result<Complex64, ParseComplexError> {
        match self {
            ScalarLiteral::Real(x) if x.is_finite() => Ok(Complex64::new(*x, 0.0)),
            ScalarLiteral::Real(x) => Err(ParseComplexError {
                input: x.to_string(),
                reason: "non-finite component",
            }),
            ScalarLiteral::Text(s) => parse_complex(s),
        }
    }

    /// Real numbers stay numbers; anything else becomes a literal string.
    pub fn from_complex(z: Complex64) -> Self {
        if z.im == 0.0 {
            ScalarLiteral::Real(z.re)
        } else {
            ScalarLiteral::Text(format_complex(z))
        }
    }
}
