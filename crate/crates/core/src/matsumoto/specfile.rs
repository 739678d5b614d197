//! Plain-text (TOML) spec files.
//!
//! ```toml
//! name = "chi4"
//! alpha0 = 0.0
//! beta0 = 0.0
//! c1 = 1.0
//! sigma_star = 0.5          # optional
//! poles = ["1"]             # optional; only a single pole at 1 is supported
//!
//! [rule]
//! kind = "dirichlet-character"   # riemann | dirichlet-character | table
//! modulus = 4
//! values = [0, 1, 0, -1]         # numbers or complex literals such as "0.5-2i"
//!
//! [strategy]                     # optional
//! kind = "hurwitz-combination"   # euler-product-only | hurwitz-combination
//! period = 4
//! coefficients = [0, 1, 0, -1]
//! ```
//!
//! A table rule lists factors as
//!
//! ```toml
//! [rule]
//! kind = "table"
//! [[rule.factors]]
//! m = 1
//! p = 2
//! terms = [[2, 1.0, 0.0]]        # (f, Re a, Im a) per j
//! ```
//!
//! Without a `[strategy]` block, closed-form rules get the Hurwitz
//! combination of their own coefficients and tables get the Euler product
//! only.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{EulerFactor, FactorRule, MatsumotoError, MatsumotoSpec, StripStrategy};
use crate::complex::ScalarLiteral;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFactor {
    pub m: usize,
    pub p: u64,
    pub terms: Vec<(u32, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawRule {
    Riemann,
    DirichletCharacter {
        modulus: usize,
        values: Vec<ScalarLiteral>,
    },
    Table {
        #[serde(default)]
        factors: Vec<RawFactor>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawStrategy {
    EulerProductOnly,
    HurwitzCombination {
        period: usize,
        coefficients: Vec<ScalarLiteral>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub name: String,
    #[serde(default)]
    pub alpha0: f64,
    #[serde(default)]
    pub beta0: f64,
    #[serde(default = "default_c1")]
    pub c1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<ScalarLiteral>>,
    pub rule: RawRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<RawStrategy>,
}

fn default_c1() -> f64 {
    1.0
}

fn scalars(list: &[ScalarLiteral]) -> Result<Vec<Complex64>, MatsumotoError> {
    list.iter()
        .map(|x| x.to_complex().map_err(|e| MatsumotoError::Parse(e.to_string())))
        .collect()
}

impl RawSpec {
    pub fn parse(text: &str) -> Result<Self, MatsumotoError> {
        toml::from_str(text).map_err(|e| MatsumotoError::Parse(e.message().to_string()))
    }

    pub fn into_spec(self) -> Result<MatsumotoSpec, MatsumotoError> {
        if let Some(poles) = &self.poles {
            let poles = scalars(poles)?;
            if poles.len() > 1 {
                return Err(MatsumotoError::Structure(format!(
                    "{} poles declared; only a single pole at s = 1 is supported",
                    poles.len()
                )));
            }
            if let Some(p) = poles.first() {
                if *p != Complex64::new(1.0, 0.0) {
                    return Err(MatsumotoError::Structure(format!(
                        "pole at s = {p}; only a pole at s = 1 is supported"
                    )));
                }
            }
        }
        let rule = match &self.rule {
            RawRule::Riemann => FactorRule::Riemann,
            RawRule::DirichletCharacter { modulus, values } => FactorRule::DirichletCharacter {
                modulus: *modulus,
                values: scalars(values)?,
            },
            RawRule::Table { factors } => {
                let mut table = BTreeMap::new();
                for f in factors {
                    let factor = EulerFactor {
                        prime_index: f.m,
                        prime: f.p,
                        terms: f
                            .terms
                            .iter()
                            .map(|&(e, re, im)| (e, Complex64::new(re, im)))
                            .collect(),
                    };
                    if table.insert(f.m, factor).is_some() {
                        return Err(MatsumotoError::Structure(format!(
                            "factor m = {} listed twice",
                            f.m
                        )));
                    }
                }
                FactorRule::Table(table)
            }
        };
        let strategy = match &self.strategy {
            Some(RawStrategy::EulerProductOnly) => StripStrategy::EulerProductOnly,
            Some(RawStrategy::HurwitzCombination {
                period,
                coefficients,
            }) => StripStrategy::HurwitzCombination {
                period: *period,
                coefficients: scalars(coefficients)?,
            },
            None => match &rule {
                FactorRule::Riemann => StripStrategy::HurwitzCombination {
                    period: 1,
                    coefficients: vec![Complex64::new(1.0, 0.0)],
                },
                FactorRule::DirichletCharacter { modulus, values } => {
                    StripStrategy::HurwitzCombination {
                        period: *modulus,
                        coefficients: values.clone(),
                    }
                }
                FactorRule::Table(_) => StripStrategy::EulerProductOnly,
            },
        };
        MatsumotoSpec::new(
            self.name,
            rule,
            self.alpha0,
            self.beta0,
            self.c1,
            strategy,
            self.sigma_star,
        )
    }

    pub fn from_spec(spec: &MatsumotoSpec) -> Self {
        let to_raw = |v: &[Complex64]| v.iter().map(|&z| ScalarLiteral::from_complex(z)).collect();
        let rule = match spec.rule() {
            FactorRule::Riemann => RawRule::Riemann,
            FactorRule::DirichletCharacter { modulus, values } => RawRule::DirichletCharacter {
                modulus: *modulus,
                values: to_raw(values),
            },
            FactorRule::Table(table) => RawRule::Table {
                factors: table
                    .values()
                    .map(|f| RawFactor {
                        m: f.prime_index,
                        p: f.prime,
                        terms: f.terms.iter().map(|&(e, a)| (e, a.re, a.im)).collect(),
                    })
                    .collect(),
            },
        };
        let strategy = match spec.strategy() {
            StripStrategy::EulerProductOnly => RawStrategy::EulerProductOnly,
            StripStrategy::HurwitzCombination {
                period,
                coefficients,
            } => RawStrategy::HurwitzCombination {
                period: *period,
                coefficients: to_raw(coefficients),
            },
        };
        RawSpec {
            name: spec.name().to_string(),
            alpha0: spec.alpha0(),
            beta0: spec.beta0(),
            c1: spec.c1(),
            sigma_star: spec.declared_sigma_star(),
            poles: None,
            rule,
            strategy: Some(strategy),
        }
    }
}

impl MatsumotoSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, MatsumotoError> {
        RawSpec::parse(text)?.into_spec()
    }

    pub fn load(path: &Path) -> Result<Self, MatsumotoError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MatsumotoError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&RawSpec::from_spec(self)).expect("spec serializes")
    }
}

impl fmt::Display for MatsumotoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHI4: &str = r#"
name = "chi4"
alpha0 = 0
beta0 = 0.0
c1 = 1.0
sigma_star = 0.5
poles = []

[rule]
kind = "dirichlet-character"
modulus = 4
values = [0, 1, "0", "-1"]
"#;

    #[test]
    fn character_file_matches_preset() {
        let spec = MatsumotoSpec::from_toml_str(CHI4).unwrap();
        let preset = MatsumotoSpec::preset("dirichlet-mod4").unwrap();
        assert_eq!(spec.rule(), preset.rule());
        assert_eq!(spec.strategy(), preset.strategy());
    }

    #[test]
    fn round_trip() {
        for name in ["riemann", "dirichlet-mod4", "zero"] {
            let spec = MatsumotoSpec::preset(name).unwrap();
            let again = MatsumotoSpec::from_toml_str(&spec.to_toml_string()).unwrap();
            assert_eq!(spec, again);
        }
        let table = r#"
name = "t"
[rule]
kind = "table"
[[rule.factors]]
m = 1
p = 2
terms = [[2, 1.0, 0.0], [1, 0.0, 0.5]]
"#;
        let spec = MatsumotoSpec::from_toml_str(table).unwrap();
        let again = MatsumotoSpec::from_toml_str(&spec.to_toml_string()).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn multiple_poles_are_structural() {
        let text = format!("{}\n", CHI4.replace("poles = []", "poles = [\"1\", \"0.5+2i\"]"));
        assert!(matches!(
            MatsumotoSpec::from_toml_str(&text),
            Err(MatsumotoError::Structure(_))
        ));
        let text = CHI4.replace("poles = []", "poles = [\"2\"]");
        assert!(matches!(
            MatsumotoSpec::from_toml_str(&text),
            Err(MatsumotoError::Structure(_))
        ));
    }

    #[test]
    fn wrong_prime_is_structural() {
        let text = r#"
name = "bad"
[rule]
kind = "table"
[[rule.factors]]
m = 2
p = 5
terms = [[1, 1.0, 0.0]]
"#;
        assert!(matches!(
            MatsumotoSpec::from_toml_str(text),
            Err(MatsumotoError::Structure(_))
        ));
    }

    #[test]
    fn inconsistent_strategy_is_structural() {
        let text = r#"
name = "bad"
[rule]
kind = "riemann"
[strategy]
kind = "hurwitz-combination"
period = 2
coefficients = [1, -1]
"#;
        assert!(matches!(
            MatsumotoSpec::from_toml_str(text),
            Err(MatsumotoError::Structure(_))
        ));
    }

    #[test]
    fn parse_errors() {
        for text in ["", "name = 3", "name = \"x\"\n[rule]\nkind = \"cusp\"", "name=\"x\"\nbogus=1\n[rule]\nkind=\"riemann\""] {
            assert!(matches!(MatsumotoSpec::from_toml_str(text), Err(MatsumotoError::Parse(_))), "{text}");
        }
    }
}
