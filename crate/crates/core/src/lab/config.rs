//! Experiment configuration (TOML).
//!
//! ```toml
//! output_dir = "out"                 # relative to the config file
//!
//! [phi]
//! preset = "riemann"                 # or: spec = "specs/chi4.toml"
//!
//! [hurwitz]
//! alpha = "1/pi"                     # preset name or number in (0, 1]
//! sequence = [1]
//!
//! [k1]
//! shape = "disk"                     # disk | rectangle | segment
//! center = 0.75
//! radius = 0.05
//!
//! [k2]
//! shape = "rectangle"
//! corner1 = "0.6-0.1i"
//! corner2 = "0.9+0.1i"
//!
//! [f1]
//! kind = "constant"                  # constant | polynomial | exp-polynomial | self
//! value = 1
//!
//! [f2]
//! kind = "self"                      # values of the function itself at s + i tau
//! tau = 0.0
//!
//! [scan]
//! T = 100.0
//! delta = 0.05
//! refine_depth = 20
//! epsilon = [0.1, 0.2, 0.5]
//! mesh = 0.01
//!
//! [joint]                            # used by joint-scan
//! rank_tol = 1e-10
//! [[joint.groups]]
//! alpha = "1/pi"
//! sequences = [[1], [1, -1]]
//! [[joint.components]]               # one per sequence, in order
//! k = { shape = "disk", center = 0.75, radius = 0.05 }
//! f = { kind = "constant", value = 0 }
//! ```

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{sha256_hex, LabError};
use crate::complex::ScalarLiteral;
use crate::density::{shifted_values, ScanConfig, DEFAULT_DELTA, DEFAULT_MESH, DEFAULT_REFINE_DEPTH};
use crate::joint::{JointGroup, JointSpec, DEFAULT_RANK_TOL};
use crate::matsumoto::{sigma_star_diagnostic, MatsumotoSpec, StripFunction};
use crate::targets::{exp_polynomial_target, sample_points, CompactSet, Shape, TargetFunction};
use crate::zeta::{EvalControls, HurwitzParameter, PeriodicHurwitz, PeriodicSequence};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPhi {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHurwitz {
    pub alpha: ScalarLiteral,
    pub sequence: Vec<ScalarLiteral>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawCompact {
    Disk {
        center: ScalarLiteral,
        radius: f64,
    },
    Rectangle {
        corner1: ScalarLiteral,
        corner2: ScalarLiteral,
    },
    Segment {
        t: f64,
        sigma_min: f64,
        sigma_max: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawTarget {
    Constant {
        value: ScalarLiteral,
    },
    /// `Σ c_k ((s - center)/scale)^k`.
    Polynomial {
        coefficients: Vec<ScalarLiteral>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<ScalarLiteral>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
    },
    ExpPolynomial {
        coefficients: Vec<ScalarLiteral>,
    },
    /// The scanned function's own values at `s + iτ`.
    #[serde(rename = "self")]
    SelfShift {
        #[serde(default)]
        tau: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScan {
    #[serde(rename = "T")]
    pub t_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine_depth: Option<u32>,
    pub epsilon: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroup {
    pub alpha: ScalarLiteral,
    pub sequences: Vec<Vec<ScalarLiteral>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawJointComponent {
    pub k: RawCompact,
    pub f: RawTarget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawJoint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
    pub groups: Vec<RawGroup>,
    pub components: Vec<RawJointComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    pub phi: RawPhi,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hurwitz: Option<RawHurwitz>,
    pub k1: RawCompact,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<RawCompact>,
    pub f1: RawTarget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f2: Option<RawTarget>,
    pub scan: RawScan,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint: Option<RawJoint>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, LabError> {
        toml::from_str(text).map_err(|e| LabError::input(format!("config: {}", e.message())))
    }

    /// Canonical text: independent of comments, whitespace and key order.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn digest(&self) -> String {
        sha256_hex(self.canonical().as_bytes())
    }
}

fn scalar(x: &ScalarLiteral, what: &str) -> Result<Complex64, LabError> {
    x.to_complex().map_err(|e| LabError::input(format!("{what}: {e}")))
}

fn scalars(xs: &[ScalarLiteral], what: &str) -> Result<Vec<Complex64>, LabError> {
    xs.iter().map(|x| scalar(x, what)).collect()
}

fn alpha_param(x: &ScalarLiteral) -> Result<HurwitzParameter, LabError> {
    match x {
        ScalarLiteral::Real(a) => Ok(HurwitzParameter::new(*a)?),
        ScalarLiteral::Text(t) => Ok(HurwitzParameter::parse(t)?),
    }
}

fn sequence(xs: &[ScalarLiteral]) -> Result<PeriodicSequence, LabError> {
    Ok(PeriodicSequence::new(scalars(xs, "sequence")?)?)
}

fn compact(raw: &RawCompact, a: f64, b: f64, name: &str, strip: &str) -> Result<CompactSet, LabError> {
    let shape = match raw {
        RawCompact::Disk { center, radius } => Shape::Disk {
            center: scalar(center, name)?,
            radius: *radius,
        },
        RawCompact::Rectangle { corner1, corner2 } => Shape::Rectangle {
            corner1: scalar(corner1, name)?,
            corner2: scalar(corner2, name)?,
        },
        RawCompact::Segment {
            t,
            sigma_min,
            sigma_max,
        } => Shape::Segment {
            t: *t,
            sigma_min: *sigma_min,
            sigma_max: *sigma_max,
        },
    };
    CompactSet::new(shape, a, b)
        .map_err(|e| LabError::from(e).context(format!("{name} must lie in {strip}")))
}

/// The function a target of kind `self` copies.
struct Source<'a> {
    series: &'a PeriodicHurwitz,
    shift: f64,
}

struct Resolver {
    meshes: [f64; 2],
    ctl: EvalControls,
    tau_max: f64,
}

impl Resolver {
    fn target(&self, raw: &RawTarget, k: &CompactSet, source: Source, name: &str) -> Result<TargetFunction, LabError> {
        let grid = sample_points(k, self.meshes[0])?;
        let mut target = match raw {
            RawTarget::Constant { value } => TargetFunction::constant(scalar(value, name)?),
            RawTarget::Polynomial {
                coefficients,
                center,
                scale,
            } => {
                let center = match center {
                    Some(c) => scalar(c, name)?,
                    None => Complex64::new(0.0, 0.0),
                };
                let scale = scale.unwrap_or(1.0);
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(LabError::input(format!("{name}: scale {scale} must be positive")));
                }
                TargetFunction::centered_polynomial(scalars(coefficients, name)?, center, scale)
            }
            RawTarget::ExpPolynomial { coefficients } => exp_polynomial_target(scalars(coefficients, name)?),
            RawTarget::SelfShift { tau } => {
                if !tau.is_finite() {
                    return Err(LabError::input(format!("{name}: tau must be finite")));
                }
                let mut samples = Vec::new();
                for mesh in self.meshes {
                    let g = sample_points(k, mesh)?;
                    samples.extend(shifted_values(source.series, source.shift, &g, self.ctl, self.tau_max, *tau)?);
                }
                TargetFunction::tabulated(samples)
            }
        };
        target.certify_nonvanishing(k, &grid);
        Ok(target)
    }
}

/// Joint block after validation.
#[derive(Debug, Clone)]
pub struct ResolvedJoint {
    pub spec: JointSpec,
    pub k2: Vec<CompactSet>,
    pub f2: Vec<TargetFunction>,
    pub rank_tol: f64,
}

/// A fully validated experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub raw: RawConfig,
    pub output_dir: PathBuf,
    pub spec: MatsumotoSpec,
    pub phi: StripFunction,
    pub sigma_star: f64,
    /// `σ*` came from the empirical diagnostic rather than the spec.
    pub sigma_star_heuristic: bool,
    pub zeta_b: Option<PeriodicHurwitz>,
    pub k1: CompactSet,
    pub k2: Option<CompactSet>,
    pub f1: TargetFunction,
    pub f2: Option<TargetFunction>,
    pub scan: ScanConfig,
    pub mesh: f64,
    pub joint: Option<ResolvedJoint>,
}

/// Grid for the empirical `σ*` fallback.
const SIGMA_STAR_GRID: [f64; 9] = [0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95];
const SIGMA_STAR_T: f64 = 200.0;

impl Experiment {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_raw(RawConfig::parse(&text)?, base)
    }

    /// Resolves and validates every block. Relative paths are taken from
    /// `base_dir`.
    pub fn from_raw(raw: RawConfig, base_dir: &Path) -> Result<Self, LabError> {
        let spec = match (&raw.phi.preset, &raw.phi.spec) {
            (Some(name), None) => MatsumotoSpec::preset(name)
                .ok_or_else(|| LabError::input(format!("unknown phi preset {name:?}")))?,
            (None, Some(p)) => {
                let path = base_dir.join(p);
                if !path.is_file() {
                    return Err(LabError::input(format!("spec file {} does not exist", path.display())));
                }
                MatsumotoSpec::load(&path)?
            }
            _ => return Err(LabError::input("[phi] needs exactly one of preset, spec")),
        };
        let phi = spec
            .strip_function()
            .map_err(|_| {
                LabError::precondition(format!(
                    "spec '{}' has no strip evaluator (strategy euler-product-only)",
                    spec.name()
                ))
            })?
            .clone();
        let (sigma_star, sigma_star_heuristic) = match spec.declared_sigma_star() {
            Some(s) => (s, false),
            None => {
                let est = sigma_star_diagnostic(&spec, &SIGMA_STAR_GRID, SIGMA_STAR_T)?;
                let s = est.sigma.ok_or_else(|| {
                    LabError::precondition("sigma* is not declared and the empirical diagnostic found none")
                })?;
                log::warn!("sigma* = {s} is a HEURISTIC estimate from finite-T mean squares");
                (s, true)
            }
        };

        let rs = &raw.scan;
        let scan = ScanConfig::new(
            rs.t_max,
            rs.delta.unwrap_or(DEFAULT_DELTA),
            rs.refine_depth.unwrap_or(DEFAULT_REFINE_DEPTH),
            rs.epsilon.clone(),
        )?
        .with_start(rs.start.unwrap_or(0.0))?;
        let mesh = rs.mesh.unwrap_or(DEFAULT_MESH);
        if !(mesh > 0.0 && mesh.is_finite()) {
            return Err(LabError::input(format!("mesh {mesh} must be positive")));
        }
        let resolver = Resolver {
            meshes: [mesh, mesh / 4.0],
            ctl: EvalControls::with_tol(scan.scan_tolerance())?,
            tau_max: scan.start + scan.t_max,
        };

        let k1 = compact(&raw.k1, sigma_star, 1.0, "K1", &format!("D(sigma*, 1) = D({sigma_star}, 1)"))?;
        let phi_source = || Source {
            series: phi.series(),
            shift: phi.shift(),
        };
        let f1 = resolver.target(&raw.f1, &k1, phi_source(), "f1")?;
        if !f1.nonvanishing_flag() {
            return Err(LabError::precondition(
                "f1 must be nonvanishing on K1 (H0^c(K1)): it has a zero in K1",
            ));
        }

        let zeta_b = match &raw.hurwitz {
            Some(h) => Some(PeriodicHurwitz::new(alpha_param(&h.alpha)?, sequence(&h.sequence)?)),
            None => None,
        };
        let k2 = match &raw.k2 {
            Some(k) => Some(compact(k, 0.5, 1.0, "K2", "D(1/2, 1)")?),
            None => None,
        };
        let f2 = match (&raw.f2, &k2, &zeta_b) {
            (Some(f), Some(k), Some(z)) => Some(resolver.target(f, k, Source { series: z, shift: 0.0 }, "f2")?),
            (None, None, None) => None,
            _ => return Err(LabError::input("[hurwitz], [k2] and [f2] must be given together")),
        };

        let joint = match &raw.joint {
            Some(j) => Some(resolve_joint(j, &resolver)?),
            None => None,
        };
        if zeta_b.is_none() && joint.is_none() {
            return Err(LabError::input("config needs a [hurwitz] block or a [joint] block"));
        }
        let output_dir = base_dir.join(raw.output_dir.as_deref().unwrap_or("."));
        Ok(Self {
            raw,
            output_dir,
            spec,
            phi,
            sigma_star,
            sigma_star_heuristic,
            zeta_b,
            k1,
            k2,
            f1,
            f2,
            scan,
            mesh,
            joint,
        })
    }

    pub fn digest(&self) -> String {
        self.raw.digest()
    }
}

fn resolve_joint(raw: &RawJoint, resolver: &Resolver) -> Result<ResolvedJoint, LabError> {
    let groups = raw
        .groups
        .iter()
        .map(|g| {
            Ok(JointGroup {
                alpha: alpha_param(&g.alpha)?,
                sequences: g.sequences.iter().map(|s| sequence(s)).collect::<Result<_, LabError>>()?,
            })
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    let spec = JointSpec::new(groups)?;
    let rank_tol = raw.rank_tol.unwrap_or(DEFAULT_RANK_TOL);
    spec.check_ranks(rank_tol)?;
    let labels = spec.labels();
    if raw.components.len() != labels.len() {
        return Err(LabError::input(format!(
            "[joint] lists {} components for lambda = {} sequences",
            raw.components.len(),
            labels.len()
        )));
    }
    let series: Vec<PeriodicHurwitz> = spec
        .groups()
        .iter()
        .flat_map(|g| g.sequences.iter().map(|b| PeriodicHurwitz::new(g.alpha.clone(), b.clone())))
        .collect();
    let mut k2 = Vec::new();
    let mut f2 = Vec::new();
    for ((c, (j, l)), z) in raw.components.iter().zip(labels).zip(&series) {
        let name = format!("K2_{j}_{l}");
        let k = compact(&c.k, 0.5, 1.0, &name, "D(1/2, 1)")?;
        f2.push(resolver.target(&c.f, &k, Source { series: z, shift: 0.0 }, &format!("f2_{j}_{l}"))?);
        k2.push(k);
    }
    Ok(ResolvedJoint { spec, k2, f2, rank_tol })
}
