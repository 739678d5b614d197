//! Experiment orchestration: configuration files, CSV artifacts, run
//! manifests, the evaluation cache and the end-to-end scan pipelines.

mod cache;
mod config;
mod csvio;
mod manifest;
mod run;

use std::fmt;

pub use cache::{HurwitzCache, CACHE_ENV};
pub use config::{
    Experiment, RawCompact, RawConfig, RawGroup, RawJoint, RawJointComponent, RawPhi, RawScan,
    RawTarget, ResolvedJoint,
};
pub use csvio::{
    density_csv, joint_scan_csv, plot_csv, read_joint_scan_csv, read_scan_csv, scan_csv,
};
pub use manifest::{sha256_hex, ManifestFile, RunManifest};
pub use run::{
    density_curve_from_records, run_joint_scan, run_scan, Confirmation, JointArtifacts, ScanArtifacts,
};

use crate::density::ScanError;
use crate::joint::JointError;
use crate::matsumoto::MatsumotoError;
use crate::targets::TargetError;
use crate::zeta::ZetaError;

/// Failure classes with stable process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or failed I/O (exit 2).
    Input,
    /// A mathematical precondition fails (exit 3).
    Precondition,
    /// The Matsumoto spec violates a hard structural constraint (exit 4).
    Structure,
    /// A consistency check inside the tool failed (exit 1).
    Internal,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Input => 2,
            ErrorKind::Precondition => 3,
            ErrorKind::Structure => 4,
            ErrorKind::Internal => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabError {
    pub kind: ErrorKind,
    pub message: String,
}

impl LabError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Input, message)
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Precondition, message)
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    /// Prefixes the message with some context.
    pub fn context(mut self, what: impl fmt::Display) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for LabError {}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

impl From<ZetaError> for LabError {
    fn from(e: ZetaError) -> Self {
        let kind = match e {
            ZetaError::InvalidParameter(_) | ZetaError::InvalidSequence(_) | ZetaError::InvalidControls(_) => {
                ErrorKind::Input
            }
            _ => ErrorKind::Precondition,
        };
        Self::new(kind, e.to_string())
    }
}

impl From<MatsumotoError> for LabError {
    fn from(e: MatsumotoError) -> Self {
        let kind = match &e {
            MatsumotoError::Structure(_) => ErrorKind::Structure,
            MatsumotoError::Parse(_) | MatsumotoError::InvalidParameter(_) => ErrorKind::Input,
            MatsumotoError::Zeta(z) => return z.clone().into(),
            _ => ErrorKind::Precondition,
        };
        Self::new(kind, e.to_string())
    }
}

impl From<TargetError> for LabError {
    fn from(e: TargetError) -> Self {
        let kind = match e {
            TargetError::OutsideStrip { .. } | TargetError::IllConditioned(_) => ErrorKind::Precondition,
            _ => ErrorKind::Input,
        };
        Self::new(kind, e.to_string())
    }
}

impl From<ScanError> for LabError {
    fn from(e: ScanError) -> Self {
        let kind = match &e {
            ScanError::InvalidConfig(_) | ScanError::NoRecords => ErrorKind::Input,
            ScanError::Precondition(_) | ScanError::Evaluator { .. } => ErrorKind::Precondition,
            ScanError::MonotonicityViolation { .. } => ErrorKind::Internal,
            ScanError::Target(t) => return t.clone().into(),
            ScanError::Zeta(z) => return z.clone().into(),
        };
        Self::new(kind, e.to_string())
    }
}

impl From<JointError> for LabError {
    fn from(e: JointError) -> Self {
        let kind = match &e {
            JointError::InvalidSpec(_) => ErrorKind::Input,
            JointError::DegenerateMatrix { .. } | JointError::RankPreconditionFailed { .. } => {
                ErrorKind::Precondition
            }
            JointError::Scan(s) => return s.clone().into(),
        };
        Self::new(kind, e.to_string())
    }
}
