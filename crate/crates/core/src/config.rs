// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration shared by the experiments and the command line.
//!
//! Defaults reproduce the headline runs: a `ZX` drive for `τ = 0.5` with
//! errors `XX 0.2, YY 0.6, ZZ 0.2, YX 0.4`, and a parity sweep at `ζ = 3`,
//! `τ = 2.5` over 41 points of `δ ∈ [−1, 1]`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouville::{NoiseKind, NoiseSpec};
use crate::magnus::{CoherentErrorSpec, DriveSpec};
use crate::numerics::DEFAULT_QUADRATURE_TOL;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n_qubits: usize,
    pub drive: DriveConfig,
    /// Pauli label → amplitude.
    pub errors: BTreeMap<String, f64>,
    /// Global scale `δ` of the coherent error.
    pub delta: f64,
    pub noise: NoiseConfig,
    pub sweep: SweepConfig,
    pub magnus: MagnusConfig,
    /// Target rotation angle for `calibrate`.
    pub theta: f64,
    /// `Σ_{γ⁺} h²` for `overrotation` and `calibrate`; derived from `errors`
    /// when absent.
    pub sum_h2: Option<f64>,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveConfig {
    pub label: String,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub kind: NoiseKind,
    pub zeta: f64,
    /// Qubits carrying a dissipator; all qubits when absent.
    pub targets: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub tau: f64,
    pub zeta: f64,
    pub kinds: Vec<NoiseKind>,
    pub targets: Option<Vec<usize>>,
    pub deltas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MagnusConfig {
    pub taus: Vec<f64>,
    pub random_sets: usize,
    pub max_amplitude: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Quadrature tolerance (Frobenius norm).
    pub quadrature: f64,
    /// Allowed `‖Ω₂ quadrature − Ω₂ closed form‖_F`.
    pub magnus: f64,
    /// Allowed `‖avg Ω₁‖_F`.
    pub omega1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    /// Command default when absent.
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_qubits: 2,
            drive: DriveConfig::default(),
            errors: [("XX", 0.2), ("YY", 0.6), ("ZZ", 0.2), ("YX", 0.4)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            delta: 1.0,
            noise: NoiseConfig::default(),
            sweep: SweepConfig::default(),
            magnus: MagnusConfig::default(),
            theta: 1.0,
            sum_h2: None,
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
        }
    }
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            label: "ZX".into(),
            tau: 0.5,
        }
    }
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            kind: NoiseKind::None,
            zeta: 0.0,
            targets: None,
        }
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            tau: 2.5,
            zeta: 3.0,
            kinds: vec![NoiseKind::PauliZ, NoiseKind::AmplitudeDamping],
            targets: None,
            deltas: symmetric_grid(1.0, 20),
        }
    }
}

impl Default for MagnusConfig {
    fn default() -> Self {
        Self {
            taus: vec![0.3, 0.5, 1.0],
            random_sets: 5,
            max_amplitude: 0.6,
            seed: 20240801,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadrature: DEFAULT_QUADRATURE_TOL,
            magnus: 1e-6,
            omega1: 1e-9,
        }
    }
}

/// `2 * half_points + 1` evenly spaced points on `[−extent, extent]`, exactly
/// symmetric under negation.
pub fn symmetric_grid(extent: f64, half_points: usize) -> Vec<f64> {
    let half = half_points as i64;
    (-half..=half)
        .map(|k| extent * k as f64 / half.max(1) as f64)
        .collect()
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    fn check_label(&self, label: &str) -> Result<()> {
        if label.chars().count() != self.n_qubits {
            return Err(Error::InvalidSpec(format!(
                "label {label:?} does not have {} characters",
                self.n_qubits
            )));
        }
        Ok(())
    }

    pub fn drive_spec(&self) -> Result<DriveSpec> {
        self.check_label(&self.drive.label)?;
        DriveSpec::from_label(&self.drive.label, self.drive.tau)
    }

    /// Error spec including the global scale `delta`.
    pub fn error_spec(&self) -> Result<CoherentErrorSpec> {
        for label in self.errors.keys() {
            self.check_label(label)?;
        }
        Ok(
            CoherentErrorSpec::from_labels(self.errors.iter().map(|(k, v)| (k.as_str(), *v)))?
                .with_scale(self.delta),
        )
    }

    pub fn noise_spec(&self) -> NoiseSpec {
        resolve_noise(
            self.noise.kind,
            self.noise.zeta,
            &self.noise.targets,
            self.n_qubits,
        )
    }

    /// Explicit `sum_h2`, or the sum over configured errors anticommuting with
    /// the drive.
    pub fn resolved_sum_h2(&self) -> Result<f64> {
        match self.sum_h2 {
            Some(s) => Ok(s),
            None => {
                let drive = self.drive_spec()?;
                self.error_spec()?
                    .anticommuting_sum_h2(drive.single_pauli()?)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::InvalidSpec("n_qubits must be positive".into()));
        }
        let drive = self.drive_spec()?;
        self.error_spec()?.check_against(&drive)?;
        self.noise_spec().validate(self.n_qubits)?;
        for kind in &self.sweep.kinds {
            resolve_noise(*kind, self.sweep.zeta, &self.sweep.targets, self.n_qubits)
                .validate(self.n_qubits)?;
        }
        let t = &self.tolerances;
        if !(t.quadrature > 0.0 && t.magnus > 0.0 && t.omega1 > 0.0) {
            return Err(Error::InvalidSpec("tolerances must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn resolve_noise(
    kind: NoiseKind,
    zeta: f64,
    targets: &Option<Vec<usize>>,
    n_qubits: usize,
) -> NoiseSpec {
    match (kind, targets) {
        (NoiseKind::None, _) => NoiseSpec::none(),
        (_, Some(targets)) => NoiseSpec {
            kind,
            rate: zeta,
            targets: targets.clone(),
        },
        (_, None) => NoiseSpec::on_all_qubits(kind, zeta, n_qubits),
    }
}
