// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

//! Scripted reproductions: the effective-Hamiltonian table, the noise
//! parity sweep and the Magnus cross-check. Every report embeds the resolved
//! configuration it was produced from.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{resolve_noise, RunConfig};
use crate::error::{Error, Result};
use crate::liouville::NoiseKind;
use crate::magnus::{self, CoherentErrorSpec, DriveSpec};
use crate::numerics;
use crate::pauli::{self, PauliString};
use crate::pst;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Report {
    pub config: RunConfig,
    pub drive: String,
    /// Effective coefficients of the untwirled gate.
    pub no_pst: BTreeMap<String, f64>,
    /// Effective coefficients after pseudo twirling.
    pub pst: BTreeMap<String, f64>,
    /// `Σ (δh)²` over errors anticommuting with the drive.
    pub sum_h2_anticommuting: f64,
    /// Drive coefficient predicted by the over-rotation law.
    pub theoretical_zx: f64,
    /// `100 (1 − |numeric − theory| / numeric)` for the drive coefficient.
    pub agreement_pct: f64,
    pub pst_remainder_norm: f64,
}

pub fn run_table1(config: &RunConfig) -> Result<Table1Report> {
    config.validate()?;
    let drive = config.drive_spec()?;
    let beta = drive.single_pauli()?.clone();
    let err = config.error_spec()?;
    let noise = config.noise_spec();
    let tau = drive.tau();

    let raw = pst::effective_generator(&pst::untwirled_channel(&drive, &err, &noise)?, tau)?;
    let twirled = pst::effective_generator(&pst::pst_channel(&drive, &err, &noise)?, tau)?;

    let mut labels: Vec<&PauliString> = err.terms().iter().map(|(p, _)| p).collect();
    labels.push(&beta);
    let row = |eff: &pst::EffectiveGenerator| -> BTreeMap<String, f64> {
        labels.iter().map(|p| (p.label(), eff.coeff(p))).collect()
    };

    let sum_h2 = err.anticommuting_sum_h2(&beta)?;
    let theoretical = magnus::over_rotation_factor(tau, sum_h2)?;
    let numeric = twirled.coeff(&beta);
    Ok(Table1Report {
        config: config.clone(),
        drive: beta.label(),
        no_pst: row(&raw),
        pst: row(&twirled),
        sum_h2_anticommuting: sum_h2,
        theoretical_zx: theoretical,
        agreement_pct: 100.0 * (1.0 - (numeric - theoretical).abs() / numeric),
        pst_remainder_norm: twirled.remainder_norm(),
    })
}

impl Table1Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,no_pst,pst\n");
        for (label, v) in &self.no_pst {
            let _ = writeln!(out, "{label},{v:?},{:?}", self.pst[label]);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParitySweepRow {
    pub delta: f64,
    /// `‖K_pst(δ) − U₀‖_op`
    pub error: f64,
    /// `½ [E(δ) + E(−δ)]`
    pub symmetrized: f64,
    pub noise_kind: NoiseKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParitySweepReport {
    pub config: RunConfig,
    pub rows: Vec<ParitySweepRow>,
    /// `max_δ |E(δ) − E(−δ)|` per noise kind.
    pub max_asymmetry: BTreeMap<NoiseKind, f64>,
}

/// Rows ordered by noise kind (as configured) and then by ascending `δ`.
pub fn run_parity_sweep(config: &RunConfig) -> Result<Vec<ParitySweepRow>> {
    config.validate()?;
    let drive = DriveSpec::from_label(&config.drive.label, config.sweep.tau)?;
    let base = config.error_spec()?.with_scale(1.0);

    let mut deltas = config.sweep.deltas.clone();
    if deltas.iter().any(|d| !d.is_finite()) {
        return Err(Error::InvalidSpec(
            "sweep grid contains non-finite values".into(),
        ));
    }
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();
    let mirror: Vec<usize> = deltas
        .iter()
        .map(|d| {
            deltas
                .iter()
                .position(|e| (e + d).abs() <= 1e-12 * d.abs().max(1.0))
                .ok_or_else(|| {
                    Error::InvalidSpec(format!("sweep grid contains {d} but not its negative"))
                })
        })
        .collect::<Result<_>>()?;

    let ideal = pst::ideal_channel(&drive)?;
    let mut rows = Vec::with_capacity(deltas.len() * config.sweep.kinds.len());
    for &kind in &config.sweep.kinds {
        let noise = resolve_noise(
            kind,
            config.sweep.zeta,
            &config.sweep.targets,
            config.n_qubits,
        );
        let errors = deltas
            .par_iter()
            .map(|&delta| {
                let k = pst::pst_channel(&drive, &base.with_scale(delta), &noise)?;
                numerics::op_norm(&(k.matrix() - ideal.matrix()))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.extend(deltas.iter().enumerate().map(|(i, &delta)| ParitySweepRow {
            delta,
            error: errors[i],
            symmetrized: 0.5 * (errors[i] + errors[mirror[i]]),
            noise_kind: kind,
        }));
    }
    Ok(rows)
}

/// `max_δ |E(δ) − E(−δ)|` over the rows of one noise kind.
pub fn max_asymmetry(rows: &[ParitySweepRow], kind: NoiseKind) -> f64 {
    rows.iter()
        .filter(|r| r.noise_kind == kind)
        .map(|r| 2.0 * (r.error - r.symmetrized).abs())
        .fold(0.0, f64::max)
}

pub fn parity_sweep_report(config: &RunConfig) -> Result<ParitySweepReport> {
    let rows = run_parity_sweep(config)?;
    let max_asymmetry = config
        .sweep
        .kinds
        .iter()
        .map(|&k| (k, max_asymmetry(&rows, k)))
        .collect();
    Ok(ParitySweepReport {
        config: config.clone(),
        rows,
        max_asymmetry,
    })
}

pub fn sweep_to_csv(rows: &[ParitySweepRow]) -> String {
    let mut out = String::from("delta,error,symmetrized,noise_kind\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:?},{:?},{:?},{}",
            r.delta, r.error, r.symmetrized, r.noise_kind
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnusRow {
    pub tau: f64,
    pub error_set: String,
    pub terms: BTreeMap<String, f64>,
    /// `‖avg Ω₂ (quadrature) − avg Ω₂ (closed form)‖_F`
    pub discrepancy: Option<f64>,
    /// `‖avg Ω₁‖_F`
    pub omega1_norm: Option<f64>,
    pub closed_form_norm: f64,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnusReport {
    pub config: RunConfig,
    pub rows: Vec<MagnusRow>,
    pub all_passed: bool,
}

impl MagnusReport {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("tau,error_set,discrepancy,omega1_norm,closed_form_norm,passed\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:?},{},{},{},{:?},{}",
                r.tau,
                r.error_set,
                opt(r.discrepancy),
                opt(r.omega1_norm),
                r.closed_form_norm,
                r.passed
            );
        }
        out
    }
}

/// Deterministic random error sets drawn from the Paulis anticommuting with
/// `drive`; each set has at least two terms with amplitudes in
/// `[0.05, max_amplitude]`.
pub fn random_anticommuting_sets(
    drive: &PauliString,
    count: usize,
    max_amplitude: f64,
    seed: u64,
) -> Result<Vec<CoherentErrorSpec>> {
    if max_amplitude.is_nan() || max_amplitude < 0.05 {
        return Err(Error::InvalidSpec(format!(
            "max_amplitude must be at least 0.05, got {max_amplitude}"
        )));
    }
    let mut candidates = Vec::new();
    for p in pauli::enumerate_group(drive.n_qubits())? {
        if pauli::commutation_sign(&p, drive)? == -1 {
            candidates.push(p);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut pool = candidates.clone();
            pool.shuffle(&mut rng);
            let size = rng.random_range(2.min(pool.len())..=pool.len());
            let mut terms: Vec<(PauliString, f64)> = pool
                .into_iter()
                .take(size)
                .map(|p| (p, rng.random_range(0.05..=max_amplitude)))
                .collect();
            terms.sort_by(|a, b| a.0.cmp(&b.0));
            CoherentErrorSpec::new(terms)
        })
        .collect()
}

fn magnus_row(
    drive: &DriveSpec,
    name: &str,
    err: &CoherentErrorSpec,
    config: &RunConfig,
) -> Result<MagnusRow> {
    let closed = magnus::omega2_avg_closed(drive, err)?;
    let terms = err
        .terms()
        .iter()
        .map(|(p, h)| (p.label(), err.scale() * h))
        .collect();
    let quad = magnus::omega2_avg(drive, err, config.tolerances.quadrature)
        .and_then(|o2| Ok((o2, magnus::omega1_avg(drive, err)?)));
    let row = match quad {
        Ok((o2, o1)) => {
            let discrepancy = (o2 - &closed).norm();
            let omega1_norm = o1.norm();
            MagnusRow {
                tau: drive.tau(),
                error_set: name.to_string(),
                terms,
                discrepancy: Some(discrepancy),
                omega1_norm: Some(omega1_norm),
                closed_form_norm: closed.norm(),
                passed: discrepancy <= config.tolerances.magnus
                    && omega1_norm <= config.tolerances.omega1,
                failure: None,
            }
        }
        Err(e) if e.is_numerical() => MagnusRow {
            tau: drive.tau(),
            error_set: name.to_string(),
            terms,
            discrepancy: None,
            omega1_norm: None,
            closed_form_norm: closed.norm(),
            passed: false,
            failure: Some(e.to_string()),
        },
        Err(e) => return Err(e),
    };
    Ok(row)
}

/// Quadrature against closed form for every configured `τ`, on the
/// configured error set, its drive-commuting part and a batch of random
/// anticommuting sets. Numerical failures are recorded per row.
pub fn run_magnus_crosscheck(config: &RunConfig) -> Result<MagnusReport> {
    config.validate()?;
    let base_drive = config.drive_spec()?;
    let beta = base_drive.single_pauli()?.clone();
    let err = config.error_spec()?;

    let mut sets = vec![("configured".to_string(), err.clone())];
    let commuting: Vec<(PauliString, f64)> = err
        .terms()
        .iter()
        .filter(|(p, _)| {
            pauli::commutation_sign(p, &beta)
                .map(|s| s == 1)
                .unwrap_or(false)
        })
        .cloned()
        .collect();
    if !commuting.is_empty() {
        sets.push((
            "commuting".to_string(),
            CoherentErrorSpec::new(commuting)?.with_scale(err.scale()),
        ));
    }
    let random = random_anticommuting_sets(
        &beta,
        config.magnus.random_sets,
        config.magnus.max_amplitude,
        config.magnus.seed,
    )?;
    sets.extend(
        random
            .into_iter()
            .enumerate()
            .map(|(i, s)| (format!("random_{i}"), s)),
    );

    let mut rows = Vec::new();
    for &tau in &config.magnus.taus {
        let drive = base_drive.with_tau(tau)?;
        for (name, set) in &sets {
            rows.push(magnus_row(&drive, name, set, config)?);
        }
    }
    let all_passed = rows.iter().all(|r| r.passed);
    Ok(MagnusReport {
        config: config.clone(),
        rows,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::symmetric_grid;

    #[test]
    fn zero_error_table() {
        let cfg = RunConfig {
            delta: 0.0,
            ..RunConfig::default()
        };
        let report = run_table1(&cfg).unwrap();
        for row in [&report.no_pst, &report.pst] {
            for (label, v) in row {
                let expected = if label == "ZX" { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-12, "{label} {v}");
            }
        }
        assert_eq!(report.theoretical_zx, 1.0);
    }

    #[test]
    fn table_labels_cover_errors_and_drive() {
        let report = run_table1(&RunConfig::default()).unwrap();
        let labels: Vec<&str> = report.pst.keys().map(String::as_str).collect();
        assert_eq!(labels, ["XX", "YX", "YY", "ZX", "ZZ"]);
        assert_eq!(report.no_pst.len(), 5);
        assert!(report.to_csv().starts_with("label,no_pst,pst\nXX,"));
    }

    #[test]
    fn sweep_requires_mirrored_grid() {
        let mut cfg = RunConfig::default();
        cfg.sweep.deltas = vec![-0.5, 0.0, 0.25];
        assert!(matches!(run_parity_sweep(&cfg), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn noiseless_sweep_is_zero_at_origin() {
        let mut cfg = RunConfig::default();
        cfg.sweep.kinds = vec![NoiseKind::None];
        cfg.sweep.deltas = symmetric_grid(0.5, 2);
        let rows = run_parity_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 5);
        let origin = rows.iter().find(|r| r.delta == 0.0).unwrap();
        assert!(origin.error < 1e-12);
        assert!(rows.windows(2).all(|w| w[0].delta < w[1].delta));
        assert!(rows.iter().all(|r| r.error >= 0.0 && r.symmetrized >= 0.0));
    }

    #[test]
    fn sweep_csv_format() {
        let rows = vec![
            ParitySweepRow {
                delta: -0.1,
                error: 0.25,
                symmetrized: 0.125,
                noise_kind: NoiseKind::AmplitudeDamping,
            },
            ParitySweepRow {
                delta: 0.0,
                error: 1.5e-17,
                symmetrized: 1.5e-17,
                noise_kind: NoiseKind::PauliZ,
            },
        ];
        assert_eq!(
            sweep_to_csv(&rows),
            "delta,error,symmetrized,noise_kind\n\
             -0.1,0.25,0.125,amplitude_damping\n\
             0.0,1.5e-17,1.5e-17,pauli_z\n"
        );
    }

    #[test]
    fn random_sets_are_anticommuting_and_reproducible() {
        let zx = PauliString::from_label("ZX").unwrap();
        let a = random_anticommuting_sets(&zx, 5, 0.6, 7).unwrap();
        let b = random_anticommuting_sets(&zx, 5, 0.6, 7).unwrap();
        assert_eq!(a, b);
        for set in &a {
            assert!(set.terms().len() >= 2);
            for (p, h) in set.terms() {
                assert_eq!(pauli::commutation_sign(p, &zx).unwrap(), -1);
                assert!((0.05..=0.6).contains(h));
            }
        }
    }
}
