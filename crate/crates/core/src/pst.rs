// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact pseudo-twirling ensemble, effective-generator extraction and the
//! calibration inversion of the over-rotation law.
//!
//! A realisation for twirl `α` applies `𝓟_α`, runs the drive with the signs
//! of anticommuting terms flipped (the coherent error and the noise are not
//! under control and stay as they are), and applies `𝓟_α` again. Averaging
//! over all `4^n` twirls gives the channel.

use std::collections::BTreeMap;

use serde::ser::{Serialize, SerializeMap, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::liouville::{self, NoiseSpec, Superoperator};
use crate::magnus::{self, CoherentErrorSpec, DriveSpec};
use crate::numerics::{self, c, CMatrix};
use crate::pauli::{self, PauliString};

#[derive(Debug, Clone, PartialEq)]
pub struct PSTRealization {
    pub alpha: PauliString,
    /// `sgn(α, β_k)` for every drive term.
    pub sign_pattern: Vec<i8>,
    /// Lab-frame generator
    /// `−iτ Σ h_k 𝓗_{β_k} − iδτ 𝓟_α𝓗_coh𝓟_α + 𝓟_α𝓛𝓟_α`; its exponential is
    /// the realisation's channel.
    pub generator: Superoperator,
    /// Generator executed between the two Pauli layers,
    /// `−iτ Σ sgn(α,β_k) h_k 𝓗_{β_k} − iδτ 𝓗_coh + 𝓛`.
    pub executed_generator: Superoperator,
}

impl PSTRealization {
    /// `exp(generator)`.
    pub fn channel(&self) -> Result<Superoperator> {
        self.generator.exp()
    }

    /// `𝓟_α exp(executed_generator) 𝓟_α`.
    pub fn sandwiched_channel(&self) -> Result<Superoperator> {
        let pa = liouville::pauli_unitary_superop(&self.alpha)?;
        Ok(self.executed_generator.exp()?.sandwich(&pa))
    }
}

fn check_matching(drive: &DriveSpec, err: &CoherentErrorSpec, noise: &NoiseSpec) -> Result<usize> {
    err.check_against(drive)?;
    let n = drive.n_qubits();
    pauli::check_qubits(n)?;
    noise.validate(n)?;
    Ok(n)
}

pub fn pst_realization(
    drive: &DriveSpec,
    err: &CoherentErrorSpec,
    noise: &NoiseSpec,
    alpha: &PauliString,
) -> Result<PSTRealization> {
    let n = check_matching(drive, err, noise)?;
    if alpha.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.n_qubits(),
        });
    }
    let tau = drive.tau();
    let d = 1 << n;
    let pa = liouville::pauli_unitary_superop(alpha)?;
    let coherent = err.liouville_hamiltonian(n)?.into_matrix() * c(0.0, -tau);
    let dissipator = liouville::dissipator_superop(noise, n)?.into_matrix();

    let sign_pattern = drive
        .terms()
        .iter()
        .map(|(beta, _)| pauli::commutation_sign(alpha, beta))
        .collect::<Result<Vec<_>>>()?;

    let mut drive_lab = CMatrix::zeros(d * d, d * d);
    let mut drive_flipped = CMatrix::zeros(d * d, d * d);
    for ((beta, h), &sign) in drive.terms().iter().zip(&sign_pattern) {
        let hb = liouville::pauli_hamiltonian_superop(beta)?.into_matrix();
        drive_lab += &hb * c(0.0, -tau * h);
        drive_flipped += hb * c(0.0, -tau * h * f64::from(sign));
    }

    let noisy_error = coherent + dissipator;
    let lab = drive_lab + pa.matrix() * &noisy_error * pa.matrix();
    let executed = drive_flipped + noisy_error;
    Ok(PSTRealization {
        alpha: alpha.clone(),
        sign_pattern,
        generator: Superoperator::new(d, lab)?,
        executed_generator: Superoperator::new(d, executed)?,
    })
}

/// Uniform average of `𝓟_α exp(G_α) 𝓟_α` over every twirl.
pub fn pst_channel(
    drive: &DriveSpec,
    err: &CoherentErrorSpec,
    noise: &NoiseSpec,
) -> Result<Superoperator> {
    let n = check_matching(drive, err, noise)?;
    let group = pauli::enumerate_group(n)?;
    let channels = group
        .iter()
        .map(|alpha| {
            pst_realization(drive, err, noise, alpha)?
                .sandwiched_channel()
                .map(Superoperator::into_matrix)
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = numerics::pairwise_sum(&channels).expect("the Pauli group is non-empty");
    Superoperator::new(1 << n, sum / c(group.len() as f64, 0.0))
}

/// Channel of the gate without twirling: `exp(−iτΣh𝓗_β − iδτ𝓗_coh + 𝓛)`.
pub fn untwirled_channel(
    drive: &DriveSpec,
    err: &CoherentErrorSpec,
    noise: &NoiseSpec,
) -> Result<Superoperator> {
    let n = drive.n_qubits();
    pst_realization(drive, err, noise, &PauliString::identity(n))?.channel()
}

/// Ideal noiseless gate `exp(−iτ Σ h_β 𝓗_β)`.
pub fn ideal_channel(drive: &DriveSpec) -> Result<Superoperator> {
    let h = drive.liouville_hamiltonian()?;
    Superoperator::new(h.hilbert_dim(), h.into_matrix() * c(0.0, -drive.tau()))?.exp()
}

/// `log K = −iτ Σ_γ c_γ 𝓗_γ + remainder`, with `c_γ` the Hilbert-Schmidt
/// coordinates of the anti-Hermitian Pauli part.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveGenerator {
    pub tau: f64,
    pub hamiltonian_coeffs: BTreeMap<PauliString, f64>,
    pub dissipative_remainder: Superoperator,
}

impl EffectiveGenerator {
    pub fn coeff(&self, p: &PauliString) -> f64 {
        self.hamiltonian_coeffs.get(p).copied().unwrap_or(0.0)
    }

    pub fn coeff_of(&self, label: &str) -> Result<f64> {
        Ok(self.coeff(&PauliString::from_label(label)?))
    }

    pub fn remainder_norm(&self) -> f64 {
        self.dissipative_remainder.matrix().norm()
    }

    /// Frobenius norm of the anti-Hermitian part of the remainder.
    pub fn remainder_non_hermitian_norm(&self) -> f64 {
        let r = self.dissipative_remainder.matrix();
        ((r - r.adjoint()) * c(0.5, 0.0)).norm()
    }

    /// `−iτ Σ c_γ 𝓗_γ + remainder`.
    pub fn reconstruct(&self) -> Result<CMatrix> {
        let mut g = self.dissipative_remainder.matrix().clone();
        for (p, coeff) in &self.hamiltonian_coeffs {
            g += liouville::pauli_hamiltonian_superop(p)?.into_matrix() * c(0.0, -self.tau * coeff);
        }
        Ok(g)
    }
}

impl Serialize for EffectiveGenerator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coeffs<'a>(&'a BTreeMap<PauliString, f64>);

        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (p, v) in self.0 {
                    map.serialize_entry(&p.label(), v)?;
                }
                map.end()
            }
        }

        let mut s = serializer.serialize_struct("EffectiveGenerator", 3)?;
        s.serialize_field("tau", &self.tau)?;
        s.serialize_field("coeffs", &Coeffs(&self.hamiltonian_coeffs))?;
        s.serialize_field("remainder_norm", &self.remainder_norm())?;
        s.end()
    }
}

pub fn effective_generator(k: &Superoperator, tau: f64) -> Result<EffectiveGenerator> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidSpec(format!(
            "effective generator needs a positive duration, got {tau}"
        )));
    }
    let d = k.hilbert_dim();
    if !d.is_power_of_two() {
        return Err(Error::InvalidSpec(format!(
            "Hilbert dimension {d} is not a power of two"
        )));
    }
    let n = d.trailing_zeros() as usize;
    let g = numerics::logm_principal(k.matrix())?;
    // ⟨𝓗_γ, 𝓗_γ'⟩ = 2·4^n δ_γγ' for non-identity strings
    let norm = 2.0 * (d * d) as f64;
    let scaled = &g / c(0.0, -tau);

    let mut hamiltonian_coeffs = BTreeMap::new();
    let mut remainder = g.clone();
    for p in pauli::enumerate_group(n)?.into_iter().skip(1) {
        let h = liouville::pauli_hamiltonian_superop(&p)?.into_matrix();
        let overlap = h.adjoint().component_mul(&scaled.transpose()).sum();
        let coeff = overlap.re / norm;
        remainder += h * c(0.0, tau * coeff);
        hamiltonian_coeffs.insert(p, coeff);
    }
    Ok(EffectiveGenerator {
        tau,
        hamiltonian_coeffs,
        dissipative_remainder: Superoperator::new(d, remainder)?,
    })
}

/// Drive duration `τ` that produces rotation angle `θ` under PST, i.e. the
/// root of `τ · over_rotation_factor(τ, Σh²) = θ/2` on `(0, θ/2]`.
pub fn calibrate_tau(theta: f64, sum_h2: f64) -> Result<f64> {
    if !theta.is_finite() || theta <= 0.0 || theta / 2.0 > std::f64::consts::FRAC_PI_2 {
        return Err(Error::InvalidSpec(format!(
            "target angle must satisfy 0 < θ/2 <= π/2, got θ = {theta}"
        )));
    }
    magnus::over_rotation_factor(0.0, sum_h2)?;
    let target = theta / 2.0;
    let residual =
        |tau: f64| -> Result<f64> { Ok(tau * magnus::over_rotation_factor(tau, sum_h2)? - target) };

    let (mut lo, mut hi) = (0.0, target);
    let f_hi = residual(hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if residual(lo)? >= 0.0 || f_hi < 0.0 {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = residual(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (f_lo, f_hi) = (residual(lo)?, residual(hi)?);
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::NoiseKind;

    fn p(label: &str) -> PauliString {
        PauliString::from_label(label).unwrap()
    }

    fn table1_errors() -> CoherentErrorSpec {
        CoherentErrorSpec::from_labels([("XX", 0.2), ("YY", 0.6), ("ZZ", 0.2), ("YX", 0.4)])
            .unwrap()
    }

    #[test]
    fn identity_twirl_generator() {
        let drive = DriveSpec::from_label("ZX", 0.5).unwrap();
        let err = table1_errors().with_scale(0.7);
        let noise = NoiseSpec::on_all_qubits(NoiseKind::AmplitudeDamping, 0.2, 2);
        let r = pst_realization(&drive, &err, &noise, &p("II")).unwrap();
        let expected = drive.liouville_hamiltonian().unwrap().into_matrix() * c(0.0, -0.5)
            + err.liouville_hamiltonian(2).unwrap().into_matrix() * c(0.0, -0.5)
            + liouville::dissipator_superop(&noise, 2)
                .unwrap()
                .into_matrix();
        assert!((r.generator.matrix() - &expected).norm() < 1e-14);
        assert!((r.executed_generator.matrix() - &expected).norm() < 1e-14);
        assert_eq!(r.sign_pattern, vec![1]);
    }

    #[test]
    fn sign_pattern_flips_anticommuting_drive() {
        let drive = DriveSpec::from_label("ZZ", 0.5).unwrap();
        let r = pst_realization(
            &drive,
            &CoherentErrorSpec::empty(),
            &NoiseSpec::none(),
            &p("XZ"),
        )
        .unwrap();
        assert_eq!(r.sign_pattern, vec![-1]);
    }

    #[test]
    fn error_free_realisations_are_ideal() {
        let drive = DriveSpec::from_label("ZX", 0.5).unwrap();
        let ideal = ideal_channel(&drive).unwrap();
        for alpha in pauli::enumerate_group(2).unwrap() {
            let r = pst_realization(
                &drive,
                &CoherentErrorSpec::empty(),
                &NoiseSpec::none(),
                &alpha,
            )
            .unwrap();
            assert!((r.channel().unwrap().matrix() - ideal.matrix()).norm() < 1e-12);
            assert!((r.sandwiched_channel().unwrap().matrix() - ideal.matrix()).norm() < 1e-12);
        }
        let k = pst_channel(&drive, &CoherentErrorSpec::empty(), &NoiseSpec::none()).unwrap();
        assert!((k.matrix() - ideal.matrix()).norm() < 1e-12);
    }

    #[test]
    fn both_realisation_forms_agree() {
        let drive = DriveSpec::new(vec![(p("ZX"), 1.0), (p("XI"), -0.4)], 0.6).unwrap();
        let err = table1_errors().with_scale(0.3);
        for noise in [
            NoiseSpec::none(),
            NoiseSpec::on_all_qubits(NoiseKind::PauliZ, 0.5, 2),
            NoiseSpec::on_all_qubits(NoiseKind::AmplitudeDamping, 0.5, 2),
        ] {
            for alpha in pauli::enumerate_group(2).unwrap() {
                let r = pst_realization(&drive, &err, &noise, &alpha).unwrap();
                let a = r.channel().unwrap();
                let b = r.sandwiched_channel().unwrap();
                assert!((a.matrix() - b.matrix()).norm() < 1e-12, "{alpha}");
            }
        }
    }

    #[test]
    fn realisation_rejects_mismatched_inputs() {
        let drive = DriveSpec::from_label("ZX", 0.5).unwrap();
        let err = CoherentErrorSpec::from_labels([("XXX", 0.1)]).unwrap();
        assert!(pst_realization(&drive, &err, &NoiseSpec::none(), &p("II")).is_err());
        assert!(pst_realization(&drive, &table1_errors(), &NoiseSpec::none(), &p("I")).is_err());
        let noise = NoiseSpec {
            kind: NoiseKind::PauliZ,
            rate: 1.0,
            targets: vec![3],
        };
        assert!(pst_channel(&drive, &table1_errors(), &noise).is_err());
    }

    #[test]
    fn channel_is_even_in_delta_when_errors_share_an_anticommuting_pauli() {
        // ZI anticommutes with XX, YY and YX
        let drive = DriveSpec::from_label("ZX", 0.5).unwrap();
        let errors =
            CoherentErrorSpec::from_labels([("XX", 0.2), ("YY", 0.6), ("YX", 0.4)]).unwrap();
        for noise in [
            NoiseSpec::none(),
            NoiseSpec::on_all_qubits(NoiseKind::PauliZ, 3.0, 2),
        ] {
            for delta in [0.1, 0.5, 1.3] {
                let plus = pst_channel(&drive, &errors.with_scale(delta), &noise).unwrap();
                let minus = pst_channel(&drive, &errors.with_scale(-delta), &noise).unwrap();
                let diff = plus.matrix() - minus.matrix();
                assert!(numerics::max_abs(&diff) < 1e-10, "{:?} {delta}", noise.kind);
            }
        }
    }

    #[test]
    fn table1_errors_are_even_only_in_norm() {
        // XX·YY ∝ ZZ, so no Pauli anticommutes with all four terms
        let drive = DriveSpec::from_label("ZX", 0.5).unwrap();
        let ideal = ideal_channel(&drive).unwrap();
        let plus =
            pst_channel(&drive, &table1_errors().with_scale(0.5), &NoiseSpec::none()).unwrap();
        let minus = pst_channel(
            &drive,
            &table1_errors().with_scale(-0.5),
            &NoiseSpec::none(),
        )
        .unwrap();
        assert!(numerics::max_abs(&(plus.matrix() - minus.matrix())) > 1e-6);
        let e_plus = numerics::op_norm(&(plus.matrix() - ideal.matrix())).unwrap();
        let e_minus = numerics::op_norm(&(minus.matrix() - ideal.matrix())).unwrap();
        assert!((e_plus - e_minus).abs() < 1e-12);
    }

    #[test]
    fn effective_generator_of_ideal_gate() {
        let drive = DriveSpec::from_label("ZX", 0.5).unwrap();
        let eff = effective_generator(&ideal_channel(&drive).unwrap(), 0.5).unwrap();
        assert_eq!(eff.hamiltonian_coeffs.len(), 15);
        assert!(!eff.hamiltonian_coeffs.contains_key(&p("II")));
        for (q, v) in &eff.hamiltonian_coeffs {
            let expected = if *q == p("ZX") { 1.0 } else { 0.0 };
            assert!((v - expected).abs() <= 1e-12, "{q} {v}");
        }
        assert!(eff.remainder_norm() < 1e-11);
    }

    #[test]
    fn effective_generator_reconstructs_log() {
        let tau = 0.5;
        let hb = liouville::pauli_hamiltonian_superop(&p("ZX"))
            .unwrap()
            .into_matrix();
        let l =
            liouville::dissipator_superop(&NoiseSpec::on_all_qubits(NoiseKind::PauliZ, 0.05, 2), 2)
                .unwrap()
                .into_matrix();
        let g = hb * c(0.0, -tau) + l;
        let k = Superoperator::from_matrix(numerics::expm(&g).unwrap()).unwrap();
        let eff = effective_generator(&k, tau).unwrap();
        let log = numerics::logm_principal(k.matrix()).unwrap();
        assert!((eff.reconstruct().unwrap() - &log).norm() < 1e-10);
        assert!((&log - &g).norm() < 1e-10);
        assert!((eff.coeff_of("ZX").unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn effective_generator_reads_untwirled_amplitudes() {
        let drive = DriveSpec::from_label("ZX", 0.5).unwrap();
        let k = untwirled_channel(&drive, &table1_errors(), &NoiseSpec::none()).unwrap();
        let eff = effective_generator(&k, 0.5).unwrap();
        for (label, v) in [
            ("XX", 0.2),
            ("YY", 0.6),
            ("ZZ", 0.2),
            ("YX", 0.4),
            ("ZX", 1.0),
        ] {
            assert!((eff.coeff_of(label).unwrap() - v).abs() < 1e-10, "{label}");
        }
    }

    #[test]
    fn effective_generator_json_shape() {
        let drive = DriveSpec::from_label("ZX", 0.5).unwrap();
        let eff = effective_generator(&ideal_channel(&drive).unwrap(), 0.5).unwrap();
        let v = serde_json::to_value(&eff).unwrap();
        assert_eq!(v["tau"], 0.5);
        assert_eq!(v["coeffs"].as_object().unwrap().len(), 15);
        assert!(v["coeffs"]["ZX"].as_f64().unwrap() > 0.999);
        assert!(v["remainder_norm"].as_f64().unwrap() < 1e-10);
    }

    #[test]
    fn effective_generator_rejects_bad_tau() {
        let k = Superoperator::identity(2);
        assert!(effective_generator(&k, 0.0).is_err());
    }

    #[test]
    fn calibration() {
        for theta in [0.2, 1.0, 2.5, std::f64::consts::PI] {
            assert_eq!(calibrate_tau(theta, 0.0).unwrap(), theta / 2.0);
        }
        let tau = calibrate_tau(1.0, 0.24).unwrap();
        assert!(tau < 0.5);
        let achieved = tau * magnus::over_rotation_factor(tau, 0.24).unwrap();
        assert!((achieved - 0.5).abs() <= 1e-12);

        let half = calibrate_tau(0.5, 0.24).unwrap();
        assert!((half - tau / 2.0).abs() > 1e-6);

        assert!(calibrate_tau(0.0, 0.1).is_err());
        assert!(calibrate_tau(4.0, 0.1).is_err());
        assert!(calibrate_tau(1.0, -0.1).is_err());
    }
}
