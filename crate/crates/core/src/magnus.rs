// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

//! First- and second-order Magnus terms of a coherent error in the
//! interaction frame of a Pauli drive, their averages over the Pauli
//! twirl set, and the closed-form over-rotation of the drive.

use crate::error::{Error, Result};
use crate::liouville::{self, Superoperator};
use crate::numerics::{self, c, CMatrix, QuadratureOptions};
use crate::pauli::{self, PauliString};

/// Ideal generator `Σ_β h_β P_β` applied for a duration `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSpec {
    terms: Vec<(PauliString, f64)>,
    tau: f64,
}

impl DriveSpec {
    pub fn new(terms: Vec<(PauliString, f64)>, tau: f64) -> Result<Self> {
        let Some((first, _)) = terms.first() else {
            return Err(Error::InvalidSpec("drive needs at least one term".into()));
        };
        let n = first.n_qubits();
        for (i, (p, h)) in terms.iter().enumerate() {
            if p.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.n_qubits(),
                });
            }
            if !h.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "drive coefficient of {p} is not finite"
                )));
            }
            if terms[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::InvalidSpec(format!("duplicate drive term {p}")));
            }
        }
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "drive duration must be finite and non-negative, got {tau}"
            )));
        }
        Ok(Self { terms, tau })
    }

    /// Unit-amplitude drive along a single Pauli.
    pub fn single(pauli: PauliString, tau: f64) -> Result<Self> {
        Self::new(vec![(pauli, 1.0)], tau)
    }

    pub fn from_label(label: &str, tau: f64) -> Result<Self> {
        Self::single(PauliString::from_label(label)?, tau)
    }

    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.terms.clone(), tau)
    }

    pub fn n_qubits(&self) -> usize {
        self.terms[0].0.n_qubits()
    }

    /// The drive Pauli, if the drive is a single unit-amplitude term.
    pub fn single_pauli(&self) -> Result<&PauliString> {
        match self.terms.as_slice() {
            [(p, h)] if *h == 1.0 => Ok(p),
            _ => Err(Error::Unsupported(
                "closed-form Magnus terms need a single Pauli drive with coefficient 1".into(),
            )),
        }
    }

    /// `Σ_β h_β 𝓗_β`.
    pub fn liouville_hamiltonian(&self) -> Result<Superoperator> {
        weighted_hamiltonian(self.terms.iter().map(|(p, h)| (p, *h)), self.n_qubits())
    }

    /// Hilbert-space propagator `exp(−i t Σ h_β P_β)`.
    pub fn propagator(&self, t: f64) -> Result<CMatrix> {
        let mut h = CMatrix::zeros(1 << self.n_qubits(), 1 << self.n_qubits());
        for (p, coeff) in &self.terms {
            h += pauli::matrix_of(p)? * c(*coeff, 0.0);
        }
        numerics::expm(&(h * c(0.0, -t)))
    }
}

/// Coherent error `δ Σ_γ h_γ 𝓗_γ`. Amplitudes are stored with any
/// dimensionless prefactor already folded in; `scale` is the global `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentErrorSpec {
    terms: Vec<(PauliString, f64)>,
    scale: f64,
}

impl CoherentErrorSpec {
    pub fn new(terms: Vec<(PauliString, f64)>) -> Result<Self> {
        for (i, (p, h)) in terms.iter().enumerate() {
            if !h.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "error amplitude of {p} is not finite"
                )));
            }
            if let Some((first, _)) = terms.first() {
                if p.n_qubits() != first.n_qubits() {
                    return Err(Error::DimensionMismatch {
                        expected: first.n_qubits(),
                        found: p.n_qubits(),
                    });
                }
            }
            if terms[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::InvalidSpec(format!("duplicate error term {p}")));
            }
        }
        Ok(Self { terms, scale: 1.0 })
    }

    pub fn from_labels<'a, I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let terms = terms
            .into_iter()
            .map(|(label, h)| Ok((PauliString::from_label(label)?, h)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    pub fn empty() -> Self {
        Self {
            terms: Vec::new(),
            scale: 1.0,
        }
    }

    pub fn with_scale(&self, scale: f64) -> Self {
        Self {
            terms: self.terms.clone(),
            scale,
        }
    }

    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Reject errors on a drive Pauli (controlled mis-rotations) and qubit
    /// count mismatches.
    pub fn check_against(&self, drive: &DriveSpec) -> Result<()> {
        for (p, _) in &self.terms {
            if p.n_qubits() != drive.n_qubits() {
                return Err(Error::DimensionMismatch {
                    expected: drive.n_qubits(),
                    found: p.n_qubits(),
                });
            }
            if drive.terms().iter().any(|(b, _)| b == p) {
                return Err(Error::InvalidSpec(format!(
                    "error term {p} coincides with a drive Pauli; controlled mis-rotations are not \
                     averaged by pseudo twirling"
                )));
            }
        }
        Ok(())
    }

    /// `δ Σ_γ h_γ 𝓗_γ` on `n` qubits.
    pub fn liouville_hamiltonian(&self, n_qubits: usize) -> Result<Superoperator> {
        weighted_hamiltonian(
            self.terms.iter().map(|(p, h)| (p, self.scale * h)),
            n_qubits,
        )
    }

    /// `Σ_{γ ∈ γ⁺} (δ h_γ)²` over the terms anticommuting with `drive`.
    pub fn anticommuting_sum_h2(&self, drive: &PauliString) -> Result<f64> {
        let mut sum = 0.0;
        for (p, h) in &self.terms {
            if pauli::commutation_sign(p, drive)? == -1 {
                sum += (self.scale * h).powi(2);
            }
        }
        Ok(sum)
    }
}

fn weighted_hamiltonian<'a, I>(terms: I, n_qubits: usize) -> Result<Superoperator>
where
    I: Iterator<Item = (&'a PauliString, f64)>,
{
    let mut acc = Superoperator::zeros(1 << n_qubits).into_matrix();
    for (p, h) in terms {
        if p.n_qubits() != n_qubits {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: p.n_qubits(),
            });
        }
        acc += liouville::pauli_hamiltonian_superop(p)?.into_matrix() * c(h, 0.0);
    }
    Superoperator::new(1 << n_qubits, acc)
}

/// `𝓤(t)† X 𝓤(t)` for the drive propagator `𝓤(t)`.
fn dress(x: &CMatrix, drive: &DriveSpec, t: f64) -> Result<CMatrix> {
    let u = drive.propagator(t)?;
    let lu = u.kronecker(&u.conjugate());
    Ok(lu.adjoint() * x * lu)
}

/// Error Hamiltonian in the interaction frame of a single-Pauli drive,
/// `𝓤(t)† 𝓗_γ 𝓤(t)`.
pub fn interaction_dressed(
    err_term: &PauliString,
    drive: &DriveSpec,
    t: f64,
) -> Result<Superoperator> {
    drive.single_pauli()?;
    if err_term.n_qubits() != drive.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: drive.n_qubits(),
            found: err_term.n_qubits(),
        });
    }
    let h = liouville::pauli_hamiltonian_superop(err_term)?;
    Superoperator::new(h.hilbert_dim(), dress(h.matrix(), drive, t)?)
}

/// `𝓟_α 𝓗_coh 𝓟_α`.
fn twirled_error(err: &CoherentErrorSpec, n: usize, alpha: &PauliString) -> Result<CMatrix> {
    let pa = liouville::pauli_unitary_superop(alpha)?;
    Ok(err.liouville_hamiltonian(n)?.sandwich(&pa).into_matrix())
}

fn check_inputs(drive: &DriveSpec, err: &CoherentErrorSpec, alpha: &PauliString) -> Result<usize> {
    err.check_against(drive)?;
    let n = drive.n_qubits();
    if alpha.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.n_qubits(),
        });
    }
    Ok(n)
}

/// `Ω_{1,α} = −i ∫_0^τ 𝓤(t)† 𝓟_α 𝓗_coh 𝓟_α 𝓤(t) dt`.
pub fn omega1_alpha(
    drive: &DriveSpec,
    err: &CoherentErrorSpec,
    alpha: &PauliString,
    tol: f64,
) -> Result<CMatrix> {
    let n = check_inputs(drive, err, alpha)?;
    let x = twirled_error(err, n, alpha)?;
    let opts = QuadratureOptions::with_tol(tol);
    let r = numerics::interval_quadrature_with(
        |t| Ok(dress(&x, drive, t)? * c(0.0, -1.0)),
        drive.tau(),
        &opts,
    )?;
    Ok(r.value)
}

/// Twirl average of `Ω_{1,α}`; vanishes for any error set.
pub fn omega1_avg(drive: &DriveSpec, err: &CoherentErrorSpec) -> Result<CMatrix> {
    twirl_average(drive.n_qubits(), |alpha| {
        omega1_alpha(drive, err, alpha, numerics::DEFAULT_QUADRATURE_TOL)
    })
}

/// `Ω_{2,α} = −½ ∬_{t2 ≤ t1} [D_α(t1), D_α(t2)]` with
/// `D_α(t) = 𝓤(t)† 𝓟_α 𝓗_coh 𝓟_α 𝓤(t)`.
pub fn omega2_alpha(
    drive: &DriveSpec,
    err: &CoherentErrorSpec,
    alpha: &PauliString,
    tol: f64,
) -> Result<CMatrix> {
    drive.single_pauli()?;
    let n = check_inputs(drive, err, alpha)?;
    let x = twirled_error(err, n, alpha)?;
    let opts = QuadratureOptions::with_tol(tol);
    let r = numerics::triangle_quadrature_with(
        |t1, t2| {
            let d1 = dress(&x, drive, t1)?;
            let d2 = dress(&x, drive, t2)?;
            Ok(numerics::commutator(&d1, &d2) * c(-0.5, 0.0))
        },
        drive.tau(),
        &opts,
    )?;
    Ok(r.value)
}

/// Twirl average of `Ω_{2,α}` by quadrature and exact enumeration.
pub fn omega2_avg(drive: &DriveSpec, err: &CoherentErrorSpec, tol: f64) -> Result<CMatrix> {
    twirl_average(drive.n_qubits(), |alpha| {
        omega2_alpha(drive, err, alpha, tol)
    })
}

fn twirl_average<F>(n: usize, term: F) -> Result<CMatrix>
where
    F: Fn(&PauliString) -> Result<CMatrix>,
{
    let group = pauli::enumerate_group(n)?;
    let terms = group.iter().map(term).collect::<Result<Vec<_>>>()?;
    let sum = numerics::pairwise_sum(&terms).expect("the Pauli group is non-empty");
    Ok(sum / c(group.len() as f64, 0.0))
}

/// Closed form of the averaged second-order term,
/// `−iτ (1 − sinc 2τ)/2 · Σ_{γ⁺} (δ h_γ)² · 𝓗_β`.
pub fn omega2_avg_closed(drive: &DriveSpec, err: &CoherentErrorSpec) -> Result<CMatrix> {
    let beta = drive.single_pauli()?;
    err.check_against(drive)?;
    let tau = drive.tau();
    let sum_h2 = err.anticommuting_sum_h2(beta)?;
    let prefactor = tau * (1.0 - sinc(2.0 * tau)) / 2.0 * sum_h2;
    Ok(liouville::pauli_hamiltonian_superop(beta)?.into_matrix() * c(0.0, -prefactor))
}

/// `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Drive amplification `1 + (1 − sinc 2τ)/2 · Σ_{γ⁺} h²`.
pub fn over_rotation_factor(tau: f64, sum_h2: f64) -> Result<f64> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::InvalidSpec(format!(
            "tau must be non-negative, got {tau}"
        )));
    }
    if !sum_h2.is_finite() || sum_h2 < 0.0 {
        return Err(Error::InvalidSpec(format!(
            "sum of squared amplitudes must be non-negative, got {sum_h2}"
        )));
    }
    Ok(1.0 + (1.0 - sinc(2.0 * tau)) / 2.0 * sum_h2)
}
