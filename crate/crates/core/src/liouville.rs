// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

//! Liouville-space objects.
//!
//! Density matrices are vectorised by stacking rows, so that `ρ ↦ AρB`
//! becomes `A ⊗ Bᵀ` acting on `vec(ρ)`. Every superoperator in the crate
//! follows this convention.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, c, CMatrix};
use crate::pauli::{self, Pauli, PauliString};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;

/// A linear map on vectorised `d x d` density matrices, stored as a dense
/// `d² x d²` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    hilbert_dim: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn new(hilbert_dim: usize, matrix: CMatrix) -> Result<Self> {
        let dim = numerics::check_square(&matrix)?;
        if dim != hilbert_dim * hilbert_dim {
            return Err(Error::DimensionMismatch {
                expected: hilbert_dim * hilbert_dim,
                found: dim,
            });
        }
        Ok(Self {
            hilbert_dim,
            matrix,
        })
    }

    /// Wrap a `d² x d²` matrix, inferring `d`.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let dim = numerics::check_square(&matrix)?;
        let hilbert_dim = (dim as f64).sqrt().round() as usize;
        Self::new(hilbert_dim, matrix)
    }

    pub fn identity(hilbert_dim: usize) -> Self {
        let d2 = hilbert_dim * hilbert_dim;
        Self {
            hilbert_dim,
            matrix: CMatrix::identity(d2, d2),
        }
    }

    pub fn zeros(hilbert_dim: usize) -> Self {
        let d2 = hilbert_dim * hilbert_dim;
        Self {
            hilbert_dim,
            matrix: CMatrix::zeros(d2, d2),
        }
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `p · self · p`
    pub fn sandwich(&self, p: &Superoperator) -> Superoperator {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            matrix: &p.matrix * &self.matrix * &p.matrix,
        }
    }

    pub fn exp(&self) -> Result<Superoperator> {
        Ok(Superoperator {
            hilbert_dim: self.hilbert_dim,
            matrix: numerics::expm(&self.matrix)?,
        })
    }

    /// Action on a density matrix.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let v = vectorize(rho)?;
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        devectorize(&(&self.matrix * v))
    }
}

/// `A ⊗ I − I ⊗ Aᵀ` without any checks on `A`.
pub fn commutator_superop(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    let id = CMatrix::identity(d, d);
    a.kronecker(&id) - id.kronecker(&a.transpose())
}

/// `H ⊗ I − I ⊗ Hᵀ` for Hermitian `H`.
pub fn hamiltonian_superop(h: &CMatrix) -> Result<Superoperator> {
    let d = numerics::check_square(h)?;
    numerics::check_finite(h)?;
    let deviation = numerics::hermitian_deviation(h);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Superoperator::new(d, commutator_superop(h))
}

/// `U ⊗ U*`.
pub fn unitary_superop(u: &CMatrix) -> Result<Superoperator> {
    let d = numerics::check_square(u)?;
    numerics::check_finite(u)?;
    let deviation = numerics::unitary_deviation(u);
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Superoperator::new(d, u.kronecker(&u.conjugate()))
}

/// `P ⊗ P*` for a Pauli string.
pub fn pauli_unitary_superop(p: &PauliString) -> Result<Superoperator> {
    let m = pauli::matrix_of(p)?;
    let d = m.nrows();
    Superoperator::new(d, m.kronecker(&m.conjugate()))
}

/// Liouville Pauli Hamiltonian `P ⊗ I − I ⊗ Pᵀ`.
pub fn pauli_hamiltonian_superop(p: &PauliString) -> Result<Superoperator> {
    let m = pauli::matrix_of(p)?;
    Superoperator::new(m.nrows(), commutator_superop(&m))
}

/// Row-stacking vectorisation.
pub fn vectorize(rho: &CMatrix) -> Result<DVector<Complex64>> {
    numerics::check_square(rho)?;
    Ok(DVector::from_iterator(
        rho.len(),
        rho.row_iter()
            .flat_map(|row| row.iter().copied().collect::<Vec<_>>()),
    ))
}

pub fn devectorize(v: &DVector<Complex64>) -> Result<CMatrix> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d * d != v.len() {
        return Err(Error::InvalidSpec(format!(
            "vector of length {} is not a vectorised square matrix",
            v.len()
        )));
    }
    Ok(CMatrix::from_row_slice(d, d, v.as_slice()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    None,
    PauliZ,
    AmplitudeDamping,
}

impl NoiseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseKind::None => "none",
            NoiseKind::PauliZ => "pauli_z",
            NoiseKind::AmplitudeDamping => "amplitude_damping",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(NoiseKind::None),
            "pauli_z" => Ok(NoiseKind::PauliZ),
            "amplitude_damping" => Ok(NoiseKind::AmplitudeDamping),
            other => Err(Error::InvalidSpec(format!(
                "unknown noise kind {other:?} (expected none, pauli_z or amplitude_damping)"
            ))),
        }
    }
}

/// One Lindblad operator per target qubit, all with the same rate `ζ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub rate: f64,
    pub targets: Vec<usize>,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self {
            kind: NoiseKind::None,
            rate: 0.0,
            targets: Vec::new(),
        }
    }

    pub fn on_all_qubits(kind: NoiseKind, rate: f64, n_qubits: usize) -> Self {
        Self {
            kind,
            rate,
            targets: (0..n_qubits).collect(),
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if !self.rate.is_finite() || self.rate < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "noise rate must be finite and non-negative, got {}",
                self.rate
            )));
        }
        for (i, &t) in self.targets.iter().enumerate() {
            if t >= n_qubits {
                return Err(Error::InvalidSpec(format!(
                    "noise target {t} out of range for {n_qubits} qubits"
                )));
            }
            if self.targets[..i].contains(&t) {
                return Err(Error::InvalidSpec(format!("duplicate noise target {t}")));
            }
        }
        Ok(())
    }
}

fn embed(op: &CMatrix, target: usize, n_qubits: usize) -> CMatrix {
    (0..n_qubits)
        .map(|k| {
            if k == target {
                op.clone()
            } else {
                Pauli::I.matrix()
            }
        })
        .reduce(|acc, m| acc.kronecker(&m))
        .expect("at least one qubit")
}

/// Vectorised Lindblad generator
/// `Σ_k L_k ⊗ L_k* − ½ (L_k†L_k ⊗ I + I ⊗ (L_k†L_k)ᵀ)`.
///
/// `pauli_z` uses `L_k = √ζ σ_z` and `amplitude_damping` uses
/// `L_k = √ζ |0⟩⟨1|` on each target.
pub fn dissipator_superop(spec: &NoiseSpec, n_qubits: usize) -> Result<Superoperator> {
    pauli::check_qubits(n_qubits)?;
    spec.validate(n_qubits)?;
    let d = 1usize << n_qubits;
    let mut generator = Superoperator::zeros(d);
    let local = match spec.kind {
        NoiseKind::None => return Ok(generator),
        NoiseKind::PauliZ => Pauli::Z.matrix(),
        NoiseKind::AmplitudeDamping => {
            let mut lowering = CMatrix::zeros(2, 2);
            lowering[(0, 1)] = c(1.0, 0.0);
            lowering
        }
    };
    let id = CMatrix::identity(d, d);
    for &target in &spec.targets {
        let l = embed(&local, target, n_qubits) * c(spec.rate.sqrt(), 0.0);
        let ldl = l.adjoint() * &l;
        generator.matrix += l.kronecker(&l.conjugate())
            - (ldl.kronecker(&id) + id.kronecker(&ldl.transpose())) * c(0.5, 0.0);
    }
    Ok(generator)
}
