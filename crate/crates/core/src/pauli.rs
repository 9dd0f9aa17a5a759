// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

//! Symplectic n-qubit Pauli strings.
//!
//! A string is stored as a pair of bit vectors `(x, z)`; qubit `k` carries
//! `X` when only `x[k]` is set, `Z` when only `z[k]` is set, `Y` when both are
//! set and the identity otherwise. Qubit 0 is the leftmost character of a
//! label and the most significant tensor factor of the matrix.
//!
//! Global phases of products are not tracked: everything downstream only
//! needs commutation signs and conjugations.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::CMatrix;

pub const DEFAULT_MAX_QUBITS: usize = 4;

static MAX_QUBITS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_QUBITS);

/// Current resource bound on the number of qubits.
pub fn max_qubits() -> usize {
    MAX_QUBITS.load(AtomicOrdering::Relaxed)
}

/// Override the resource bound for enumeration and dense realisation.
pub fn set_max_qubits(n: usize) {
    MAX_QUBITS.store(n.max(1), AtomicOrdering::Relaxed);
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    let limit = max_qubits();
    if n == 0 {
        return Err(Error::InvalidSpec(
            "number of qubits must be positive".into(),
        ));
    }
    if n > limit {
        return Err(Error::ResourceBound { n, limit });
    }
    Ok(())
}

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn matrix(self) -> CMatrix {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let entries = match self {
            Pauli::I => [c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)],
            Pauli::X => [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
            Pauli::Y => [c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
            Pauli::Z => [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            x: vec![false; n_qubits],
            z: vec![false; n_qubits],
        }
    }

    pub fn from_bits(x: Vec<bool>, z: Vec<bool>) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(Self { x, z })
    }

    pub fn from_paulis(factors: &[Pauli]) -> Self {
        let (x, z) = factors.iter().map(|p| p.bits()).unzip();
        Self { x, z }
    }

    /// Parse a label such as `"ZX"`; qubit 0 is the leftmost character.
    pub fn from_label(label: &str) -> Result<Self> {
        if label.is_empty() {
            return Err(Error::EmptyLabel);
        }
        let factors = label
            .chars()
            .enumerate()
            .map(|(position, ch)| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::InvalidLabel {
                    label: label.to_string(),
                    position,
                    ch,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_paulis(&factors))
    }

    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|b| !b)
    }

    pub fn factor(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x[qubit], self.z[qubit])
    }

    pub fn factors(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n_qubits()).map(|k| self.factor(k))
    }

    pub fn label(&self) -> String {
        self.factors().map(Pauli::as_char).collect()
    }

    /// Position of this string in [`enumerate_group`] order.
    pub fn index(&self) -> usize {
        self.factors().fold(0, |acc, p| 4 * acc + p as usize)
    }

    /// Product up to phase.
    pub fn product(&self, other: &PauliString) -> Result<PauliString> {
        self.check_same_size(other)?;
        Ok(PauliString {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        commutation_sign(self, other).map(|s| s == 1)
    }

    fn check_same_size(&self, other: &PauliString) -> Result<()> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                found: other.n_qubits(),
            });
        }
        Ok(())
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits()
            .cmp(&other.n_qubits())
            .then_with(|| self.factors().cmp(other.factors()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_label(s)
    }
}

/// `+1` if the strings commute, `-1` if they anticommute.
///
/// Equal to `tr(P_a P_b P_a P_b) / 2^n`, evaluated from the symplectic form.
pub fn commutation_sign(a: &PauliString, b: &PauliString) -> Result<i8> {
    a.check_same_size(b)?;
    let odd = (0..a.n_qubits()).fold(false, |acc, k| {
        acc ^ ((a.x[k] & b.z[k]) ^ (a.z[k] & b.x[k]))
    });
    Ok(if odd { -1 } else { 1 })
}

/// All `4^n` strings, identity first, `I < X < Y < Z` per qubit with qubit 0
/// most significant.
pub fn enumerate_group(n: usize) -> Result<Vec<PauliString>> {
    check_qubits(n)?;
    Ok((0..1usize << (2 * n))
        .map(|index| {
            let factors: Vec<Pauli> = (0..n)
                .map(|k| Pauli::ALL[(index >> (2 * (n - 1 - k))) & 3])
                .collect();
            PauliString::from_paulis(&factors)
        })
        .collect())
}

/// Dense `2^n x 2^n` matrix of the string.
pub fn matrix_of(p: &PauliString) -> Result<CMatrix> {
    check_qubits(p.n_qubits())?;
    Ok(p.factors()
        .map(Pauli::matrix)
        .reduce(|acc, m| acc.kronecker(&m))
        .expect("Pauli strings are non-empty"))
}

/// Square table of commutation signs in [`enumerate_group`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    labels: Vec<PauliString>,
    signs: Vec<Vec<i8>>,
}

impl SignTable {
    pub fn labels(&self) -> &[PauliString] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.signs
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.signs[row][col]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// CSV with a header row of labels; each row starts with its label.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for p in &self.labels {
            out.push(',');
            out.push_str(&p.label());
        }
        out.push('\n');
        for (p, row) in self.labels.iter().zip(&self.signs) {
            out.push_str(&p.label());
            for s in row {
                out.push(',');
                out.push_str(&s.to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub fn sign_table(n: usize) -> Result<SignTable> {
    let labels = enumerate_group(n)?;
    let signs = labels
        .iter()
        .map(|a| {
            labels
                .iter()
                .map(|b| commutation_sign(a, b))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SignTable { labels, signs })
}
