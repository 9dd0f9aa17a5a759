// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::numerics::CMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("empty Pauli label")]
    EmptyLabel,

    #[error("invalid Pauli label {label:?}: unexpected character {ch:?} at position {position}")]
    InvalidLabel {
        label: String,
        position: usize,
        ch: char,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "{n} qubits exceeds the configured limit of {limit} (set PSTLAB_MAX_QUBITS to raise it)"
    )]
    ResourceBound { n: usize, limit: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (relative deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is singular; its logarithm is undefined")]
    Singular,

    #[error(
        "eigenvalue {re:+.3e}{im:+.3e}i lies within {distance:.1e} of the logarithm branch cut; \
         reduce tau so that all eigenphases stay away from ±pi"
    )]
    BranchCut { re: f64, im: f64, distance: f64 },

    #[error(
        "quadrature did not reach tolerance {tol:e}: estimated error {estimated_error:e} \
         after {evaluations} evaluations"
    )]
    QuadratureConvergence {
        tol: f64,
        estimated_error: f64,
        evaluations: usize,
        best: Box<CMatrix>,
    },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("root is not bracketed on ({lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFinite
                | Error::Singular
                | Error::BranchCut { .. }
                | Error::QuadratureConvergence { .. }
                | Error::NoConvergence(_)
                | Error::NoBracket { .. }
        )
    }
}
