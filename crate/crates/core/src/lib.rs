// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic Liouville-space simulation of pseudo twirling (PST) for
//! multi-qubit non-Clifford gates.
//!
//! The crate builds the exact twirl-averaged channel of a Pauli drive with
//! coherent errors and optional Lindblad noise, extracts its effective
//! Hamiltonian in the Pauli basis, evaluates the first two Magnus terms of
//! the twirled error, and inverts the resulting over-rotation law for gate
//! calibration.

pub mod config;
pub mod error;
pub mod experiments;
pub mod liouville;
pub mod magnus;
pub mod numerics;
pub mod pauli;
pub mod pst;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use liouville::{NoiseKind, NoiseSpec, Superoperator};
pub use magnus::{CoherentErrorSpec, DriveSpec};
pub use numerics::CMatrix;
pub use pauli::PauliString;
pub use pst::{EffectiveGenerator, PSTRealization};
