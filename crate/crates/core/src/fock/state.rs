// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{FockBasis, SparseOperator, C64};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum StatePayload {
    Pure(DVector<C64>),
    Mixed(DMatrix<C64>),
}

/// A state vector or density matrix over a shared basis.
#[derive(Debug, Clone)]
pub struct QuantumState {
    basis: Arc<FockBasis>,
    payload: StatePayload,
}

impl QuantumState {
    pub fn pure(basis: Arc<FockBasis>, psi: DVector<C64>) -> Result<Self> {
        if psi.len() != basis.dim() {
            return Err(Error::InvalidState(format!(
                "vector length {} does not match basis dimension {}",
                psi.len(),
                basis.dim()
            )));
        }
        Ok(Self {
            basis,
            payload: StatePayload::Pure(psi),
        })
    }

    pub fn mixed(basis: Arc<FockBasis>, rho: DMatrix<C64>) -> Result<Self> {
        let dim = basis.dim();
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "density matrix is {}x{}, basis dimension {dim}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let scale = rho.iter().fold(0.0_f64, |m, z| m.max(z.norm())).max(f64::MIN_POSITIVE);
        let defect = (&rho - rho.adjoint()).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::InvalidState(format!(
                "density matrix not Hermitian (defect {defect:e})"
            )));
        }
        Ok(Self {
            basis,
            payload: StatePayload::Mixed(rho),
        })
    }

    /// Normalized occupation basis state.
    pub fn basis_state(basis: Arc<FockBasis>, occupation: &[u16]) -> Result<Self> {
        let k = basis.index_of(occupation).ok_or_else(|| {
            if occupation.len() != basis.num_modes() {
                Error::InvalidState(format!(
                    "occupation vector has {} entries, basis has {} modes",
                    occupation.len(),
                    basis.num_modes()
                ))
            } else {
                Error::CapViolation {
                    requested: basis.weighted_total(occupation),
                    cap: basis.excitation_cap(),
                }
            }
        })?;
        let mut psi = DVector::zeros(basis.dim());
        psi[k] = C64::new(1.0, 0.0);
        Self::pure(basis, psi)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn payload(&self) -> &StatePayload {
        &self.payload
    }

    pub fn as_pure(&self) -> Option<&DVector<C64>> {
        match &self.payload {
            StatePayload::Pure(psi) => Some(psi),
            StatePayload::Mixed(_) => None,
        }
    }

    pub fn as_mixed(&self) -> Option<&DMatrix<C64>> {
        match &self.payload {
            StatePayload::Mixed(rho) => Some(rho),
            StatePayload::Pure(_) => None,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.payload, StatePayload::Pure(_))
    }

    /// `|psi><psi|` for pure inputs, a copy otherwise.
    pub fn to_density(&self) -> DMatrix<C64> {
        match &self.payload {
            StatePayload::Pure(psi) => psi * psi.adjoint(),
            StatePayload::Mixed(rho) => rho.clone(),
        }
    }

    /// `<psi|psi>` or `Tr rho`.
    pub fn norm_sqr(&self) -> f64 {
        match &self.payload {
            StatePayload::Pure(psi) => psi.norm_squared(),
            StatePayload::Mixed(rho) => rho.trace().re,
        }
    }

    /// Probability weight of every basis state, normalized to sum 1.
    pub fn populations(&self) -> Result<Vec<f64>> {
        let norm = self.norm_sqr();
        if !(norm > 0.0) {
            return Err(Error::ZeroNorm);
        }
        Ok(match &self.payload {
            StatePayload::Pure(psi) => psi.iter().map(|z| z.norm_sqr() / norm).collect(),
            StatePayload::Mixed(rho) => (0..rho.nrows()).map(|k| rho[(k, k)].re / norm).collect(),
        })
    }

    /// `<O>` divided by the state norm (pure) or trace (mixed).
    pub fn expectation(&self, op: &SparseOperator) -> Result<C64> {
        if !(Arc::ptr_eq(&self.basis, op.basis()) || *self.basis == **op.basis()) {
            return Err(Error::BasisMismatch {
                left: self.basis.to_string(),
                right: op.basis().to_string(),
            });
        }
        let norm = self.norm_sqr();
        if !(norm > 0.0) {
            return Err(Error::ZeroNorm);
        }
        let value = match &self.payload {
            StatePayload::Pure(psi) => {
                let mut acc = C64::new(0.0, 0.0);
                for (r, c, v) in op.entries() {
                    acc += psi[r].conj() * v * psi[c];
                }
                acc
            }
            StatePayload::Mixed(rho) => {
                let mut acc = C64::new(0.0, 0.0);
                for (r, c, v) in op.entries() {
                    acc += v * rho[(c, r)];
                }
                acc
            }
        };
        Ok(value / norm)
    }
}
