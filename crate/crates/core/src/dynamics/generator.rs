// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense effective Hamiltonians and Lindblad right-hand sides.

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut, DVectorView, DVectorViewMut};

use super::rk::OdeSystem;
use crate::fock::{SparseOperator, C64};
use crate::models::ModelInstance;
use crate::params::DriveRamp;

const I: C64 = C64::new(0.0, 1.0);

pub(crate) struct Channel {
    pub index: usize,
    pub rate: f64,
    pub op: SparseOperator,
    pub dense: DMatrix<C64>,
}

/// `H_eff(t) = h_static + f(Ω(t)) h_drive - (i/2) Σ γ L†L` in dense form.
pub(crate) struct Generator<'a> {
    pub model: &'a ModelInstance,
    pub ramp: DriveRamp,
    h_static: DMatrix<C64>,
    h_drive: DMatrix<C64>,
    decay: DMatrix<C64>,
    constant: Option<DMatrix<C64>>,
    pub channels: Vec<Channel>,
}

impl<'a> Generator<'a> {
    pub fn new(model: &'a ModelInstance, ramp: &DriveRamp) -> Self {
        let dim = model.basis.dim();
        let mut decay = DMatrix::zeros(dim, dim);
        let mut channels = Vec::new();
        for (index, c) in model.collapse.iter().enumerate() {
            if c.rate <= 0.0 {
                continue;
            }
            let dense = c.op.to_dense();
            decay += dense.adjoint() * &dense * C64::new(c.rate, 0.0);
            channels.push(Channel {
                index,
                rate: c.rate,
                op: c.op.clone(),
                dense,
            });
        }
        let h_static = model.h_static.to_dense();
        let h_drive = model.h_drive.to_dense();
        let mut generator = Self {
            model,
            ramp: ramp.clone(),
            h_static,
            h_drive,
            decay,
            constant: None,
            channels,
        };
        if ramp.is_constant() {
            generator.constant = Some(generator.assemble(model.drive_factor(ramp.initial())));
        }
        generator
    }

    pub fn dim(&self) -> usize {
        self.h_static.nrows()
    }

    fn assemble(&self, factor: f64) -> DMatrix<C64> {
        let f = C64::new(factor, 0.0);
        let half = C64::new(0.0, -0.5);
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            self.h_static[(r, c)] + self.h_drive[(r, c)] * f + self.decay[(r, c)] * half
        })
    }

    pub fn factor_at(&self, t: f64) -> f64 {
        self.model.drive_factor(self.ramp.at(t))
    }

    /// Effective Hamiltonian at drive factor `factor`.
    pub fn h_eff_with_factor(&self, factor: f64) -> DMatrix<C64> {
        self.assemble(factor)
    }

    pub fn h_eff(&self, t: f64) -> std::borrow::Cow<'_, DMatrix<C64>> {
        match &self.constant {
            Some(h) => std::borrow::Cow::Borrowed(h),
            None => std::borrow::Cow::Owned(self.assemble(self.factor_at(t))),
        }
    }

    /// Largest absolute row sum of `H_eff` over the ramp knots, a bound on
    /// the fastest frequency in the problem.
    pub fn frequency_bound(&self) -> f64 {
        let row_bound = |m: &DMatrix<C64>| {
            (0..m.nrows())
                .map(|r| m.row(r).iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0_f64, f64::max)
        };
        self.ramp
            .knots()
            .iter()
            .map(|&(_, omega)| row_bound(&self.assemble(self.model.drive_factor(omega))))
            .fold(0.0_f64, f64::max)
    }
}

/// Schrödinger equation with the non-Hermitian effective Hamiltonian.
pub(crate) struct NoJumpSystem<'g, 'a> {
    pub generator: &'g Generator<'a>,
}

impl OdeSystem for NoJumpSystem<'_, '_> {
    fn rhs(&self, t: f64, y: &[C64], dy: &mut [C64]) {
        let h = self.generator.h_eff(t);
        let x = DVectorView::from_slice(y, y.len());
        let mut out = DVectorViewMut::from_slice(dy, y.len());
        out.gemv(-I, &h, &x, C64::new(0.0, 0.0));
    }
}

/// Lindblad equation on a column-major density matrix.
pub(crate) struct LindbladSystem<'g, 'a> {
    pub generator: &'g Generator<'a>,
}

impl OdeSystem for LindbladSystem<'_, '_> {
    fn rhs(&self, t: f64, y: &[C64], dy: &mut [C64]) {
        let n = self.generator.dim();
        let h = self.generator.h_eff(t);
        let rho = DMatrixView::from_slice(y, n, n);
        let x = (&*h * rho) * (-I);
        let mut jumps = DMatrix::<C64>::zeros(n, n);
        for ch in &self.generator.channels {
            let l_rho = &ch.dense * rho;
            jumps += (l_rho * ch.dense.adjoint()) * C64::new(ch.rate, 0.0);
        }
        let mut out = DMatrixViewMut::from_slice(dy, n, n);
        // Both halves are assembled from mirrored entries so that the
        // derivative, and hence every RK stage, is exactly Hermitian.
        for c in 0..n {
            for r in 0..n {
                let coherent = x[(r, c)] + x[(c, r)].conj();
                let jump = (jumps[(r, c)] + jumps[(c, r)].conj()) * 0.5;
                out[(r, c)] = coherent + jump;
            }
        }
    }
}
