// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Dark and bright polaritons of a single cavity, and an exact
//! diagonalization estimate of the photon-photon interaction.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, SparseOperator, C64};
use crate::models::{build_full, ModelInstance};
use crate::params::{derive, LatticeSpec, PhysicalParams};

/// Creation operators of the three one-excitation polaritons.
#[derive(Debug, Clone)]
pub struct PolaritonSet {
    pub p0_raise: SparseOperator,
    pub p_plus_raise: SparseOperator,
    pub p_minus_raise: SparseOperator,
    /// `(μ0, μ+, μ-)`.
    pub frequencies: (f64, f64, f64),
}

impl PolaritonSet {
    pub fn raise_ops(&self) -> [&SparseOperator; 3] {
        [&self.p0_raise, &self.p_plus_raise, &self.p_minus_raise]
    }

    pub fn frequency_list(&self) -> [f64; 3] {
        [self.frequencies.0, self.frequencies.1, self.frequencies.2]
    }
}

fn find_mode(basis: &FockBasis, name: &str) -> Result<usize> {
    basis
        .mode_index(&format!("{name}[0]"))
        .or_else(|_| basis.mode_index(name))
}

fn combination(basis: &Arc<FockBasis>, terms: &[(usize, f64)]) -> Result<SparseOperator> {
    let mut acc = SparseOperator::zero(basis.clone());
    for &(mode, c) in terms {
        acc = acc.add(&SparseOperator::raise(basis, mode)?.scale_real(c))?;
    }
    Ok(acc.with_hermitian_hint(false))
}

/// Builds `p0†`, `p+†`, `p-†` on a single-cavity basis whose modes are
/// labelled `a`, `b2`, `b3` (optionally suffixed `[0]`).
pub fn polariton_set(params: &PhysicalParams, basis: &Arc<FockBasis>) -> Result<PolaritonSet> {
    let d = derive(params)?;
    let ia = find_mode(basis, "a")?;
    let i2 = find_mode(basis, "b2")?;
    let i3 = find_mode(basis, "b3")?;
    let (g, omega, delta) = (d.g, params.omega, params.level3_detuning);
    let p0 = combination(basis, &[(i2, g / d.b), (ia, -omega / d.b)])?;
    let bright = |sign: f64| {
        let s = d.a + sign * delta;
        let norm = (2.0 / (d.a * s)).sqrt();
        combination(
            basis,
            &[(i2, norm * omega), (ia, norm * g), (i3, sign * norm * 0.5 * s)],
        )
    };
    Ok(PolaritonSet {
        p0_raise: p0,
        p_plus_raise: bright(1.0)?,
        p_minus_raise: bright(-1.0)?,
        frequencies: (d.mu_zero, d.mu_plus, d.mu_minus),
    })
}

fn vacuum(basis: &FockBasis) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); basis.dim()];
    v[basis.index_of(&vec![0; basis.num_modes()]).expect("vacuum is always admissible")] =
        C64::new(1.0, 0.0);
    v
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub frequencies: [f64; 3],
    /// `‖H p†|vac> - μ p†|vac>‖` for p0, p+, p-.
    pub residuals: [f64; 3],
    /// Largest residual divided by `max|μ±|`.
    pub max_relative_residual: f64,
}

/// Checks the polariton eigen-relations on a single-cavity model built
/// with `g24 = 0` and `ε = 0`.
pub fn spectrum_check(params: &PhysicalParams, model: &ModelInstance) -> Result<SpectrumReport> {
    let set = polariton_set(params, &model.basis)?;
    let h = model.hamiltonian_at(params.omega);
    let vac = vacuum(&model.basis);
    let mut residuals = [0.0; 3];
    for (k, (op, mu)) in set.raise_ops().into_iter().zip(set.frequency_list()).enumerate() {
        let v = op.apply_vec(&vac);
        let hv = h.apply_vec(&v);
        residuals[k] = hv
            .iter()
            .zip(&v)
            .map(|(x, y)| (x - y * mu).norm_sqr())
            .sum::<f64>()
            .sqrt();
    }
    let scale = set.frequencies.1.abs().max(set.frequencies.2.abs());
    let max_relative_residual = residuals.iter().fold(0.0_f64, |m, &r| m.max(r)) / scale;
    Ok(SpectrumReport {
        frequencies: set.frequency_list(),
        residuals,
        max_relative_residual,
    })
}

/// Eigen-decomposition of the Hamiltonian at drive `omega` restricted to
/// the weighted-excitation sector `n`. Eigenvector columns are in sector order.
pub fn sector_spectrum(model: &ModelInstance, omega: f64, n: u32) -> SymmetricEigen<C64, nalgebra::Dyn> {
    let block: DMatrix<C64> = model.hamiltonian_at(omega).restrict(model.basis.sector(n));
    block.symmetric_eigen()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShiftOracle {
    /// Dressed dark-polariton energies with one and two excitations.
    pub e1: f64,
    pub e2: f64,
    /// Squared overlaps of the selected eigenvectors with the bare dark states.
    pub overlap1: f64,
    pub overlap2: f64,
    /// `E2 - 2 E1`, the exact counterpart of `2U`.
    pub shift: f64,
}

fn dark_branch(
    model: &ModelInstance,
    omega: f64,
    dark: &[C64],
    n: u32,
) -> Result<(f64, f64)> {
    let indices = model.basis.sector(n);
    let mut target = DVector::from_iterator(indices.len(), indices.iter().map(|&k| dark[k]));
    let norm = target.norm();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    target /= C64::new(norm, 0.0);
    let eig = sector_spectrum(model, omega, n);
    let (mut best, mut energy) = (0.0, f64::NAN);
    for (j, &e) in eig.eigenvalues.iter().enumerate() {
        let overlap = eig.eigenvectors.column(j).dotc(&target).norm_sqr();
        if overlap > best {
            best = overlap;
            energy = e;
        }
    }
    if best < 0.5 {
        return Err(Error::DarkBranchNotIdentifiable {
            excitations: n,
            overlap: best,
        });
    }
    Ok((energy, best))
}

/// Exact one- and two-excitation dark-branch energies of a single cavity.
pub fn shift_oracle(params: &PhysicalParams, cap: u32) -> Result<ShiftOracle> {
    if cap < 2 {
        return Err(Error::InvalidParameter {
            field: "cap",
            reason: "the two-excitation sector needs cap >= 2".into(),
        });
    }
    let model = build_full(params, &LatticeSpec::single(), cap)?;
    let set = polariton_set(params, &model.basis)?;
    let one = set.p0_raise.apply_vec(&vacuum(&model.basis));
    let two = set.p0_raise.apply_vec(&one);
    let (e1, overlap1) = dark_branch(&model, params.omega, &one, 1)?;
    let (e2, overlap2) = dark_branch(&model, params.omega, &two, 2)?;
    Ok(ShiftOracle {
        e1,
        e2,
        overlap1,
        overlap2,
        shift: e2 - 2.0 * e1,
    })
}

/// `E2 - 2 E1` on the dressed dark branch; approximately `2U`.
pub fn nonlinear_shift_oracle(params: &PhysicalParams, cap: u32) -> Result<f64> {
    Ok(shift_oracle(params, cap)?.shift)
}
