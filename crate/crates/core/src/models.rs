// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonians and collapse channels of the microscopic cavity array and
//! of the effective Bose-Hubbard lattice.
//!
//! The full model replaces the collective Dicke operators of each cavity by
//! independent bosonic modes `b2`, `b3`, `b4`, which is exact to leading
//! order in (excitations / N).

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, ModeSpec, QuantumState, SparseOperator, C64};
use crate::params::{DerivedParams, LatticeSpec, PhysicalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Full,
    BoseHubbard,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Full => "full",
            ModelKind::BoseHubbard => "bose_hubbard",
        }
    }
}

/// How the drive-dependent part of the Hamiltonian scales with Ω(t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveLaw {
    /// `H = h_static + (Ω/Ω_ref) h_drive`.
    Linear,
    /// `H = h_static + (Ω_ref/Ω)² h_drive`, the scaling of U and κ.
    InverseSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LossMode {
    /// Γ_C on every photon.
    #[default]
    Linear,
    /// Γ_C plus a two-photon channel `a²` at half the pair-loss rate.
    LinearPlusPair,
}

impl std::str::FromStr for LossMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(LossMode::Linear),
            "linear_plus_pair" => Ok(LossMode::LinearPlusPair),
            other => Err(Error::Config(format!(
                "loss_mode must be `linear` or `linear_plus_pair`, got `{other}`"
            ))),
        }
    }
}

impl LossMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            LossMode::Linear => "linear",
            LossMode::LinearPlusPair => "linear_plus_pair",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CollapseChannel {
    pub label: String,
    pub op: SparseOperator,
    pub rate: f64,
}

#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub kind: ModelKind,
    pub basis: Arc<FockBasis>,
    pub h_static: SparseOperator,
    pub h_drive: SparseOperator,
    pub drive_law: DriveLaw,
    pub omega_ref: f64,
    pub collapse: Vec<CollapseChannel>,
    sites: usize,
    photon_modes: Vec<usize>,
}

impl ModelInstance {
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Basis mode index of the photon in cavity `site`.
    pub fn photon_mode(&self, site: usize) -> usize {
        self.photon_modes[site]
    }

    pub fn drive_factor(&self, omega: f64) -> f64 {
        match self.drive_law {
            DriveLaw::Linear => omega / self.omega_ref,
            DriveLaw::InverseSquare => {
                let r = self.omega_ref / omega;
                r * r
            }
        }
    }

    pub fn hamiltonian_at(&self, omega: f64) -> SparseOperator {
        self.h_static
            .add(&self.h_drive.scale_real(self.drive_factor(omega)))
            .expect("model operators share one basis")
            .with_hermitian_hint(true)
    }

    /// Same model with the drive folded into the static part at a fixed Ω.
    pub fn frozen(&self, omega: f64) -> Self {
        let h_static = self.hamiltonian_at(omega);
        Self {
            h_drive: SparseOperator::zero(self.basis.clone()),
            h_static,
            omega_ref: omega,
            ..self.clone()
        }
    }

    pub fn weighted_number(&self) -> SparseOperator {
        SparseOperator::weighted_number(self.basis.clone())
    }

    pub fn photon_number(&self, site: usize) -> SparseOperator {
        SparseOperator::number(self.basis.clone(), self.photon_modes[site])
            .expect("photon modes are in range")
    }

    /// Channels with a strictly positive rate.
    pub fn active_channels(&self) -> impl Iterator<Item = &CollapseChannel> {
        self.collapse.iter().filter(|c| c.rate > 0.0)
    }

    /// Product state with the given photon numbers and every atomic mode empty.
    pub fn initial_state(&self, photons_per_cavity: &[u32]) -> Result<QuantumState> {
        if photons_per_cavity.len() != self.sites {
            return Err(Error::InvalidState(format!(
                "expected {} photon numbers, got {}",
                self.sites,
                photons_per_cavity.len()
            )));
        }
        let total: u32 = photons_per_cavity.iter().sum();
        let cap = self.basis.excitation_cap();
        if total > cap {
            return Err(Error::CapViolation {
                requested: total,
                cap,
            });
        }
        let mut occupation = vec![0u16; self.basis.num_modes()];
        for (site, &n) in photons_per_cavity.iter().enumerate() {
            occupation[self.photon_modes[site]] = n as u16;
        }
        QuantumState::basis_state(self.basis.clone(), &occupation)
    }
}

fn check_cap(cap: u32) -> Result<()> {
    if cap < 1 {
        return Err(Error::InvalidParameter {
            field: "cap",
            reason: "must be >= 1".into(),
        });
    }
    Ok(())
}

/// Collects `(row, col, value)` entries of a Hamiltonian term by term.
struct TermBuilder {
    basis: Arc<FockBasis>,
    triplets: Vec<(usize, usize, C64)>,
}

impl TermBuilder {
    fn new(basis: &Arc<FockBasis>) -> Self {
        Self {
            basis: basis.clone(),
            triplets: Vec::new(),
        }
    }

    fn add(&mut self, op: &SparseOperator, coefficient: f64) {
        if coefficient != 0.0 {
            self.triplets
                .extend(op.entries().map(|(r, c, v)| (r, c, v * coefficient)));
        }
    }

    /// Adds `coefficient (X + X†)`.
    fn add_with_adjoint(&mut self, op: &SparseOperator, coefficient: f64) {
        if coefficient != 0.0 {
            self.add(op, coefficient);
            self.add(&op.adjoint(), coefficient);
        }
    }

    fn finish(self) -> SparseOperator {
        SparseOperator::from_triplets(self.basis, self.triplets, true)
            .expect("terms are built on the same basis")
    }
}

fn ops_product(basis: &Arc<FockBasis>, factors: &[SparseOperator]) -> SparseOperator {
    let mut acc = SparseOperator::identity(basis.clone());
    for f in factors {
        acc = acc.compose(f).expect("same basis");
    }
    acc
}

fn add_hopping(h: &mut TermBuilder, lattice: &LatticeSpec, photon_modes: &[usize]) -> Result<()> {
    for (l, m) in lattice.neighbor_pairs() {
        let hop = SparseOperator::raise(&h.basis, photon_modes[l])?
            .compose(&SparseOperator::lower(&h.basis, photon_modes[m])?)?;
        h.add_with_adjoint(&hop, lattice.hopping);
    }
    Ok(())
}

/// Full microscopic model: per cavity modes `a`, `b2`, `b3`, `b4` with
/// excitation weights 1, 1, 1, 2.
pub fn build_full(params: &PhysicalParams, lattice: &LatticeSpec, cap: u32) -> Result<ModelInstance> {
    params.validate()?;
    lattice.validate()?;
    check_cap(cap)?;
    let mut modes = Vec::with_capacity(4 * lattice.sites);
    for l in 0..lattice.sites {
        for (name, weight) in [("a", 1), ("b2", 1), ("b3", 1), ("b4", 2)] {
            modes.push(ModeSpec::new(format!("{name}[{l}]"), weight, cap / weight));
        }
    }
    let basis = Arc::new(FockBasis::new(modes, cap)?);
    let mut h_static = TermBuilder::new(&basis);
    let mut h_drive = TermBuilder::new(&basis);
    let mut collapse = Vec::new();
    let mut photon_modes = Vec::with_capacity(lattice.sites);

    for l in 0..lattice.sites {
        let site = lattice.site_params(params, l);
        let (ia, i2, i3, i4) = (4 * l, 4 * l + 1, 4 * l + 2, 4 * l + 3);
        photon_modes.push(ia);
        let lower = |m| SparseOperator::lower(&basis, m);
        let raise = |m| SparseOperator::raise(&basis, m);
        let number = |m| SparseOperator::number(basis.clone(), m);

        let eps = site.two_photon_detuning;
        h_static.add(&number(i2)?, eps);
        h_static.add(&number(i3)?, site.level3_detuning);
        h_static.add(&number(i4)?, site.level4_detuning + eps);
        h_static.add(&number(ia)?, lattice.cavity_detuning(l));

        h_static.add_with_adjoint(&raise(ia)?.compose(&lower(i3)?)?, site.collective_coupling());
        let pair = ops_product(&basis, &[raise(ia)?, raise(i2)?, lower(i4)?]);
        h_static.add_with_adjoint(&pair, site.g24);
        h_drive.add_with_adjoint(&raise(i2)?.compose(&lower(i3)?)?, site.omega);

        collapse.push(CollapseChannel {
            label: format!("a[{l}]"),
            op: lower(ia)?,
            rate: params.cavity_decay,
        });
        collapse.push(CollapseChannel {
            label: format!("b4[{l}]"),
            op: lower(i4)?,
            rate: params.level4_decay,
        });
    }
    add_hopping(&mut h_static, lattice, &photon_modes)?;

    Ok(ModelInstance {
        kind: ModelKind::Full,
        basis,
        h_static: h_static.finish(),
        h_drive: h_drive.finish(),
        drive_law: DriveLaw::Linear,
        omega_ref: params.omega,
        collapse,
        sites: lattice.sites,
        photon_modes,
    })
}

/// Couplings of the effective lattice model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoseHubbardSpec {
    pub u: f64,
    pub kappa: f64,
    pub loss_mode: LossMode,
    pub gamma_linear: f64,
    pub gamma_pair: f64,
    /// Drive strength at which `u` and `kappa` apply.
    pub omega_ref: f64,
}

impl BoseHubbardSpec {
    pub fn from_derived(derived: &DerivedParams, omega: f64, loss_mode: LossMode) -> Self {
        Self {
            u: derived.u,
            kappa: derived.kappa,
            loss_mode,
            gamma_linear: derived.gamma_linear,
            gamma_pair: derived.gamma_pair_coeff,
            omega_ref: omega,
        }
    }
}

/// `H = U Σ a†a†aa + J Σ (a_l† a_l' + h.c.) + κ Σ a†a`, with U and κ in the
/// drive part so that a ramp rescales them as Ω⁻².
pub fn build_bose_hubbard(spec: &BoseHubbardSpec, lattice: &LatticeSpec, cap: u32) -> Result<ModelInstance> {
    lattice.validate()?;
    check_cap(cap)?;
    for (field, v) in [
        ("U", spec.u),
        ("kappa", spec.kappa),
        ("gamma_linear", spec.gamma_linear),
        ("gamma_pair", spec.gamma_pair),
    ] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                field,
                reason: "must be finite".into(),
            });
        }
    }
    if spec.gamma_linear < 0.0 || spec.gamma_pair < 0.0 {
        return Err(Error::InvalidParameter {
            field: "gamma",
            reason: "loss rates must be >= 0".into(),
        });
    }
    if !(spec.omega_ref > 0.0) {
        return Err(Error::InvalidParameter {
            field: "Omega",
            reason: "reference drive must be > 0".into(),
        });
    }
    let modes = (0..lattice.sites)
        .map(|l| ModeSpec::new(format!("a[{l}]"), 1, cap))
        .collect();
    let basis = Arc::new(FockBasis::new(modes, cap)?);
    let photon_modes: Vec<usize> = (0..lattice.sites).collect();
    let mut h_static = TermBuilder::new(&basis);
    let mut h_drive = TermBuilder::new(&basis);
    let mut collapse = Vec::new();
    for l in 0..lattice.sites {
        let a = SparseOperator::lower(&basis, l)?;
        let ad = SparseOperator::raise(&basis, l)?;
        let n = SparseOperator::number(basis.clone(), l)?;
        h_drive.add(&ops_product(&basis, &[ad.clone(), ad, a.clone(), a.clone()]), spec.u);
        h_drive.add(&n, spec.kappa);
        h_static.add(&n, lattice.cavity_detuning(l));
        collapse.push(CollapseChannel {
            label: format!("a[{l}]"),
            op: a.clone(),
            rate: spec.gamma_linear,
        });
        if spec.loss_mode == LossMode::LinearPlusPair {
            collapse.push(CollapseChannel {
                label: format!("a[{l}]^2"),
                op: a.compose(&a)?,
                rate: 0.5 * spec.gamma_pair,
            });
        }
    }
    add_hopping(&mut h_static, lattice, &photon_modes)?;
    Ok(ModelInstance {
        kind: ModelKind::BoseHubbard,
        basis,
        h_static: h_static.finish(),
        h_drive: h_drive.finish(),
        drive_law: DriveLaw::InverseSquare,
        omega_ref: spec.omega_ref,
        collapse,
        sites: lattice.sites,
        photon_modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive, Boundary};
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    fn sector_eigenvalues(model: &ModelInstance, n: u32) -> Vec<f64> {
        let h = model.hamiltonian_at(model.omega_ref);
        let block = h.restrict(model.basis.sector(n));
        let mut e: Vec<f64> = block.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    fn fig2_bh(loss: LossMode) -> (ModelInstance, DerivedParams) {
        let p = PhysicalParams::mott_insulator();
        let d = derive(&p).unwrap();
        let lattice = LatticeSpec::new(3, 1.2e6, Boundary::Periodic);
        let model = build_bose_hubbard(&BoseHubbardSpec::from_derived(&d, p.omega, loss), &lattice, 3).unwrap();
        (model, d)
    }

    #[test]
    fn full_three_site_dimension_and_pairs() {
        let lattice = LatticeSpec::new(3, 1.2e6, Boundary::Periodic);
        let model = build_full(&PhysicalParams::mott_insulator(), &lattice, 3).unwrap();
        assert_eq!(model.basis.dim(), 250);
        assert_eq!(lattice.neighbor_pairs(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(model.collapse.len(), 6);
    }

    #[test]
    fn one_excitation_spectrum_without_level4() {
        let p = PhysicalParams {
            g24: 0.0,
            ..PhysicalParams::mott_insulator()
        };
        let d = derive(&p).unwrap();
        let model = build_full(&p, &LatticeSpec::single(), 2).unwrap();
        let e = sector_eigenvalues(&model, 1);
        let mut expected = vec![d.mu_minus, 0.0, d.mu_plus];
        expected.sort_by(f64::total_cmp);
        assert!((e[1] - 0.0).abs() < 1e-6 * d.mu_plus);
        assert_relative_eq!(e[0], expected[0], max_relative = 1e-6);
        assert_relative_eq!(e[2], expected[2], max_relative = 1e-6);
        assert_relative_eq!(e[2], 1.633e12, max_relative = 1e-3);
        assert_relative_eq!(e[0], -1.533e12, max_relative = 1e-3);
    }

    #[test]
    fn hamiltonians_are_hermitian_and_conserve_excitations() {
        let lattice = LatticeSpec::new(3, 1.2e6, Boundary::Periodic);
        let full = build_full(&PhysicalParams::mott_insulator(), &lattice, 3).unwrap();
        let (bh, _) = fig2_bh(LossMode::LinearPlusPair);
        for model in [&full, &bh] {
            let n = model.weighted_number();
            for omega in [0.5, 1.0, 3.0].map(|s| s * model.omega_ref) {
                let h = model.hamiltonian_at(omega);
                assert!(h.hermiticity_defect() < 1e-12);
                let comm = h.commutator(&n).unwrap();
                assert!(comm.max_abs() < 1e-9 * h.max_abs());
            }
        }
    }

    #[test]
    fn jump_free_number_is_conserved() {
        let p = PhysicalParams::mott_insulator();
        let lattice = LatticeSpec::new(3, 0.0, Boundary::Periodic);
        let model = build_full(&p, &lattice, 3).unwrap();
        let psi0 = model.initial_state(&[1, 1, 1]).unwrap();
        let n = model.weighted_number();
        // the occupied sector is invariant, so <N> stays 3 under any evolution
        let h = model.hamiltonian_at(p.omega).to_dense();
        let psi = psi0.as_pure().unwrap();
        let step = (h * psi).map(|z| z * C64::new(0.0, -1e-13)) + psi;
        let state = QuantumState::pure(model.basis.clone(), step).unwrap();
        assert_relative_eq!(state.expectation(&n).unwrap().re, 3.0, max_relative = 1e-12);
    }

    #[test]
    fn bose_hubbard_dimension_and_interaction() {
        let (model, d) = fig2_bh(LossMode::Linear);
        assert_eq!(model.basis.dim(), 20);
        let s = model.initial_state(&[2, 0, 0]).unwrap();
        assert_relative_eq!(s.expectation(&model.h_drive).unwrap().re, 2.0 * d.u, max_relative = 1e-14);
    }

    #[test]
    fn chemical_potential_on_unit_filling() {
        let p = PhysicalParams::mott_insulator();
        let spec = BoseHubbardSpec {
            u: 0.0,
            kappa: 3.5e5,
            loss_mode: LossMode::Linear,
            gamma_linear: 0.0,
            gamma_pair: 0.0,
            omega_ref: p.omega,
        };
        let lattice = LatticeSpec::new(3, 0.0, Boundary::Periodic);
        let model = build_bose_hubbard(&spec, &lattice, 3).unwrap();
        let s = model.initial_state(&[1, 1, 1]).unwrap();
        let h = model.hamiltonian_at(p.omega);
        assert_relative_eq!(s.expectation(&h).unwrap().re, 3.0 * 3.5e5, max_relative = 1e-14);
    }

    #[test]
    fn atomic_limit_gap_is_2u() {
        let p = PhysicalParams::mott_insulator();
        let d = derive(&p).unwrap();
        let spec = BoseHubbardSpec::from_derived(&d, p.omega, LossMode::Linear);
        let model = build_bose_hubbard(&spec, &LatticeSpec::new(3, 0.0, Boundary::Periodic), 3).unwrap();
        let e = sector_eigenvalues(&model, 3);
        assert!(e[0].abs() < 1e-6);
        let above: Vec<f64> = e.iter().copied().filter(|&x| x > 1.0).collect();
        assert_relative_eq!(above[0], 2.0 * d.u, max_relative = 1e-12);
    }

    #[test]
    fn ramp_rescales_interaction() {
        let (model, d) = fig2_bh(LossMode::Linear);
        let s = model.initial_state(&[2, 0, 0]).unwrap();
        let h = model.hamiltonian_at(10.0 * model.omega_ref);
        assert_relative_eq!(s.expectation(&h).unwrap().re, 2.0 * d.u / 100.0, max_relative = 1e-12);
    }

    #[test]
    fn pair_channel_rate() {
        let (model, d) = fig2_bh(LossMode::LinearPlusPair);
        let s = model.initial_state(&[2, 0, 0]).unwrap();
        let psi = s.as_pure().unwrap();
        let total: f64 = model
            .collapse
            .iter()
            .map(|c| {
                let v = DVector::from_vec(c.op.apply_vec(psi.as_slice()));
                c.rate * v.norm_squared()
            })
            .sum();
        assert_relative_eq!(total, 2.0 * d.gamma_linear + d.gamma_pair_coeff, max_relative = 1e-12);
    }

    #[test]
    fn initial_states() {
        let (model, _) = fig2_bh(LossMode::Linear);
        let s = model.initial_state(&[1, 1, 1]).unwrap();
        for l in 0..3 {
            assert_eq!(s.expectation(&model.photon_number(l)).unwrap().re, 1.0);
        }
        let vac = model.initial_state(&[0, 0, 0]).unwrap();
        assert_eq!(vac.as_pure().unwrap()[0], C64::new(1.0, 0.0));
        assert!(matches!(
            model.initial_state(&[3, 1, 0]),
            Err(Error::CapViolation { requested: 4, cap: 3 })
        ));
        let p = PhysicalParams::mott_insulator();
        let d = derive(&p).unwrap();
        let bigger = build_bose_hubbard(
            &BoseHubbardSpec::from_derived(&d, p.omega, LossMode::Linear),
            &LatticeSpec::new(3, 1.2e6, Boundary::Periodic),
            4,
        )
        .unwrap();
        assert!(bigger.initial_state(&[3, 1, 0]).is_ok());
    }

    #[test]
    fn frozen_model_matches_at_reference() {
        let (model, _) = fig2_bh(LossMode::Linear);
        let frozen = model.frozen(model.omega_ref);
        assert_eq!(
            frozen.hamiltonian_at(frozen.omega_ref).max_abs_diff(&model.hamiltonian_at(model.omega_ref)).unwrap(),
            0.0
        );
    }

    #[test]
    fn open_chain_has_no_wraparound() {
        let p = PhysicalParams::mott_insulator();
        let d = derive(&p).unwrap();
        let lattice = LatticeSpec::new(3, 1.0e6, Boundary::Open);
        let model = build_bose_hubbard(&BoseHubbardSpec::from_derived(&d, p.omega, LossMode::Linear), &lattice, 1).unwrap();
        let h = model.h_static.to_dense();
        let i0 = model.basis.index_of(&[1, 0, 0]).unwrap();
        let i2 = model.basis.index_of(&[0, 0, 1]).unwrap();
        let i1 = model.basis.index_of(&[0, 1, 0]).unwrap();
        assert_eq!(h[(i0, i2)], C64::new(0.0, 0.0));
        assert_eq!(h[(i0, i1)], C64::new(1.0e6, 0.0));
    }
}
