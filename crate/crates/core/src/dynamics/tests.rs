// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

use approx::assert_relative_eq;
use nalgebra::DVector;

use super::*;
use crate::fock::C64;
use crate::models::{build_bose_hubbard, build_full, BoseHubbardSpec, LossMode, ModelInstance};
use crate::observables::photon_number;
use crate::params::{derive, Boundary, DriveRamp, LatticeSpec, PhysicalParams};

fn bh(u: f64, gamma: f64, sites: usize, hopping: f64, cap: u32) -> ModelInstance {
    let spec = BoseHubbardSpec {
        u,
        kappa: 0.0,
        loss_mode: LossMode::Linear,
        gamma_linear: gamma,
        gamma_pair: 0.0,
        omega_ref: 1.0,
    };
    build_bose_hubbard(&spec, &LatticeSpec::new(sites, hopping, Boundary::Periodic), cap).unwrap()
}

#[test]
fn master_decay_is_exponential() {
    let model = bh(0.0, 2.0, 1, 0.0, 1);
    let psi0 = model.initial_state(&[1]).unwrap();
    let cfg = IntegratorConfig::uniform(1.0, 11);
    let record = evolve_master(&model, &DriveRamp::constant(1.0), &psi0, &cfg).unwrap();
    for (t, state) in record.times.iter().zip(&record.states) {
        let rho = state.as_mixed().unwrap();
        let expected = (-2.0 * t).exp();
        assert!((rho[(1, 1)].re - expected).abs() < 1e-7, "t = {t}");
        assert!((state.norm_sqr() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn trajectory_decay_matches_within_errors() {
    let model = bh(0.0, 2.0, 1, 0.0, 1);
    let psi0 = model.initial_state(&[1]).unwrap();
    let cfg = IntegratorConfig::uniform(1.0, 11).with_seed(7);
    let stats = run_ensemble(&model, &DriveRamp::constant(1.0), &psi0, &cfg, 1000).unwrap();
    for (k, t) in stats.times.iter().enumerate() {
        let expected = (-2.0 * t).exp();
        let (m, se) = (stats.n_mean[0][k], stats.n_se[0][k]);
        assert!((m - expected).abs() <= 3.0 * se + 1e-6, "t = {t}: {m} vs {expected} (se {se})");
    }
}

#[test]
fn unitary_master_stays_pure() {
    let model = bh(1.0, 0.0, 2, 0.7, 2);
    let psi0 = model.initial_state(&[1, 1]).unwrap();
    let cfg = IntegratorConfig::uniform(3.0, 7);
    let record = evolve_master(&model, &DriveRamp::constant(1.0), &psi0, &cfg).unwrap();
    for state in &record.states {
        let rho = state.as_mixed().unwrap();
        let purity = (rho * rho).trace().re;
        assert!((purity - 1.0).abs() < 1e-7);
    }
}

#[test]
fn trajectory_without_channels_keeps_norm() {
    let model = bh(1.0, 0.0, 2, 0.7, 2);
    let psi0 = model.initial_state(&[1, 1]).unwrap();
    let cfg = IntegratorConfig::uniform(3.0, 7);
    let record = evolve_trajectory(&model, &DriveRamp::constant(1.0), &psi0, &cfg).unwrap();
    assert!(record.jumps.is_empty());
    for s in &record.survival {
        assert!((s - 1.0).abs() < 1e-7);
    }
}

#[test]
fn trajectory_matches_master_without_losses() {
    let model = bh(1.3, 0.0, 2, 0.7, 2);
    let psi0 = model.initial_state(&[2, 0]).unwrap();
    let cfg = IntegratorConfig::uniform(2.0, 5);
    let ramp = DriveRamp::constant(1.0);
    let master = evolve_master(&model, &ramp, &psi0, &cfg).unwrap();
    let traj = evolve_trajectory(&model, &ramp, &psi0, &cfg).unwrap();
    let expo = evolve_trajectory(&model, &ramp, &psi0, &cfg.clone().with_propagator(Propagator::Exponential)).unwrap();
    for k in 0..cfg.sample_times.len() {
        let n_master = photon_number(&master.states[k], 0).unwrap();
        assert!((photon_number(&traj.states[k], 0).unwrap() - n_master).abs() < 1e-6);
        assert!((photon_number(&expo.states[k], 0).unwrap() - n_master).abs() < 1e-6);
    }
}

#[test]
fn constant_ramp_equals_frozen_model() {
    let model = bh(1.0, 0.3, 2, 0.5, 2);
    let frozen = model.frozen(0.8);
    let psi0 = model.initial_state(&[1, 1]).unwrap();
    let cfg = IntegratorConfig::uniform(2.0, 5).with_seed(3);
    let a = evolve_trajectory(&model, &DriveRamp::constant(0.8), &psi0, &cfg).unwrap();
    let b = evolve_trajectory(&frozen, &DriveRamp::constant(0.8), &psi0, &cfg).unwrap();
    assert_eq!(a.survival, b.survival);
    assert_eq!(a.jumps, b.jumps);
    for (x, y) in a.states.iter().zip(&b.states) {
        assert_eq!(x.as_pure(), y.as_pure());
    }
}

#[test]
fn single_trajectory_ensemble_is_stream_zero() {
    let model = bh(1.0, 0.5, 2, 0.5, 2);
    let psi0 = model.initial_state(&[1, 1]).unwrap();
    let cfg = IntegratorConfig::uniform(2.0, 5).with_seed(11);
    let ramp = DriveRamp::constant(1.0);
    let stats = run_ensemble(&model, &ramp, &psi0, &cfg, 1).unwrap();
    let record = evolve_trajectory(&model, &ramp, &psi0, &cfg).unwrap();
    for k in 0..record.times.len() {
        assert_eq!(stats.n_mean[0][k], photon_number(&record.states[k], 0).unwrap());
        assert_eq!(stats.survival_mean[k], record.survival[k]);
    }
    assert_eq!(stats.jump_counts, vec![record.jumps.len()]);
}

#[test]
fn ensemble_independent_of_thread_count() {
    let model = bh(1.0, 0.5, 2, 0.5, 2);
    let psi0 = model.initial_state(&[1, 1]).unwrap();
    let cfg = IntegratorConfig::uniform(2.0, 5).with_seed(5);
    let ramp = DriveRamp::linear(0.0, 1.0, 2.0, 0.5).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_ensemble(&model, &ramp, &psi0, &cfg, 40).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

#[test]
fn master_state_is_physical() {
    let model = bh(1.0, 0.4, 2, 0.6, 5);
    assert!(model.basis.dim() >= 20);
    let psi0 = model.initial_state(&[3, 2]).unwrap();
    let cfg = IntegratorConfig::uniform(2.0, 9);
    let record = evolve_master(&model, &DriveRamp::constant(1.0), &psi0, &cfg).unwrap();
    for state in &record.states {
        let rho = state.as_mixed().unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-6);
        assert_eq!(rho, &rho.adjoint());
        let min = rho.clone().symmetric_eigen().eigenvalues.min();
        assert!(min >= -1e3 * cfg.rel_tol, "eigenvalue {min}");
    }
}

#[test]
fn survival_is_non_increasing() {
    let model = bh(1.0, 0.8, 2, 0.6, 3);
    let psi0 = model.initial_state(&[2, 1]).unwrap();
    let cfg = IntegratorConfig::uniform(3.0, 31).with_seed(2);
    for propagator in [Propagator::Rk45, Propagator::Exponential] {
        let record = evolve_trajectory(&model, &DriveRamp::constant(1.0), &psi0, &cfg.clone().with_propagator(propagator)).unwrap();
        assert!(record.survival.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        assert!(record.survival.iter().all(|&s| s > 0.0 && s <= 1.0 + 1e-12));
    }
}

#[test]
fn exponential_and_rk_agree_on_jump_free_ramp() {
    let model = bh(1.0, 0.05, 2, 0.6, 2);
    let psi0 = model.initial_state(&[1, 1]).unwrap();
    let ramp = DriveRamp::linear(0.0, 1.0, 1.0, 2.0).unwrap();
    let mut cfg = IntegratorConfig::uniform(1.0, 5).with_seed(0);
    cfg.exp_substeps = 200;
    let rk = evolve_trajectory(&model, &ramp, &psi0, &cfg.clone().with_propagator(Propagator::Rk45)).unwrap();
    let ex = evolve_trajectory(&model, &ramp, &psi0, &cfg.clone().with_propagator(Propagator::Exponential)).unwrap();
    assert!(rk.jumps.is_empty() && ex.jumps.is_empty());
    for k in 0..rk.times.len() {
        assert!((rk.survival[k] - ex.survival[k]).abs() < 1e-5);
        let overlap = rk.states[k].as_pure().unwrap().dotc(ex.states[k].as_pure().unwrap()).norm();
        assert!((overlap - 1.0).abs() < 1e-5);
    }
}

#[test]
fn exponential_requires_uniform_grid() {
    let model = bh(1.0, 0.2, 1, 0.0, 2);
    let psi0 = model.initial_state(&[1]).unwrap();
    let mut cfg = IntegratorConfig::uniform(1.0, 3).with_propagator(Propagator::Exponential);
    cfg.sample_times = vec![0.0, 0.2, 1.0];
    assert!(matches!(
        evolve_trajectory(&model, &DriveRamp::constant(1.0), &psi0, &cfg),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        evolve_master(&model, &DriveRamp::constant(1.0), &psi0, &IntegratorConfig::uniform(1.0, 3).with_propagator(Propagator::Exponential)),
        Err(Error::Config(_))
    ));
}

#[test]
fn mixed_initial_state_rejected_by_trajectories() {
    let model = bh(1.0, 0.2, 1, 0.0, 2);
    let rho = crate::fock::QuantumState::mixed(model.basis.clone(), model.initial_state(&[1]).unwrap().to_density()).unwrap();
    let cfg = IntegratorConfig::uniform(1.0, 3);
    assert!(matches!(
        evolve_trajectory(&model, &DriveRamp::constant(1.0), &rho, &cfg),
        Err(Error::InvalidState(_))
    ));
}

#[test]
fn full_model_survival_tracks_cavity_loss() {
    let params = PhysicalParams::mott_insulator();
    let derived = derive(&params).unwrap();
    let model = build_full(&params, &LatticeSpec::single(), 1).unwrap();
    let psi0 = model.initial_state(&[1]).unwrap();
    let t = 1e-6;
    let cfg = IntegratorConfig::uniform(t, 5);
    let ramp = DriveRamp::constant(params.omega);
    let solver = TrajectorySolver::new(&model, &ramp, &cfg).unwrap();
    assert!(solver.uses_exponential());
    let record = solver.run(&psi0, 0).unwrap();
    let expected = (-derived.gamma_linear * t).exp();
    let last = *record.survival.last().unwrap();
    assert!((last - expected).abs() / expected < 0.05, "{last} vs {expected}");
    let _ = DVector::<C64>::zeros(1);
    assert_relative_eq!(record.survival[0], 1.0, max_relative = 1e-12);
}
