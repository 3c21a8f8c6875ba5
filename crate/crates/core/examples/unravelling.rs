// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

// Quantum-jump trajectories average to the master-equation solution. The
// effective three-cavity model is solved both ways and the ensemble means
// of n1 and F1 are compared in units of their standard errors.
//
//     cargo run --release --example unravelling

use photonic_mott::config::Preset;
use photonic_mott::dynamics::{evolve_master, run_ensemble};
use photonic_mott::observables::master_series;
use photonic_mott::scenario::effective_model;
use photonic_mott::Result;

/// Largest `|ensemble - master| / SE` for n1 and F1, with the SE floored
/// at 1e-6 where every trajectory agrees.
fn run_example(n_traj: usize, gamma_c: f64) -> Result<(f64, f64)> {
    let mut config = Preset::Mott.config();
    config.physical.cavity_decay = gamma_c;
    config.samples = 21;
    let model = effective_model(&config)?;
    let ramp = config.ramp()?;
    let integrator = config.integrator();
    let psi0 = model.initial_state(&config.initial)?;
    let master = master_series(&evolve_master(&model, &ramp, &psi0, &integrator)?, &[0])?;
    let stats = run_ensemble(&model, &ramp, &psi0, &integrator, n_traj)?;
    let (mut zn, mut zf) = (0.0_f64, 0.0_f64);
    let n1 = master.column("n1").expect("n1");
    let f1 = master.column("F1").expect("F1");
    for k in 0..stats.times.len() {
        zn = zn.max((stats.n_mean[0][k] - n1[k]).abs() / stats.n_se[0][k].max(1e-6));
        zf = zf.max((stats.f_mean[0][k] - f1[k]).abs() / stats.f_se[0][k].max(1e-6));
    }
    println!(
        "dimension {}, {} trajectories, {} jumps: max deviation {:.2} SE (n1), {:.2} SE (F1)",
        model.basis.dim(),
        n_traj,
        stats.jump_counts.iter().sum::<usize>(),
        zn,
        zf
    );
    Ok((zn, zf))
}

fn main() -> Result<()> {
    // Losses raised a hundredfold so that jumps are frequent in one microsecond.
    run_example(500, 4.0e6).map(|_| ())
}
