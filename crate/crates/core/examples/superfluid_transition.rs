// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

// Ramping the drive from 10 to 100 √N g13 lowers U by a factor of 100,
// through U = J, and the photon-number fluctuations grow toward the value
// of an ideal three-site superfluid, sqrt(2/3). Losses are switched off and
// the effective model is solved with the master equation.
//
//     cargo run --release --example superfluid_transition

use photonic_mott::config::{Preset, SolverChoice};
use photonic_mott::scenario;
use photonic_mott::Result;

pub struct TransitionSummary {
    pub u_ratio: f64,
    pub early_f1: f64,
    pub late_f1: f64,
    pub final_f1: f64,
}

fn run_example(samples: usize) -> Result<TransitionSummary> {
    let mut config = Preset::Transition.config();
    config.physical.cavity_decay = 0.0;
    config.physical.level4_decay = 0.0;
    config.solver = SolverChoice::Master;
    config.samples = samples;
    let artifacts = scenario::dynamics(&config, "transition")?;
    let series = artifacts.timeseries.expect("dynamics writes a time series");
    let u = series.column("U").expect("U column");
    let j = config.lattice.hopping;
    let f1 = series.column("bh_master_F1").expect("master column");
    let mean = |v: Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let early = mean(f1.iter().zip(u).filter(|(_, &u)| u >= j).map(|(f, _)| *f).collect());
    let late = mean(f1.iter().zip(u).filter(|(_, &u)| u < j).map(|(f, _)| *f).collect());
    let step = (series.len() / 10).max(1);
    println!("{:>10} {:>8} {:>8}", "t [us]", "U/J", "F1");
    for k in (0..series.len()).step_by(step) {
        println!("{:>10.3} {:>8.3} {:>8.4}", 1e6 * series.times()[k], u[k] / j, f1[k]);
    }
    let summary = TransitionSummary {
        u_ratio: u[0] / u[u.len() - 1],
        early_f1: early,
        late_f1: late,
        final_f1: f1[f1.len() - 1],
    };
    println!(
        "U ratio {:.3}, mean F1 while U >= J {:.4}, after {:.4}, final {:.4} (ideal superfluid {:.4})",
        summary.u_ratio,
        summary.early_f1,
        summary.late_f1,
        summary.final_f1,
        (2.0f64 / 3.0).sqrt()
    );
    Ok(summary)
}

fn main() -> Result<()> {
    run_example(201).map(|_| ())
}
