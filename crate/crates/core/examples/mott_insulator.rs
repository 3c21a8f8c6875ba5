// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

// One photon per cavity in a ring of three cavities: the full atom-cavity
// model as quantum-jump trajectories next to the effective Bose-Hubbard
// model, with artifacts written to `out/mott_example`.
//
//     cargo run --release --example mott_insulator

use std::path::Path;

use photonic_mott::config::Preset;
use photonic_mott::output::Artifacts;
use photonic_mott::scenario;
use photonic_mott::Result;

fn run_example(duration: f64, n_traj: usize) -> Result<Artifacts> {
    let mut config = Preset::Mott.config();
    config.duration = duration;
    config.n_traj = n_traj;
    let artifacts = scenario::dynamics(&config, "mott")?;
    let series = artifacts.timeseries.as_ref().expect("dynamics writes a time series");
    let n1 = series.column("bh_master_n1").expect("master column");
    let f1 = series.column("bh_master_F1").expect("master column");
    let step = (series.len() / 10).max(1);
    println!("{:>10} {:>8} {:>8} {:>9}", "t [us]", "n1", "F1", "survival");
    let survival = series.column("full_traj_survival").expect("trajectory column");
    for k in (0..series.len()).step_by(step) {
        println!("{:>10.3} {:>8.4} {:>8.4} {:>9.5}", 1e6 * series.times()[k], n1[k], f1[k], survival[k]);
    }
    println!("deviations full vs effective: {}", artifacts.summary["deviations"]);
    Ok(artifacts)
}

fn main() -> Result<()> {
    let artifacts = run_example(1.0e-6, 200)?;
    artifacts.write(Path::new("out/mott_example"))?;
    Ok(())
}
