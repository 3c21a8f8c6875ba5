// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

// U over a drive sweep, and the cavity-to-cavity spread of U when each
// cavity's g24 is off by up to ±50%.
//
//     cargo run --release --example disorder_scan

use photonic_mott::config::Preset;
use photonic_mott::output::Table;
use photonic_mott::scenario;
use photonic_mott::Result;

fn run_example(draws: usize) -> Result<Table> {
    let mut config = Preset::Mott.config();
    let g = config.physical.collective_coupling();
    config.sweep = vec![format!("Omega={}:{}:4", 10.0 * g, 100.0 * g)];
    config.disorder = 0.5;
    config.draws = draws;
    let table = scenario::scan(&config)?.table.expect("scan writes a table");
    let omega = table.column("Omega").expect("axis column");
    let u = table.column("U").expect("U column");
    let lo = table.column("U_min").expect("U_min column");
    let hi = table.column("U_max").expect("U_max column");
    let ok = table.column("overall_pass").expect("validity column");
    println!("{:>12} {:>12} {:>12} {:>12} {:>6}", "Omega/g", "U", "U_min", "U_max", "valid");
    for k in 0..table.rows.len() {
        println!("{:>12.1} {:>12.4e} {:>12.4e} {:>12.4e} {:>6}", omega[k] / g, u[k], lo[k], hi[k], ok[k] == 1.0);
    }
    Ok(table)
}

fn main() -> Result<()> {
    run_example(3).map(|_| ())
}
