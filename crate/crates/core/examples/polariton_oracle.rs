// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

// Exact diagonalization of one cavity in the two-excitation sector, set
// against the closed-form interaction 2U. The agreement improves as the
// perturbative ratios g/Ω and g24 g/|ΔΩ| shrink.
//
//     cargo run --release --example polariton_oracle

use photonic_mott::params::{derive, PhysicalParams};
use photonic_mott::polariton::shift_oracle;
use photonic_mott::Result;

/// Relative oracle error with both perturbative ratios set to `r`.
fn tightened(r: f64) -> Result<f64> {
    let base = PhysicalParams::mott_insulator();
    let g = base.collective_coupling();
    let omega = g / r;
    let params = PhysicalParams {
        omega,
        level4_detuning: -base.g24 * (g / omega) / r,
        ..base
    };
    let two_u = 2.0 * derive(&params)?.u;
    Ok((shift_oracle(&params, 2)?.shift - two_u).abs() / two_u.abs())
}

fn run_example() -> Result<Vec<(f64, f64)>> {
    let params = PhysicalParams::mott_insulator();
    let oracle = shift_oracle(&params, 2)?;
    let two_u = 2.0 * derive(&params)?.u;
    println!("E1 = {:.6e}, E2 = {:.6e} (dark overlaps {:.4}, {:.4})", oracle.e1, oracle.e2, oracle.overlap1, oracle.overlap2);
    println!("E2 - 2E1 = {:.4e}   2U = {:.4e}", oracle.shift, two_u);
    let mut sweep = Vec::new();
    for r in [0.1, 0.05, 0.025] {
        let err = tightened(r)?;
        println!("ratios {r:<6} relative error {:.3}%", 100.0 * err);
        sweep.push((r, err));
    }
    Ok(sweep)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
