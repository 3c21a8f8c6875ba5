// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

// Effective Bose-Hubbard couplings of the micro-toroid parameter set, the
// figure of merit U/Γ under both loss conventions, and the regime checks.
//
//     cargo run --release --example effective_parameters

use photonic_mott::params::{
    check_validity, derive, figure_of_merit, gain_vs_legacy, DerivedParams, LatticeSpec, LossConvention,
    PhysicalParams, ValidityThresholds,
};
use photonic_mott::Result;

fn run_example() -> Result<(DerivedParams, f64, f64)> {
    let mott = PhysicalParams::mott_insulator();
    let d = derive(&mott)?;
    println!("three-cavity Mott parameters");
    println!("  g = sqrt(N) g13   {:.4e} rad/s", d.g);
    println!("  mu+, mu-          {:.4e}, {:.4e} rad/s", d.mu_plus, d.mu_minus);
    println!("  U                 {:.4e} rad/s", d.u);
    println!("  pair-loss coeff.  {:.4e} 1/s", d.gamma_pair_coeff);
    let report = check_validity(&mott, &LatticeSpec::new(3, 1.2e6, Default::default()), &ValidityThresholds::default())?;
    println!("{report}");

    let toroid = PhysicalParams::microtoroid_benchmark();
    let cavity_only = figure_of_merit(&toroid, LossConvention::CavityOnly)?;
    let with_pairs = figure_of_merit(&toroid, LossConvention::WithPairLoss)?;
    println!("micro-toroid benchmark");
    println!("  U/Gamma_C             {cavity_only:.1}");
    println!("  U/(Gamma_C + pairs)   {with_pairs:.1}");

    // Ω = 100 g and |Δ| = g24/10 keep g24 g/|ΔΩ| at 0.1.
    let strong = PhysicalParams {
        omega: 100.0 * mott.collective_coupling(),
        level4_detuning: -mott.g24 / 10.0,
        ..mott
    };
    let gain = gain_vs_legacy(&strong)?;
    println!("gain over |Delta| = 10 g24 at |Delta| = g24/10: {gain:.1}");
    Ok((d, cavity_only, gain))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
