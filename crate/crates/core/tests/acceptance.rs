// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Every criterion prints one PASS or FAIL line on the
// uncaptured stdout, and the test fails if any criterion does.

use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use photonic_mott::config::{Preset, RunConfig, SolverChoice};
use photonic_mott::dynamics::{evolve_master, run_ensemble};
use photonic_mott::models::build_full;
use photonic_mott::observables::{ensemble_series, master_series};
use photonic_mott::output::Artifacts;
use photonic_mott::params::{derive, figure_of_merit, gain_vs_legacy, LatticeSpec, LossConvention, PhysicalParams};
use photonic_mott::polariton::{sector_spectrum, shift_oracle};
use photonic_mott::scenario;

/// Outcome of one criterion: pass flag and a one-line account.
type Outcome = (bool, String);

fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").expect("stdout");
    out.flush().expect("stdout");
}

fn run(name: &str, failures: &mut Vec<String>, criterion: impl FnOnce() -> Outcome) {
    let start = std::time::Instant::now();
    let (pass, detail) = catch_unwind(AssertUnwindSafe(criterion))
        .unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
    let elapsed = start.elapsed().as_secs_f64();
    report(&format!(
        "{} {name}: {detail} [{elapsed:.1} s]",
        if pass { "PASS" } else { "FAIL" }
    ));
    if !pass {
        failures.push(name.to_string());
    }
}

fn relative(x: f64, target: f64) -> f64 {
    (x - target).abs() / target.abs()
}

fn effective_nonlinearity() -> Outcome {
    let p = PhysicalParams::mott_insulator();
    let u = derive(&p).unwrap().u;
    let err = relative(u, 1.24e7);
    (err < 0.02, format!("U = {u:.4e} 1/s, {:.2}% from 1.24e7", 100.0 * err))
}

fn figure_of_merit_and_gain() -> Outcome {
    let toroid = PhysicalParams::microtoroid_benchmark();
    let merit = figure_of_merit(&toroid, LossConvention::CavityOnly).unwrap();
    let mott = PhysicalParams::mott_insulator();
    let strong = PhysicalParams {
        omega: 100.0 * mott.collective_coupling(),
        level4_detuning: -mott.g24 / 10.0,
        ..mott
    };
    let gain = gain_vs_legacy(&strong).unwrap();
    let pass = relative(merit, 625.0) < 1e-12 && relative(gain, 100.0) < 1e-12;
    (pass, format!("U/Gamma_C = {merit:.12}, gain = {gain:.12}"))
}

fn one_excitation_spectrum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let (mut worst, mut worst_b3) = (0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let p = PhysicalParams {
            omega: 10f64.powf(rng.random_range(9.0..13.0)),
            g13: 10f64.powf(rng.random_range(7.0..10.0)),
            g24: 0.0,
            level3_detuning: rng.random_range(-1e12..1e12),
            level4_detuning: sign * 10f64.powf(rng.random_range(8.0..11.0)),
            two_photon_detuning: 0.0,
            atoms: rng.random_range(1..10_000),
            cavity_decay: 0.0,
            level4_decay: 0.0,
        };
        let d = derive(&p).unwrap();
        let model = build_full(&p, &LatticeSpec::single(), 1).unwrap();
        let eig = sector_spectrum(&model, p.omega, 1);
        let mut numeric: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        numeric.sort_by(f64::total_cmp);
        let mut closed = vec![d.mu_zero, d.mu_plus, d.mu_minus];
        closed.sort_by(f64::total_cmp);
        let scale = d.mu_plus.abs().max(d.mu_minus.abs());
        for (x, y) in numeric.iter().zip(&closed) {
            worst = worst.max((x - y).abs() / scale);
        }
        // eigenvector of the zero branch, weight on the b3 Fock state
        let sector = model.basis.sector(1);
        let b3 = model.basis.index_of(&[0, 0, 1, 0]).unwrap();
        let row = sector.iter().position(|&k| k == b3).unwrap();
        let zero = (0..eig.eigenvalues.len())
            .min_by(|&i, &j| eig.eigenvalues[i].abs().total_cmp(&eig.eigenvalues[j].abs()))
            .unwrap();
        worst_b3 = worst_b3.max(eig.eigenvectors[(row, zero)].norm_sqr());
    }
    (
        worst < 1e-8 && worst_b3 < 1e-16,
        format!("100 draws, max relative eigenvalue error {worst:.2e}, max b3 weight on zero branch {worst_b3:.2e}"),
    )
}

/// Oracle error with g/Ω and g24 g/|ΔΩ| both equal to `r`.
fn oracle_error(r: Option<f64>) -> f64 {
    let base = PhysicalParams::mott_insulator();
    let p = match r {
        None => base,
        Some(r) => {
            let g = base.collective_coupling();
            PhysicalParams {
                omega: g / r,
                // g24 g/|ΔΩ| = g24 r/|Δ| = r
                level4_detuning: -base.g24,
                ..base
            }
        }
    };
    let g = p.collective_coupling();
    let two_u = 2.0 * p.g24 * p.g24 * g * g / (-p.level4_detuning * p.omega * p.omega);
    relative(shift_oracle(&p, 2).unwrap().shift, two_u)
}

fn perturbation_oracle() -> Outcome {
    let fig = oracle_error(None);
    let sweep: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&r| oracle_error(Some(r))).collect();
    let monotone = sweep.windows(2).all(|w| w[1] < w[0]);
    (
        fig < 0.10 && sweep[1] < 0.05 && monotone,
        format!(
            "Mott point {:.2}%, ratios 0.1/0.05/0.025 -> {:.2}%/{:.2}%/{:.2}%",
            100.0 * fig,
            100.0 * sweep[0],
            100.0 * sweep[1],
            100.0 * sweep[2]
        ),
    )
}

fn column<'a>(a: &'a Artifacts, name: &str) -> &'a [f64] {
    a.timeseries.as_ref().unwrap().column(name).unwrap_or_else(|| panic!("missing column {name}"))
}

fn summary_f64(a: &Artifacts, path: &[&str]) -> f64 {
    let mut v = &a.summary;
    for key in path {
        v = &v[*key];
    }
    v.as_f64().unwrap_or_else(|| panic!("missing summary value {path:?}"))
}

/// Three-site effective model of the Mott preset with Γ_C raised to 1e6 1/s,
/// so that every sample after t = 0 has jumps in the ensemble and the
/// sample standard error is not degenerate.
fn unravelling() -> Outcome {
    let mut config = Preset::Mott.config();
    config.physical.cavity_decay = 1e6;
    let bh = scenario::effective_model(&config).unwrap();
    let ramp = config.ramp().unwrap();
    let integrator = config.integrator();
    let modes: Vec<usize> = (0..bh.sites()).map(|l| bh.photon_mode(l)).collect();
    let rho0 = bh.initial_state(&config.initial).unwrap();
    let master = master_series(&evolve_master(&bh, &ramp, &rho0, &integrator).unwrap(), &modes).unwrap();
    let psi0 = bh.initial_state(&config.initial).unwrap();
    let stats = run_ensemble(&bh, &ramp, &psi0, &integrator, 500).unwrap();
    let ensemble = ensemble_series(&stats).unwrap();
    let mut worst = 0.0_f64;
    for q in ["n1", "F1"] {
        let reference = master.column(q).unwrap();
        let mean = ensemble.column(q).unwrap();
        let se = ensemble.column(&format!("{q}_se")).unwrap();
        for k in 0..reference.len() {
            worst = worst.max((mean[k] - reference[k]).abs() / (3.0 * se[k] + 1e-6));
        }
    }
    (
        bh.basis.dim() == 20 && worst <= 1.0,
        format!(
            "dim {}, 500 trajectories, {} jumps, largest deviation {worst:.2} of the 3 SE bound",
            bh.basis.dim(),
            stats.jump_counts.iter().sum::<usize>()
        ),
    )
}

fn mott_dynamics(mott: &Artifacts) -> Outcome {
    let n1 = column(mott, "bh_master_n1");
    let f1 = column(mott, "bh_master_F1");
    let (lo, hi) = n1.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let fmax = f1.iter().cloned().fold(0.0, f64::max);
    (
        lo >= 0.9 && hi <= 1.0 && fmax < 0.3,
        format!("n1 in [{lo:.4}, {hi:.4}], max F1 {fmax:.4} over 1 us"),
    )
}

fn loss_calibration(mott: &Artifacts) -> Outcome {
    let survival = column(mott, "full_traj_survival");
    let times = mott.timeseries.as_ref().unwrap().times();
    let gamma = PhysicalParams::mott_insulator().cavity_decay;
    let t = *times.last().unwrap();
    let expected = (-3.0 * gamma * t).exp();
    let err = relative(*survival.last().unwrap(), expected);
    (
        err < 0.05,
        format!("survival {:.4} vs exp(-3 Gamma_C t) = {expected:.4}, {:.2}%", survival.last().unwrap(), 100.0 * err),
    )
}

fn full_vs_effective(mott: &Artifacts) -> Outcome {
    let dn = summary_f64(mott, &["deviations", "max_abs_dn1"]);
    let df = summary_f64(mott, &["deviations", "max_abs_dF1"]);
    (dn < 0.15 && df < 0.15, format!("max|dn1| = {dn:.4}, max|dF1| = {df:.4}"))
}

fn transition() -> Outcome {
    let mut config = Preset::Transition.config();
    let j = config.lattice.hopping;
    let p = config.physical;
    let u_ratio = derive(&p).unwrap().u / derive(&p.with_omega(config.omega_final.unwrap())).unwrap().u;
    config.physical.cavity_decay = 0.0;
    config.physical.level4_decay = 0.0;
    config.solver = SolverChoice::Master;
    let run = scenario::dynamics(&config, "transition").unwrap();
    let reported = summary_f64(&run, &["ramp", "U_ratio"]);
    let u = column(&run, "U");
    let f1 = column(&run, "bh_master_F1");
    let mean = |v: Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let early = mean(f1.iter().zip(u).filter(|(_, &u)| u >= j).map(|(f, _)| *f).collect());
    let late = mean(f1.iter().zip(u).filter(|(_, &u)| u < j).map(|(f, _)| *f).collect());
    let last = *f1.last().unwrap();
    // n1 of a uniform three-site superfluid with three photons is binomial(3, 1/3)
    let ideal = (3.0_f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
    let err = relative(last, ideal);
    (
        relative(u_ratio, 100.0) < 1e-12 && relative(reported, 100.0) < 1e-12 && late > early && err < 0.25,
        format!(
            "U ratio {reported:.12}, mean F1 {early:.4} while U >= J, {late:.4} after, final {last:.4} ({:.1}% from sqrt(2/3))",
            100.0 * err
        ),
    )
}

fn files(a: &Artifacts, dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = a
        .write(dir)
        .unwrap()
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn determinism() -> Outcome {
    let mut mott = Preset::Mott.config();
    mott.duration = 2e-7;
    mott.samples = 21;
    mott.n_traj = 6;
    mott.physical.cavity_decay = 2e6;
    let mut transition = Preset::Transition.config();
    transition.samples = 11;
    transition.n_traj = 3;
    let mut scan = Preset::Mott.config();
    scan.sweep = vec!["Omega=1e12:3e12:3".into()];
    scan.disorder = 0.3;
    scan.draws = 2;
    let commands: Vec<(&str, RunConfig, fn(&RunConfig) -> photonic_mott::Result<Artifacts>)> = vec![
        ("params", Preset::Mott.config(), scenario::params),
        ("validate", Preset::Mott.config(), scenario::validate),
        ("mott", mott, |c| scenario::dynamics(c, "mott")),
        ("transition", transition, |c| scenario::dynamics(c, "transition")),
        ("scan", scan, scenario::scan),
    ];
    let root = tempfile::tempdir().unwrap();
    let mut checked = 0;
    for (name, config, command) in &commands {
        let mut outputs = Vec::new();
        for (k, threads) in [1, 1, 4].into_iter().enumerate() {
            let artifacts = in_pool(threads, || command(config)).unwrap();
            outputs.push(files(&artifacts, &root.path().join(format!("{name}_{k}"))));
        }
        if outputs.iter().any(|o| *o != outputs[0]) {
            return (false, format!("{name} output differs between runs"));
        }
        checked += outputs[0].len();
    }
    (
        true,
        format!("{checked} files identical across two 1-thread runs and one 4-thread run of 5 commands"),
    )
}

#[test]
fn acceptance_suite() {
    let mut failures = Vec::new();
    // libtest prints the test name without a newline
    report("");
    run("effective nonlinearity", &mut failures, effective_nonlinearity);
    run("figure of merit", &mut failures, figure_of_merit_and_gain);
    run("one-excitation spectrum", &mut failures, one_excitation_spectrum);
    run("perturbation oracle", &mut failures, perturbation_oracle);
    run("unravelling equivalence", &mut failures, unravelling);

    let config = Preset::Mott.config();
    let mott = scenario::dynamics(&config, "mott");
    match &mott {
        Ok(mott) => {
                        run("Mott dynamics", &mut failures, || mott_dynamics(mott));
            run("loss calibration", &mut failures, || loss_calibration(mott));
            run("full vs effective", &mut failures, || full_vs_effective(mott));
        }
        Err(e) => {
            for name in ["Mott dynamics", "loss calibration", "full vs effective"] {
                run(name, &mut failures, || (false, format!("mott run failed: {e}")));
            }
        }
    }
    run("transition", &mut failures, transition);
    run("determinism", &mut failures, determinism);
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
