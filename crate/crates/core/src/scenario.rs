// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-level runs: parameter reports, the constant-drive and ramped
//! dynamics of the full and effective models, comparisons, and scans.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::dynamics::{evolve_master, run_ensemble, run_records, EnsembleStats, TrajectorySolver};
use crate::error::{Error, Result};
use crate::models::{build_bose_hubbard, build_full, BoseHubbardSpec, ModelInstance};
use crate::observables::{
    compare_models, ensemble_series, master_series, max_abs, trajectory_series, TimeSeries,
};
use crate::output::{Artifacts, Table};
use crate::params::{
    check_validity, derive, figure_of_merit, gain_vs_legacy, LatticeSpec, PhysicalParams,
    ValidityThresholds,
};
use crate::polariton::{shift_oracle, spectrum_check};

/// Column prefixes of the combined time series.
pub mod prefix {
    pub const FULL_TRAJECTORY: &str = "full_traj_";
    pub const FULL_ENSEMBLE: &str = "full_ens_";
    pub const EFFECTIVE_MASTER: &str = "bh_master_";
    pub const EFFECTIVE_ENSEMBLE: &str = "bh_ens_";
}

/// Parameters a scan can sweep, by config key.
pub const SWEEPABLE: [&str; 10] = [
    "Omega", "g13", "g24", "delta", "Delta", "epsilon", "N", "Gamma_C", "Gamma_4", "J",
];

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn parameter_report(physical: &PhysicalParams, lattice: &LatticeSpec, config: &RunConfig) -> Result<Value> {
    let derived = derive(physical)?;
    let validity = check_validity(physical, lattice, &ValidityThresholds::default())?;
    let mut d = serde_json::to_value(derived).expect("derived parameters serialize");
    let merit = figure_of_merit(physical, config.gamma_convention).ok();
    d["U_over_Gamma"] = merit.map_or(Value::Null, number);
    Ok(json!({
        "derived": d,
        "validity": validity,
        "gamma_convention": serde_json::to_value(config.gamma_convention).expect("enum serializes"),
        "gain_vs_legacy": gain_vs_legacy(physical).ok().map_or(Value::Null, number),
    }))
}

/// Derived couplings, regime checks and U/Γ.
pub fn params(config: &RunConfig) -> Result<Artifacts> {
    let mut summary = parameter_report(&config.physical, &config.lattice, config)?;
    summary["command"] = json!("params");
    Ok(Artifacts {
        config_echo: Some(config.to_echo()),
        summary,
        ..Default::default()
    })
}

/// Exact single-cavity checks against the closed forms: the one-excitation
/// polariton spectrum and the two-photon shift `E2 - 2E1` against `2U`.
pub fn validate(config: &RunConfig) -> Result<Artifacts> {
    let physical = &config.physical;
    let derived = derive(physical)?;
    let single = build_full(physical, &LatticeSpec::single(), 2)?;
    let spectrum = spectrum_check(physical, &single)?;
    let oracle = shift_oracle(physical, 2)?;
    let formula = 2.0 * derived.u;
    let mut summary = parameter_report(physical, &config.lattice, config)?;
    summary["command"] = json!("validate");
    summary["spectrum"] = serde_json::to_value(&spectrum).expect("report serializes");
    summary["shift"] = json!({
        "oracle": oracle,
        "formula_2U": number(formula),
        "relative_error": number((oracle.shift - formula).abs() / formula.abs()),
    });
    Ok(Artifacts {
        config_echo: Some(config.to_echo()),
        summary,
        ..Default::default()
    })
}

/// Effective lattice model at the initial drive of `config`.
pub fn effective_model(config: &RunConfig) -> Result<ModelInstance> {
    let derived = derive(&config.physical)?;
    let spec = BoseHubbardSpec::from_derived(&derived, config.physical.omega, config.loss_mode);
    build_bose_hubbard(&spec, &config.lattice, config.cap)
}

pub fn full_model(config: &RunConfig) -> Result<ModelInstance> {
    build_full(&config.physical, &config.lattice, config.cap)
}

fn last(v: &[f64]) -> f64 {
    *v.last().expect("at least two samples")
}

/// Time evolution of `initial` under both models.
///
/// The effective model is integrated with the master equation and/or as a
/// trajectory ensemble; the full model only as trajectories, since its
/// density matrix is too stiff to integrate directly. Deviations compare
/// the full-model ensemble with the effective master solution when both
/// exist, otherwise with the effective ensemble.
pub fn dynamics(config: &RunConfig, command: &str) -> Result<Artifacts> {
    config.validate()?;
    let ramp = config.ramp()?;
    let integrator = config.integrator();
    let times = integrator.sample_times.clone();
    let bh = effective_model(config)?;
    let modes_bh: Vec<usize> = (0..bh.sites()).map(|l| bh.photon_mode(l)).collect();

    let mut series = TimeSeries::new(times.clone());
    let omega: Vec<f64> = times.iter().map(|&t| ramp.at(t)).collect();
    let u: Vec<f64> = omega
        .iter()
        .map(|&o| derive(&config.physical.with_omega(o)).map(|d| d.u))
        .collect::<Result<_>>()?;
    series.push("Omega", omega)?;
    series.push("U", u.clone())?;
    series.push("J", vec![config.lattice.hopping; times.len()])?;

    let mut runs = Map::new();
    let photons: u32 = config.initial.iter().sum();
    let expected_survival: Vec<f64> = times
        .iter()
        .map(|t| (-config.physical.cavity_decay * f64::from(photons) * t).exp())
        .collect();
    series.push("survival_expected", expected_survival.clone())?;

    let mut effective_master = None;
    let mut effective_ensemble = None;
    let mut full_ensemble = None;

    if config.solver.master() {
        let rho0 = bh.initial_state(&config.initial)?;
        let record = evolve_master(&bh, &ramp, &rho0, &integrator)?;
        let s = master_series(&record, &modes_bh)?;
        runs.insert(
            "bh_master".into(),
            json!({
                "dim": bh.basis.dim(),
                "max_trace_drift": number(record.max_trace_drift),
                "n1_min": number(s.column("n1").expect("n1").iter().cloned().fold(f64::INFINITY, f64::min)),
                "F1_max": number(s.column("F1").expect("F1").iter().cloned().fold(0.0, f64::max)),
                "F1_final": number(last(s.column("F1").expect("F1"))),
            }),
        );
        series.extend_prefixed(prefix::EFFECTIVE_MASTER, &s)?;
        effective_master = Some(s);
    }

    if config.solver.trajectory() {
        let full = full_model(config)?;
        let modes_full: Vec<usize> = (0..full.sites()).map(|l| full.photon_mode(l)).collect();
        let psi_full = full.initial_state(&config.initial)?;
        let solver = TrajectorySolver::new(&full, &ramp, &integrator)?;
        let records = run_records(&solver, &psi_full, config.n_traj)?;
        let single = &records[0];
        let s = trajectory_series(single, &modes_full)?;
        let survival_end = last(&single.survival);
        let expected_end = last(&expected_survival);
        runs.insert(
            "full_traj".into(),
            json!({
                "dim": full.basis.dim(),
                "stream": 0,
                "jumps": single.jumps.len(),
                "survival_final": number(survival_end),
                "survival_expected": number(expected_end),
                "survival_relative_error": number((survival_end - expected_end).abs() / expected_end),
                "exponential_propagation": solver.uses_exponential(),
                "max_step": number(solver.max_step()),
            }),
        );
        series.extend_prefixed(prefix::FULL_TRAJECTORY, &s)?;

        let stats = EnsembleStats::from_records(&full, &integrator, &records)?;
        drop(records);
        let s = ensemble_series(&stats)?;
        let surv = last(&stats.survival_mean);
        runs.insert(
            "full_ens".into(),
            json!({
                "n_traj": stats.n_traj,
                "jumps_total": stats.jump_counts.iter().sum::<usize>(),
                "survival_final": number(surv),
                "survival_final_se": number(last(&stats.survival_se)),
                "survival_relative_error": number((surv - expected_end).abs() / expected_end),
            }),
        );
        series.extend_prefixed(prefix::FULL_ENSEMBLE, &s)?;
        full_ensemble = Some(s);

        let psi_bh = bh.initial_state(&config.initial)?;
        let stats = run_ensemble(&bh, &ramp, &psi_bh, &integrator, config.n_traj)?;
        let s = ensemble_series(&stats)?;
        runs.insert(
            "bh_ens".into(),
            json!({
                "n_traj": stats.n_traj,
                "jumps_total": stats.jump_counts.iter().sum::<usize>(),
                "survival_final": number(last(&stats.survival_mean)),
            }),
        );
        series.extend_prefixed(prefix::EFFECTIVE_ENSEMBLE, &s)?;
        effective_ensemble = Some(s);
    }

    let effective = effective_master.as_ref().or(effective_ensemble.as_ref());
    let deviations = match (&full_ensemble, effective) {
        (Some(full), Some(eff)) => Some(compare_models(full, eff)?),
        _ => None,
    };

    let mut summary = parameter_report(&config.physical, &config.lattice, config)?;
    summary["command"] = json!(command);
    summary["runs"] = Value::Object(runs);
    summary["samples"] = json!(times.len());
    summary["duration"] = number(config.duration);
    summary["ramp"] = json!({
        "Omega_initial": number(ramp.initial()),
        "Omega_final": number(ramp.at(config.duration)),
        "U_initial": number(u[0]),
        "U_final": number(last(&u)),
        "U_ratio": number(u[0] / last(&u)),
        "J": number(config.lattice.hopping),
    });
    if let Some(dev) = &deviations {
        summary["deviations"] = deviation_summary(dev);
    }
    Ok(Artifacts {
        config_echo: Some(config.to_echo()),
        timeseries: Some(series),
        deviations,
        table: None,
        summary,
    })
}

fn deviation_summary(dev: &TimeSeries) -> Value {
    let mut m = Map::new();
    for (name, value) in max_abs(dev) {
        m.insert(format!("max_abs_{name}"), number(value));
    }
    Value::Object(m)
}

/// Deviations between two column groups, e.g. `full_ens_` and `bh_master_`
/// of one time series file, or of two files.
pub fn compare(full: &TimeSeries, effective: &TimeSeries, full_prefix: &str, effective_prefix: &str) -> Result<Artifacts> {
    let f = full.select_prefix(full_prefix);
    let e = effective.select_prefix(effective_prefix);
    let dev = compare_models(&f, &e)?;
    let summary = json!({
        "command": "compare",
        "full_prefix": full_prefix,
        "effective_prefix": effective_prefix,
        "samples": dev.len(),
        "deviations": deviation_summary(&dev),
    });
    Ok(Artifacts {
        deviations: Some(dev),
        summary,
        ..Default::default()
    })
}

/// One scan axis, `name=lo:hi:n` with `n` linearly spaced points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub name: String,
    pub values: Vec<f64>,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("sweep `{s}` is not of the form name=lo:hi:n"));
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let name = name.trim();
        if !SWEEPABLE.contains(&name) {
            return Err(Error::UnknownParameter(name.to_string()));
        }
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let n: usize = parts[2].parse().map_err(|_| bad())?;
        if n < 1 || !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        let values = if n == 1 {
            vec![lo]
        } else {
            (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
        };
        Ok(Self {
            name: name.to_string(),
            values,
        })
    }
}

fn apply(physical: &mut PhysicalParams, lattice: &mut LatticeSpec, name: &str, value: f64) -> Result<()> {
    match name {
        "Omega" => physical.omega = value,
        "g13" => physical.g13 = value,
        "g24" => physical.g24 = value,
        "delta" => physical.level3_detuning = value,
        "Delta" => physical.level4_detuning = value,
        "epsilon" => physical.two_photon_detuning = value,
        "N" => {
            if !(value >= 1.0 && value.fract() == 0.0) {
                return Err(Error::param("N", "sweep values must be positive integers"));
            }
            physical.atoms = value as u64;
        }
        "Gamma_C" => physical.cavity_decay = value,
        "Gamma_4" => physical.level4_decay = value,
        "J" => lattice.hopping = value,
        other => return Err(Error::UnknownParameter(other.to_string())),
    }
    Ok(())
}

/// Tabulates U, Γ, U/Γ and the regime checks over a grid of one or two
/// swept parameters. With `disorder > 0`, each grid point is evaluated for
/// `draws` independent per-cavity g24 scale draws, uniform in
/// `[1 - disorder, 1 + disorder]`; `U_min` and `U_max` span the cavities.
pub fn scan(config: &RunConfig) -> Result<Artifacts> {
    let axes: Vec<SweepAxis> = config.sweep.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    if axes.len() > 2 {
        return Err(Error::Config("a scan sweeps at most two parameters".into()));
    }
    if axes.len() == 2 && axes[0].name == axes[1].name {
        return Err(Error::Config("the two sweep axes must differ".into()));
    }
    let mut grid: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        grid = grid
            .into_iter()
            .flat_map(|point| {
                axis.values.iter().map(move |&v| {
                    let mut p = point.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    let thresholds = ValidityThresholds::default();
    let mut columns: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    columns.extend(["draw", "U", "Gamma", "U_over_Gamma", "U_min", "U_max"].map(String::from));
    columns.extend(thresholds.iter().map(|(name, _)| format!("pass_{name}")));
    columns.push("overall_pass".into());
    let mut table = Table::new(columns);
    let disordered = config.disorder > 0.0;
    let draws = if disordered { config.draws } else { 1 };
    let mut failing_points = 0usize;
    for (index, point) in grid.iter().enumerate() {
        let mut physical = config.physical;
        let mut lattice = config.lattice.clone();
        for (axis, &v) in axes.iter().zip(point) {
            apply(&mut physical, &mut lattice, &axis.name, v)?;
        }
        physical.validate()?;
        lattice.validate()?;
        let derived = derive(&physical)?;
        let gamma = config.gamma_convention.rate(&derived);
        let merit = if gamma > 0.0 { derived.u.abs() / gamma } else { f64::NAN };
        let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        for draw in 0..draws {
            let mut lattice = lattice.clone();
            if disordered {
                lattice.overrides.g24_scale = (0..lattice.sites)
                    .map(|_| 1.0 + config.disorder * (2.0 * rng.random::<f64>() - 1.0))
                    .collect();
            }
            let site_u: Vec<f64> = (0..lattice.sites)
                .map(|l| derive(&lattice.site_params(&physical, l)).map(|d| d.u))
                .collect::<Result<_>>()?;
            let report = check_validity(&physical, &lattice, &thresholds)?;
            if !report.overall_pass {
                failing_points += 1;
            }
            let mut row = point.clone();
            row.extend([
                draw as f64,
                derived.u,
                gamma,
                merit,
                site_u.iter().cloned().fold(f64::INFINITY, f64::min),
                site_u.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            ]);
            row.extend(report.checks.iter().map(|c| if c.pass { 1.0 } else { 0.0 }));
            row.push(if report.overall_pass { 1.0 } else { 0.0 });
            table.push(row)?;
        }
    }
    let summary = json!({
        "command": "scan",
        "axes": axes.iter().map(|a| json!({"name": a.name, "points": a.values.len()})).collect::<Vec<_>>(),
        "rows": table.rows.len(),
        "disorder": number(config.disorder),
        "draws": draws,
        "rows_failing_validity": failing_points,
    });
    Ok(Artifacts {
        config_echo: Some(config.to_echo()),
        table: Some(table),
        summary,
        ..Default::default()
    })
}
