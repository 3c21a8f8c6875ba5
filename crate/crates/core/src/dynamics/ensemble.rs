// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::Serialize;

use super::trajectory::TrajectorySolver;
use super::{IntegratorConfig, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::fock::QuantumState;
use crate::models::ModelInstance;
use crate::observables::photon_moments_at_mode;
use crate::params::DriveRamp;

/// Ensemble means and standard errors, indexed `[site][sample]`.
///
/// The photon-number fluctuation is estimated from ensemble moments,
/// `F = sqrt(E<n²> - E<n>²)`, which is the quantity the master equation
/// predicts; its standard error is a jackknife estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub times: Vec<f64>,
    pub n_traj: usize,
    pub rng_seed: u64,
    /// Stream ids of the trajectories, in aggregation order.
    pub streams: Vec<u64>,
    pub n_mean: Vec<Vec<f64>>,
    pub n_se: Vec<Vec<f64>>,
    pub f_mean: Vec<Vec<f64>>,
    pub f_se: Vec<Vec<f64>>,
    pub survival_mean: Vec<f64>,
    pub survival_se: Vec<f64>,
    pub jump_counts: Vec<usize>,
}

fn mean_and_se(values: impl Iterator<Item = f64> + Clone, count: usize) -> (f64, f64) {
    let c = count as f64;
    let mean = values.clone().sum::<f64>() / c;
    if count < 2 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (c - 1.0);
    (mean, (var / c).sqrt())
}

fn fluctuation(mean_n: f64, mean_n2: f64) -> f64 {
    (mean_n2 - mean_n * mean_n).max(0.0).sqrt()
}

/// Runs `n_traj` trajectories on streams `0..n_traj` in parallel on the
/// current rayon pool. Results are aggregated in stream order, so the
/// output does not depend on the number of worker threads.
pub fn run_ensemble(
    model: &ModelInstance,
    ramp: &DriveRamp,
    psi0: &QuantumState,
    cfg: &IntegratorConfig,
    n_traj: usize,
) -> Result<EnsembleStats> {
    let solver = TrajectorySolver::new(model, ramp, cfg)?;
    let records = run_records(&solver, psi0, n_traj)?;
    EnsembleStats::from_records(model, cfg, &records)
}

/// Records of streams `0..n_traj`; a failing trajectory is reported with its index.
pub fn run_records(solver: &TrajectorySolver<'_>, psi0: &QuantumState, n_traj: usize) -> Result<Vec<TrajectoryRecord>> {
    if n_traj < 1 {
        return Err(Error::InvalidParameter {
            field: "n_traj",
            reason: "must be >= 1".into(),
        });
    }
    solver
        .run_batch(psi0, 0..n_traj as u64)
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::Trajectory {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

impl EnsembleStats {
    /// Aggregates records whose position in `records` is their stream id.
    pub fn from_records(model: &ModelInstance, cfg: &IntegratorConfig, records: &[TrajectoryRecord]) -> Result<Self> {
        let count = records.len();
        if count < 1 {
            return Err(Error::InvalidParameter {
                field: "n_traj",
                reason: "must be >= 1".into(),
            });
        }
        let samples = cfg.sample_times.len();
        let sites = model.sites();
        // moments[trajectory][site][sample] = (<n>, <n²>)
        let moments: Vec<Vec<Vec<(f64, f64)>>> = records
            .par_iter()
            .map(|record| {
                (0..sites)
                    .map(|site| {
                        record
                            .states
                            .iter()
                            .map(|s| photon_moments_at_mode(s, model.photon_mode(site)))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let c = count as f64;
        let mut stats = EnsembleStats {
            times: cfg.sample_times.clone(),
            n_traj: count,
            rng_seed: cfg.rng_seed,
            streams: (0..count as u64).collect(),
            n_mean: vec![vec![0.0; samples]; sites],
            n_se: vec![vec![0.0; samples]; sites],
            f_mean: vec![vec![0.0; samples]; sites],
            f_se: vec![vec![0.0; samples]; sites],
            survival_mean: vec![0.0; samples],
            survival_se: vec![0.0; samples],
            jump_counts: records.iter().map(|r| r.jumps.len()).collect(),
        };
        for t in 0..samples {
            let (m, se) = mean_and_se(records.iter().map(|r| r.survival[t]), count);
            stats.survival_mean[t] = m;
            stats.survival_se[t] = se;
            for site in 0..sites {
                let n = |k: usize| moments[k][site][t].0;
                let n2 = |k: usize| moments[k][site][t].1;
                let (mn, se_n) = mean_and_se((0..count).map(n), count);
                let sum_n: f64 = (0..count).map(n).sum();
                let sum_n2: f64 = (0..count).map(n2).sum();
                stats.n_mean[site][t] = mn;
                stats.n_se[site][t] = se_n;
                stats.f_mean[site][t] = fluctuation(sum_n / c, sum_n2 / c);
                if count >= 2 {
                    let leave_out: Vec<f64> = (0..count)
                        .map(|k| fluctuation((sum_n - n(k)) / (c - 1.0), (sum_n2 - n2(k)) / (c - 1.0)))
                        .collect();
                    let mean = leave_out.iter().sum::<f64>() / c;
                    let spread: f64 = leave_out.iter().map(|f| (f - mean) * (f - mean)).sum();
                    stats.f_se[site][t] = ((c - 1.0) / c * spread).sqrt();
                }
            }
        }
        Ok(stats)
    }
}
