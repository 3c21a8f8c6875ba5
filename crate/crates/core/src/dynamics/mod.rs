// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Open-system time evolution: Lindblad master equation and Monte-Carlo
//! wavefunction trajectories, with optional drive ramps.

mod ensemble;
mod expo;
mod generator;
mod master;
mod rk;
mod rng;
mod trajectory;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::QuantumState;

pub use ensemble::{run_ensemble, run_records, EnsembleStats};
pub use master::{evolve_master, MasterRecord};
pub use rng::{trajectory_rng, TrajectoryRng};
pub use trajectory::{evolve_trajectory, TrajectorySolver};

/// Time-stepping scheme for trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Propagator {
    /// Exponential for the full model, Runge-Kutta otherwise.
    #[default]
    Auto,
    Rk45,
    /// Exact propagation over piecewise-constant drive segments; needs a
    /// uniform sample grid.
    Exponential,
}

impl Propagator {
    pub fn as_str(&self) -> &'static str {
        match self {
            Propagator::Auto => "auto",
            Propagator::Rk45 => "rk45",
            Propagator::Exponential => "exponential",
        }
    }
}

impl std::str::FromStr for Propagator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Propagator::Auto),
            "rk45" => Ok(Propagator::Rk45),
            "exponential" => Ok(Propagator::Exponential),
            other => Err(Error::Config(format!(
                "propagator must be `auto`, `rk45` or `exponential`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on a single step; `None` derives `1/(50 ω_max)` from the
    /// model, with `ω_max` a row-sum bound on `H_eff`.
    pub max_step: Option<f64>,
    pub sample_times: Vec<f64>,
    pub rng_seed: u64,
    pub propagator: Propagator,
    /// Drive segments per sample interval for exponential propagation under
    /// a time-dependent ramp.
    pub exp_substeps: usize,
}

impl IntegratorConfig {
    pub const DEFAULT_REL_TOL: f64 = 1e-8;
    pub const DEFAULT_ABS_TOL: f64 = 1e-10;
    pub const DEFAULT_EXP_SUBSTEPS: usize = 20;

    /// `samples` equally spaced times on `[0, duration]`.
    pub fn uniform(duration: f64, samples: usize) -> Self {
        Self {
            rel_tol: Self::DEFAULT_REL_TOL,
            abs_tol: Self::DEFAULT_ABS_TOL,
            max_step: None,
            sample_times: uniform_times(duration, samples),
            rng_seed: 0,
            propagator: Propagator::Auto,
            exp_substeps: Self::DEFAULT_EXP_SUBSTEPS,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_propagator(mut self, propagator: Propagator) -> Self {
        self.propagator = propagator;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter {
                field: "rel_tol",
                reason: "must be > 0".into(),
            });
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter {
                field: "abs_tol",
                reason: "must be > 0".into(),
            });
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidParameter {
                    field: "max_step",
                    reason: "must be finite and > 0".into(),
                });
            }
        }
        let t = &self.sample_times;
        if t.len() < 2 {
            return Err(Error::InvalidParameter {
                field: "samples",
                reason: "need at least two sample times".into(),
            });
        }
        if t[0] != 0.0 {
            return Err(Error::InvalidParameter {
                field: "sample_times",
                reason: "must start at 0".into(),
            });
        }
        if t.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::InvalidParameter {
                field: "sample_times",
                reason: "must be finite and strictly increasing".into(),
            });
        }
        if self.exp_substeps < 1 {
            return Err(Error::InvalidParameter {
                field: "exp_substeps",
                reason: "must be >= 1".into(),
            });
        }
        Ok(())
    }
}

pub fn uniform_times(duration: f64, samples: usize) -> Vec<f64> {
    let intervals = samples.saturating_sub(1).max(1) as f64;
    (0..samples)
        .map(|k| duration * k as f64 / intervals)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpEvent {
    pub time: f64,
    /// Index into the model's collapse list.
    pub channel: usize,
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    /// Normalized states at the sample times.
    pub states: Vec<QuantumState>,
    pub jumps: Vec<JumpEvent>,
    /// Product of the squared norms lost so far: the squared norm of the
    /// current no-jump evolution times the squared norms reached just before
    /// every earlier jump. Non-increasing.
    pub survival: Vec<f64>,
}

#[cfg(test)]
mod tests;
