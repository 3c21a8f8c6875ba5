// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use nalgebra::DMatrix;

use super::generator::{Generator, LindbladSystem};
use super::rk::Stepper;
use super::{IntegratorConfig, Propagator};
use crate::error::{Error, Result};
use crate::fock::{QuantumState, C64};
use crate::models::ModelInstance;
use crate::params::DriveRamp;

#[derive(Debug, Clone)]
pub struct MasterRecord {
    pub times: Vec<f64>,
    pub states: Vec<QuantumState>,
    /// Largest `|Tr ρ(t) - Tr ρ(0)|` seen at any accepted step.
    pub max_trace_drift: f64,
}

/// Integrates `dρ/dt = -i[H(t), ρ] + Σ γ (L ρ L† - {L†L, ρ}/2)` with
/// adaptive Dormand-Prince steps. Pure initial states are promoted.
pub fn evolve_master(
    model: &ModelInstance,
    ramp: &DriveRamp,
    rho0: &QuantumState,
    cfg: &IntegratorConfig,
) -> Result<MasterRecord> {
    cfg.validate()?;
    if cfg.propagator == Propagator::Exponential {
        return Err(Error::Config(
            "the master equation is integrated with rk45; exponential propagation applies to trajectories".into(),
        ));
    }
    if !(Arc::ptr_eq(rho0.basis(), &model.basis) || **rho0.basis() == *model.basis) {
        return Err(Error::BasisMismatch {
            left: rho0.basis().to_string(),
            right: model.basis.to_string(),
        });
    }
    let n = model.basis.dim();
    let rho = rho0.to_density();
    let trace0 = rho.trace().re;
    if !(trace0 > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let generator = Generator::new(model, ramp);
    let t_end = *cfg.sample_times.last().expect("validated");
    let max_step = cfg.max_step.unwrap_or_else(|| {
        let bound = generator.frequency_bound();
        if bound > 0.0 {
            1.0 / (50.0 * bound)
        } else {
            t_end
        }
    });
    let sys = LindbladSystem {
        generator: &generator,
    };
    let mut stepper = Stepper::new(n * n, cfg.rel_tol, cfg.abs_tol, max_step);
    let mut y: Vec<C64> = rho.as_slice().to_vec();
    let mut t = cfg.sample_times[0];
    let mut states = Vec::with_capacity(cfg.sample_times.len());
    let mut max_trace_drift = 0.0_f64;
    let tolerance = 10.0 * cfg.rel_tol * trace0;
    let snapshot = |y: &[C64]| QuantumState::mixed(model.basis.clone(), DMatrix::from_column_slice(n, n, y));
    states.push(snapshot(&y)?);
    for &ts in &cfg.sample_times[1..] {
        while t < ts {
            t = stepper.advance(&sys, t, &mut y, ts)?;
            let trace: f64 = (0..n).map(|k| y[k * n + k].re).sum();
            let drift = (trace - trace0).abs();
            max_trace_drift = max_trace_drift.max(drift);
            if drift > tolerance {
                return Err(Error::Integration {
                    time: t,
                    reason: format!("trace drifted by {drift:e} (limit {tolerance:e})"),
                });
            }
        }
        states.push(snapshot(&y)?);
    }
    Ok(MasterRecord {
        times: cfg.sample_times.clone(),
        states,
        max_trace_drift,
    })
}
