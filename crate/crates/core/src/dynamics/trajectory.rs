// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Quantum-jump trajectories by the waiting-time method: the unnormalized
//! state evolves under `H_eff` until its squared norm drops to a uniform
//! draw `r`, a jump is applied, and a fresh `r` is drawn.

use std::sync::OnceLock;

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;

use super::expo::{invariant_sectors, SegmentLadder};
use super::generator::{Generator, NoJumpSystem};
use super::rk::Stepper;
use super::rng::{trajectory_rng, TrajectoryRng};
use super::{IntegratorConfig, JumpEvent, Propagator, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::fock::{QuantumState, C64};
use crate::models::{ModelInstance, ModelKind};
use crate::params::DriveRamp;

/// Jump times are located to `max_step / 2^10`.
const LOCALIZATION_BITS: u32 = 10;

struct ExpoEngine {
    sectors: Vec<Vec<usize>>,
    segment: f64,
    substeps: usize,
    depth: u32,
    /// The single ladder of a constant drive, shared by every run.
    constant: Option<OnceLock<SegmentLadder>>,
}

enum Engine {
    Rk45,
    Exponential(ExpoEngine),
}

/// Shared, read-only setup for any number of trajectories of one run.
pub struct TrajectorySolver<'a> {
    generator: Generator<'a>,
    cfg: IntegratorConfig,
    max_step: f64,
    engine: Engine,
}

/// One trajectory in flight.
struct Walker {
    psi: DVector<C64>,
    r: f64,
    survival_base: f64,
    rng: TrajectoryRng,
    record: TrajectoryRecord,
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

impl<'a> TrajectorySolver<'a> {
    pub fn new(model: &'a ModelInstance, ramp: &DriveRamp, cfg: &IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
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
        let exponential = match cfg.propagator {
            Propagator::Auto => model.kind == ModelKind::Full,
            Propagator::Exponential => true,
            Propagator::Rk45 => false,
        };
        let engine = if exponential {
            let times = &cfg.sample_times;
            let dt = times[1] - times[0];
            let uniform = times
                .iter()
                .enumerate()
                .all(|(k, &t)| (t - k as f64 * dt).abs() <= 1e-9 * dt.max(t.abs()));
            if !uniform {
                return Err(Error::Config(
                    "exponential propagation needs uniformly spaced sample times".into(),
                ));
            }
            let substeps = if ramp.is_constant() { 1 } else { cfg.exp_substeps };
            let segment = dt / substeps as f64;
            let depth = (segment * f64::from(1u32 << LOCALIZATION_BITS) / max_step)
                .log2()
                .ceil()
                .clamp(0.0, 52.0) as u32;
            let sectors = invariant_sectors(&model.basis, &generator.h_eff_with_factor(model.drive_factor(ramp.initial())))?;
            Engine::Exponential(ExpoEngine {
                sectors,
                segment,
                substeps,
                depth,
                constant: ramp.is_constant().then(OnceLock::new),
            })
        } else {
            Engine::Rk45
        };
        Ok(Self {
            generator,
            cfg: cfg.clone(),
            max_step,
            engine,
        })
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.cfg
    }

    pub fn max_step(&self) -> f64 {
        self.max_step
    }

    pub fn model(&self) -> &ModelInstance {
        self.generator.model
    }

    pub fn uses_exponential(&self) -> bool {
        matches!(self.engine, Engine::Exponential(_))
    }

    /// Trajectory with stream `index` of the configured seed.
    pub fn run(&self, psi0: &QuantumState, index: u64) -> Result<TrajectoryRecord> {
        self.run_batch(psi0, index..index + 1)
            .pop()
            .expect("one stream requested")
    }

    /// Trajectories for every stream in `streams`, in order. Exponential
    /// propagation advances all of them one drive segment at a time, so that
    /// each segment's propagators are built once and then dropped.
    pub fn run_batch(&self, psi0: &QuantumState, streams: std::ops::Range<u64>) -> Vec<Result<TrajectoryRecord>> {
        let mut walkers: Vec<Result<Walker>> = streams
            .clone()
            .into_par_iter()
            .map(|index| self.start(psi0, index))
            .collect();
        match &self.engine {
            Engine::Rk45 => walkers
                .into_par_iter()
                .map(|w| self.run_rk(w?))
                .collect(),
            Engine::Exponential(engine) => {
                let segments = (self.cfg.sample_times.len() - 1) * engine.substeps;
                for segment in 0..segments {
                    if walkers.iter().all(|w| w.is_err()) {
                        break;
                    }
                    let fresh;
                    let ladder = match &engine.constant {
                        Some(cell) => cell.get_or_init(|| self.build_ladder(engine, 0)),
                        None => {
                            fresh = self.build_ladder(engine, segment);
                            &fresh
                        }
                    };
                    walkers.par_iter_mut().for_each(|slot| {
                        if let Ok(w) = slot {
                            if let Err(e) = self.expo_segment(engine, ladder, segment, w) {
                                *slot = Err(e);
                            }
                        }
                    });
                }
                walkers.into_iter().map(|w| w.map(|w| w.record)).collect()
            }
        }
    }

    fn start(&self, psi0: &QuantumState, index: u64) -> Result<Walker> {
        let model = self.generator.model;
        if !(std::sync::Arc::ptr_eq(psi0.basis(), &model.basis) || **psi0.basis() == *model.basis) {
            return Err(Error::BasisMismatch {
                left: psi0.basis().to_string(),
                right: model.basis.to_string(),
            });
        }
        let psi = psi0
            .as_pure()
            .ok_or_else(|| Error::InvalidState("trajectories need a pure initial state".into()))?;
        let norm = psi.norm();
        if !(norm > 0.0) {
            return Err(Error::ZeroNorm);
        }
        let mut rng = trajectory_rng(self.cfg.rng_seed, index);
        let r = rng.random();
        let samples = self.cfg.sample_times.len();
        let mut walker = Walker {
            psi: psi / C64::new(norm, 0.0),
            r,
            survival_base: 1.0,
            rng,
            record: TrajectoryRecord {
                times: self.cfg.sample_times.clone(),
                states: Vec::with_capacity(samples),
                jumps: Vec::new(),
                survival: Vec::with_capacity(samples),
            },
        };
        self.sample(&mut walker)?;
        Ok(walker)
    }

    fn jump(&self, psi: &DVector<C64>, rng: &mut TrajectoryRng, time: f64) -> Result<(DVector<C64>, usize)> {
        let images: Vec<Vec<C64>> = self
            .generator
            .channels
            .iter()
            .map(|ch| ch.op.apply_vec(psi.as_slice()))
            .collect();
        let weights: Vec<f64> = self
            .generator
            .channels
            .iter()
            .zip(&images)
            .map(|(ch, v)| ch.rate * norm_sqr(v))
            .collect();
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::JumpDegeneracy { time });
        }
        let x = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = weights.iter().rposition(|&w| w > 0.0).expect("total > 0");
        for (k, &w) in weights.iter().enumerate() {
            acc += w;
            if x < acc && w > 0.0 {
                chosen = k;
                break;
            }
        }
        let image = DVector::from_vec(images[chosen].clone());
        let n = image.norm();
        Ok((image / C64::new(n, 0.0), self.generator.channels[chosen].index))
    }

    /// Records the normalized current state and the survival so far.
    fn sample(&self, w: &mut Walker) -> Result<()> {
        let n2 = w.psi.norm_squared();
        if !(n2 > 0.0) {
            return Err(Error::ZeroNorm);
        }
        let normalized = &w.psi / C64::new(n2.sqrt(), 0.0);
        w.record
            .states
            .push(QuantumState::pure(self.generator.model.basis.clone(), normalized)?);
        w.record.survival.push(w.survival_base * n2);
        Ok(())
    }

    /// Applies a jump to `before` at `time` and draws the next threshold.
    fn jump_walker(&self, w: &mut Walker, before: DVector<C64>, time: f64) -> Result<()> {
        w.survival_base *= before.norm_squared();
        let (after, channel) = self.jump(&before, &mut w.rng, time)?;
        w.record.jumps.push(JumpEvent { time, channel });
        w.psi = after;
        w.r = w.rng.random();
        Ok(())
    }

    fn run_rk(&self, mut w: Walker) -> Result<TrajectoryRecord> {
        let sys = NoJumpSystem {
            generator: &self.generator,
        };
        let dim = w.psi.len();
        let mut stepper = Stepper::new(dim, self.cfg.rel_tol, self.cfg.abs_tol, self.max_step);
        let resolution = self.max_step / f64::from(1u32 << LOCALIZATION_BITS);
        let mut y: Vec<C64> = w.psi.as_slice().to_vec();
        let mut t = self.cfg.sample_times[0];
        let mut trial = vec![C64::new(0.0, 0.0); dim];
        for &ts in &self.cfg.sample_times[1..] {
            while t < ts {
                let t_prev = t;
                let prev = y.clone();
                t = stepper.advance(&sys, t, &mut y, ts)?;
                if norm_sqr(&y) > w.r {
                    continue;
                }
                let (mut lo, mut hi) = (0.0, t - t_prev);
                let mut at_hi = y.clone();
                while hi - lo > resolution {
                    let mid = 0.5 * (lo + hi);
                    stepper.fixed_step(&sys, t_prev, &prev, mid, &mut trial);
                    if norm_sqr(&trial) > w.r {
                        lo = mid;
                    } else {
                        hi = mid;
                        at_hi.copy_from_slice(&trial);
                    }
                }
                let t_jump = t_prev + hi;
                self.jump_walker(&mut w, DVector::from_vec(at_hi), t_jump)?;
                y = w.psi.as_slice().to_vec();
                t = t_jump;
            }
            w.psi = DVector::from_column_slice(&y);
            self.sample(&mut w)?;
        }
        Ok(w.record)
    }

    /// Propagators of drive segment `segment`, with Ω taken at its midpoint.
    fn build_ladder(&self, engine: &ExpoEngine, segment: usize) -> SegmentLadder {
        let mid = (segment as f64 + 0.5) * engine.segment;
        let factor = self.generator.factor_at(mid);
        SegmentLadder::new(self.generator.h_eff_with_factor(factor), engine.segment, engine.depth)
    }

    /// Advances one walker across one segment. The segment is covered by
    /// the largest aligned dyadic steps whose end keeps the squared norm
    /// above the threshold; a failing step is retried at half the length
    /// until the crossing is pinned to one ladder unit.
    fn expo_segment(&self, engine: &ExpoEngine, ladder: &SegmentLadder, segment: usize, w: &mut Walker) -> Result<()> {
        let units: u64 = 1 << engine.depth;
        let start = segment as f64 * engine.segment;
        let mut m: u64 = 0;
        let mut limit = engine.depth;
        while m < units {
            let mut level = limit;
            while level > 0 && (m % (1 << level) != 0 || m + (1 << level) > units) {
                level -= 1;
            }
            let candidate = ladder.level(level, &engine.sectors).apply(&w.psi);
            if candidate.norm_squared() > w.r {
                w.psi = candidate;
                m += 1 << level;
            } else if level == 0 {
                m += 1;
                self.jump_walker(w, candidate, start + m as f64 * ladder.unit())?;
                limit = engine.depth;
            } else {
                limit = level - 1;
            }
        }
        if (segment + 1) % engine.substeps == 0 {
            self.sample(w)?;
        }
        Ok(())
    }
}

/// Single trajectory on stream 0 of `cfg.rng_seed`.
pub fn evolve_trajectory(
    model: &ModelInstance,
    ramp: &DriveRamp,
    psi0: &QuantumState,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    TrajectorySolver::new(model, ramp, cfg)?.run(psi0, 0)
}
