// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: a flat TOML file in SI units (rad/s, s).
//!
//! A file either names a `preset` and overrides some of its keys, or lists
//! every physical key itself. The resolved configuration is written back
//! out as an echo that re-reads to the same run.
//!
//! | key | meaning |
//! |-----|---------|
//! | `preset` | `mott`, `transition`, `microtoroid` or `circuit_qed` |
//! | `Omega`, `Omega_final` | drive Rabi frequency; a linear ramp to `Omega_final` over `duration` when given |
//! | `g13`, `g24`, `N` | single-atom couplings and atom number |
//! | `delta`, `Delta`, `epsilon` | detunings of levels 3 and 4, two-photon detuning |
//! | `Gamma_C`, `Gamma_4` | cavity and level-4 decay rates |
//! | `L`, `J`, `boundary` | cavity count, hopping, `periodic` or `open` |
//! | `delta_C`, `g13_scale`, `g24_scale`, `Omega_scale` | per-cavity lists |
//! | `cap`, `initial` | weighted excitation cap, photons per cavity at t = 0 |
//! | `duration`, `samples` | time window and number of sample times |
//! | `solver`, `n_traj` | `master`, `trajectory` or `both`; trajectories per ensemble |
//! | `loss_mode` | `linear` or `linear_plus_pair` for the effective model |
//! | `gamma_convention` | `cavity_only` or `with_pair_loss` for U/Γ |
//! | `seed`, `rel_tol`, `abs_tol`, `max_step`, `propagator`, `exp_substeps` | integrator |
//! | `sweep`, `disorder`, `draws` | parameter scans |

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{IntegratorConfig, Propagator};
use crate::error::{Error, Result};
use crate::models::LossMode;
use crate::params::{Boundary, CavityOverrides, DriveRamp, LatticeSpec, LossConvention, PhysicalParams};

/// Which solvers a time-evolution command runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverChoice {
    Master,
    Trajectory,
    #[default]
    Both,
}

impl SolverChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverChoice::Master => "master",
            SolverChoice::Trajectory => "trajectory",
            SolverChoice::Both => "both",
        }
    }

    pub fn master(&self) -> bool {
        matches!(self, SolverChoice::Master | SolverChoice::Both)
    }

    pub fn trajectory(&self) -> bool {
        matches!(self, SolverChoice::Trajectory | SolverChoice::Both)
    }
}

impl std::str::FromStr for SolverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "master" => Ok(SolverChoice::Master),
            "trajectory" => Ok(SolverChoice::Trajectory),
            "both" => Ok(SolverChoice::Both),
            other => Err(Error::Config(format!(
                "solver must be `master`, `trajectory` or `both`, got `{other}`"
            ))),
        }
    }
}

/// Named starting points for a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Three cavities, constant drive, one photon per cavity.
    Mott,
    /// As `Mott` with Δ = -2.5e9, J = 2.5e6 and Ω ramped from 10 to 100 √N g13.
    Transition,
    Microtoroid,
    CircuitQed,
}

impl Preset {
    pub fn as_str(&self) -> &'static str {
        match self {
            Preset::Mott => "mott",
            Preset::Transition => "transition",
            Preset::Microtoroid => "microtoroid",
            Preset::CircuitQed => "circuit_qed",
        }
    }

    pub fn config(&self) -> RunConfig {
        let mott = RunConfig {
            physical: PhysicalParams::mott_insulator(),
            omega_final: None,
            lattice: LatticeSpec::new(3, 1.2e6, Boundary::Periodic),
            cap: 3,
            initial: vec![1, 1, 1],
            duration: 1.0e-6,
            samples: 101,
            solver: SolverChoice::Both,
            n_traj: 200,
            loss_mode: LossMode::Linear,
            gamma_convention: LossConvention::CavityOnly,
            seed: 1,
            rel_tol: IntegratorConfig::DEFAULT_REL_TOL,
            abs_tol: IntegratorConfig::DEFAULT_ABS_TOL,
            max_step: None,
            propagator: Propagator::Auto,
            exp_substeps: IntegratorConfig::DEFAULT_EXP_SUBSTEPS,
            sweep: Vec::new(),
            disorder: 0.0,
            draws: 1,
        };
        match self {
            Preset::Mott => mott,
            Preset::Transition => {
                let physical = PhysicalParams::superfluid_transition();
                RunConfig {
                    omega_final: Some(10.0 * physical.omega),
                    physical,
                    lattice: LatticeSpec::new(3, 2.5e6, Boundary::Periodic),
                    duration: 2.0e-6,
                    samples: 101,
                    n_traj: 100,
                    ..mott
                }
            }
            Preset::Microtoroid => RunConfig {
                physical: PhysicalParams::microtoroid_benchmark(),
                ..mott
            },
            Preset::CircuitQed => RunConfig {
                physical: PhysicalParams::circuit_qed(),
                lattice: LatticeSpec::new(3, 0.0, Boundary::Periodic),
                ..mott
            },
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mott" => Ok(Preset::Mott),
            "transition" => Ok(Preset::Transition),
            "microtoroid" => Ok(Preset::Microtoroid),
            "circuit_qed" => Ok(Preset::CircuitQed),
            other => Err(Error::Config(format!(
                "unknown preset `{other}` (expected mott, transition, microtoroid or circuit_qed)"
            ))),
        }
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub physical: PhysicalParams,
    /// End point of a linear drive ramp across the window, if any.
    pub omega_final: Option<f64>,
    pub lattice: LatticeSpec,
    pub cap: u32,
    pub initial: Vec<u32>,
    pub duration: f64,
    pub samples: usize,
    pub solver: SolverChoice,
    pub n_traj: usize,
    pub loss_mode: LossMode,
    pub gamma_convention: LossConvention,
    pub seed: u64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: Option<f64>,
    pub propagator: Propagator,
    pub exp_substeps: usize,
    /// Scan axes, `name=lo:hi:n`.
    pub sweep: Vec<String>,
    /// Relative half-width of uniform per-cavity g24 disorder in scans.
    pub disorder: f64,
    pub draws: usize,
}

impl RunConfig {
    pub fn ramp(&self) -> Result<DriveRamp> {
        match self.omega_final {
            Some(end) => DriveRamp::linear(0.0, self.physical.omega, self.duration, end),
            None => Ok(DriveRamp::constant(self.physical.omega)),
        }
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
            sample_times: crate::dynamics::uniform_times(self.duration, self.samples),
            rng_seed: self.seed,
            propagator: self.propagator,
            exp_substeps: self.exp_substeps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.physical.validate()?;
        self.lattice.validate()?;
        self.ramp()?;
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::param("duration", "must be finite and > 0"));
        }
        if self.samples < 2 {
            return Err(Error::param("samples", "must be >= 2"));
        }
        if self.solver.trajectory() && self.n_traj < 1 {
            return Err(Error::param("n_traj", "must be >= 1 when trajectories are requested"));
        }
        if self.cap < 1 {
            return Err(Error::param("cap", "must be >= 1"));
        }
        if self.initial.len() != self.lattice.sites {
            return Err(Error::param("initial", "needs one photon number per cavity"));
        }
        let photons: u32 = self.initial.iter().sum();
        if photons > self.cap {
            return Err(Error::CapViolation {
                requested: photons,
                cap: self.cap,
            });
        }
        if !(self.disorder >= 0.0 && self.disorder < 1.0) {
            return Err(Error::param("disorder", "must lie in [0, 1)"));
        }
        if self.draws < 1 {
            return Err(Error::param("draws", "must be >= 1"));
        }
        self.integrator().validate()
    }

    /// Parses TOML text. Without a `preset` key every physical key is required.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        file.resolve()
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// TOML listing every key, which [`RunConfig::from_toml`] reads back to `self`.
    pub fn to_echo(&self) -> String {
        let p = &self.physical;
        let o = &self.lattice.overrides;
        let non_empty = |v: &Vec<f64>| (!v.is_empty()).then(|| v.clone());
        let file = ConfigFile {
            preset: None,
            omega: Some(p.omega),
            omega_final: self.omega_final,
            g13: Some(p.g13),
            g24: Some(p.g24),
            delta: Some(p.level3_detuning),
            delta4: Some(p.level4_detuning),
            epsilon: Some(p.two_photon_detuning),
            atoms: Some(p.atoms),
            gamma_c: Some(p.cavity_decay),
            gamma_4: Some(p.level4_decay),
            sites: Some(self.lattice.sites),
            hopping: Some(self.lattice.hopping),
            boundary: Some(self.lattice.boundary.as_str().to_string()),
            delta_c: non_empty(&o.delta_c),
            g13_scale: non_empty(&o.g13_scale),
            g24_scale: non_empty(&o.g24_scale),
            omega_scale: non_empty(&o.omega_scale),
            cap: Some(self.cap),
            initial: Some(self.initial.clone()),
            duration: Some(self.duration),
            samples: Some(self.samples),
            solver: Some(self.solver.as_str().to_string()),
            n_traj: Some(self.n_traj),
            loss_mode: Some(self.loss_mode.as_str().to_string()),
            gamma_convention: Some(convention_str(self.gamma_convention).to_string()),
            seed: Some(self.seed),
            rel_tol: Some(self.rel_tol),
            abs_tol: Some(self.abs_tol),
            max_step: self.max_step,
            propagator: Some(self.propagator.as_str().to_string()),
            exp_substeps: Some(self.exp_substeps),
            sweep: (!self.sweep.is_empty()).then(|| self.sweep.clone()),
            disorder: Some(self.disorder),
            draws: Some(self.draws),
        };
        toml::to_string(&file).expect("flat config serializes")
    }
}

fn convention_str(c: LossConvention) -> &'static str {
    match c {
        LossConvention::CavityOnly => "cavity_only",
        LossConvention::WithPairLoss => "with_pair_loss",
    }
}

fn parse_convention(s: &str) -> Result<LossConvention> {
    match s {
        "cavity_only" => Ok(LossConvention::CavityOnly),
        "with_pair_loss" => Ok(LossConvention::WithPairLoss),
        other => Err(Error::Config(format!(
            "gamma_convention must be `cavity_only` or `with_pair_loss`, got `{other}`"
        ))),
    }
}

/// On-disk layout; every key optional so that presets can fill gaps.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(rename = "Omega")]
    omega: Option<f64>,
    #[serde(rename = "Omega_final", skip_serializing_if = "Option::is_none")]
    omega_final: Option<f64>,
    g13: Option<f64>,
    g24: Option<f64>,
    delta: Option<f64>,
    #[serde(rename = "Delta")]
    delta4: Option<f64>,
    epsilon: Option<f64>,
    #[serde(rename = "N")]
    atoms: Option<u64>,
    #[serde(rename = "Gamma_C")]
    gamma_c: Option<f64>,
    #[serde(rename = "Gamma_4")]
    gamma_4: Option<f64>,
    #[serde(rename = "L")]
    sites: Option<usize>,
    #[serde(rename = "J")]
    hopping: Option<f64>,
    boundary: Option<String>,
    #[serde(rename = "delta_C", skip_serializing_if = "Option::is_none")]
    delta_c: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    g13_scale: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    g24_scale: Option<Vec<f64>>,
    #[serde(rename = "Omega_scale", skip_serializing_if = "Option::is_none")]
    omega_scale: Option<Vec<f64>>,
    cap: Option<u32>,
    initial: Option<Vec<u32>>,
    duration: Option<f64>,
    samples: Option<usize>,
    solver: Option<String>,
    n_traj: Option<usize>,
    loss_mode: Option<String>,
    gamma_convention: Option<String>,
    seed: Option<u64>,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_step: Option<f64>,
    propagator: Option<String>,
    exp_substeps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<Vec<String>>,
    disorder: Option<f64>,
    draws: Option<usize>,
}

impl ConfigFile {
    fn resolve(self) -> Result<RunConfig> {
        let base = match &self.preset {
            Some(name) => Some(name.parse::<Preset>()?.config()),
            None => None,
        };
        let defaults = base.clone().unwrap_or_else(|| Preset::Mott.config());
        // Physical keys have no default unless a preset supplies one.
        macro_rules! physical {
            ($value:expr, $key:literal, $from:expr) => {
                match ($value, &base) {
                    (Some(v), _) => v,
                    (None, Some(b)) => $from(b),
                    (None, None) => return Err(Error::MissingField($key.to_string())),
                }
            };
        }
        let physical = PhysicalParams {
            omega: physical!(self.omega, "Omega", |b: &RunConfig| b.physical.omega),
            g13: physical!(self.g13, "g13", |b: &RunConfig| b.physical.g13),
            g24: physical!(self.g24, "g24", |b: &RunConfig| b.physical.g24),
            level3_detuning: physical!(self.delta, "delta", |b: &RunConfig| b.physical.level3_detuning),
            level4_detuning: physical!(self.delta4, "Delta", |b: &RunConfig| b.physical.level4_detuning),
            two_photon_detuning: self.epsilon.unwrap_or(defaults.physical.two_photon_detuning),
            atoms: physical!(self.atoms, "N", |b: &RunConfig| b.physical.atoms),
            cavity_decay: physical!(self.gamma_c, "Gamma_C", |b: &RunConfig| b.physical.cavity_decay),
            level4_decay: physical!(self.gamma_4, "Gamma_4", |b: &RunConfig| b.physical.level4_decay),
        };
        // A preset ramp keeps its Ω_final / Ω ratio when Ω is overridden.
        let omega_final = match (self.omega_final, defaults.omega_final, self.omega) {
            (Some(end), _, _) => Some(end),
            (None, Some(end), Some(omega)) => Some(end / defaults.physical.omega * omega),
            (None, end, _) => end,
        };
        let sites = self.sites.unwrap_or(defaults.lattice.sites);
        let boundary = match self.boundary {
            Some(b) => b.parse()?,
            None => defaults.lattice.boundary,
        };
        let mut lattice = LatticeSpec::new(sites, self.hopping.unwrap_or(defaults.lattice.hopping), boundary);
        lattice.overrides = CavityOverrides {
            delta_c: self.delta_c.unwrap_or_default(),
            g13_scale: self.g13_scale.unwrap_or_default(),
            g24_scale: self.g24_scale.unwrap_or_default(),
            omega_scale: self.omega_scale.unwrap_or_default(),
        };
        let initial = match self.initial {
            Some(v) => v,
            None if sites == defaults.initial.len() => defaults.initial.clone(),
            None => vec![1; sites],
        };
        let config = RunConfig {
            physical,
            omega_final,
            lattice,
            cap: self.cap.unwrap_or(defaults.cap),
            initial,
            duration: self.duration.unwrap_or(defaults.duration),
            samples: self.samples.unwrap_or(defaults.samples),
            solver: match self.solver {
                Some(s) => s.parse()?,
                None => defaults.solver,
            },
            n_traj: self.n_traj.unwrap_or(defaults.n_traj),
            loss_mode: match self.loss_mode {
                Some(s) => s.parse()?,
                None => defaults.loss_mode,
            },
            gamma_convention: match self.gamma_convention {
                Some(s) => parse_convention(&s)?,
                None => defaults.gamma_convention,
            },
            seed: self.seed.unwrap_or(defaults.seed),
            rel_tol: self.rel_tol.unwrap_or(defaults.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(defaults.abs_tol),
            max_step: self.max_step.or(defaults.max_step),
            propagator: match self.propagator {
                Some(s) => s.parse()?,
                None => defaults.propagator,
            },
            exp_substeps: self.exp_substeps.unwrap_or(defaults.exp_substeps),
            sweep: self.sweep.unwrap_or_default(),
            disorder: self.disorder.unwrap_or(defaults.disorder),
            draws: self.draws.unwrap_or(defaults.draws),
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
Omega = 1.5811388300841898e12
g13 = 2.5e9
g24 = 2.5e9
delta = 1.0e11
Delta = -1.25e9
N = 1000
Gamma_C = 0.4e5
Gamma_4 = 1.6e7
"#;

    #[test]
    fn explicit_file_matches_preset() {
        let c = RunConfig::from_toml(FULL).unwrap();
        let preset = Preset::Mott.config();
        assert!((c.physical.omega / preset.physical.omega - 1.0).abs() < 1e-15);
        assert_eq!(c.lattice, preset.lattice);
        assert_eq!(c.initial, vec![1, 1, 1]);
    }

    #[test]
    fn missing_field_is_named() {
        let text = FULL.replace("g24 = 2.5e9\n", "");
        match RunConfig::from_toml(&text) {
            Err(Error::MissingField(name)) => assert_eq!(name, "g24"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_toml("preset = \"mott\"\nOmgea = 1.0\n").unwrap_err();
        assert!(err.is_input_error());
        assert!(err.to_string().contains("Omgea"));
    }

    #[test]
    fn preset_overrides() {
        let c = RunConfig::from_toml("preset = \"mott\"\nJ = 3e6\nseed = 9\nsolver = \"master\"\n").unwrap();
        assert_eq!(c.lattice.hopping, 3e6);
        assert_eq!(c.seed, 9);
        assert_eq!(c.solver, SolverChoice::Master);
        assert_eq!(c.physical, PhysicalParams::mott_insulator());
    }

    #[test]
    fn echo_round_trips_for_every_preset() {
        for preset in [Preset::Mott, Preset::Transition, Preset::Microtoroid, Preset::CircuitQed] {
            let mut c = preset.config();
            c.max_step = Some(1e-12);
            c.lattice.overrides.delta_c = vec![1.0, -2.0, 0.5];
            c.sweep = vec!["Omega=1e11:1e12:3".into()];
            let echo = c.to_echo();
            let back = RunConfig::from_toml(&echo).unwrap();
            assert_eq!(back, c, "{}", preset.as_str());
            assert_eq!(back.to_echo(), echo);
        }
    }

    #[test]
    fn transition_ramp_spans_a_decade() {
        let c = Preset::Transition.config();
        let ramp = c.ramp().unwrap();
        assert_eq!(ramp.at(c.duration), 10.0 * ramp.initial());
        let g = c.physical.collective_coupling();
        assert!((ramp.initial() / g - 10.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_values_are_input_errors() {
        for text in [
            "preset = \"mott\"\nsamples = 1\n",
            "preset = \"mott\"\nsolver = \"fast\"\n",
            "preset = \"mott\"\ninitial = [2, 2, 2]\n",
            "preset = \"nope\"\n",
            "preset = \"mott\"\nDelta = 0.0\ncap = 0\n",
        ] {
            let err = RunConfig::from_toml(text).unwrap_err();
            assert!(err.is_input_error(), "{text}: {err}");
        }
    }
}
