// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Microscopic atom-cavity inputs and the closed-form quantities derived
//! from them.
//!
//! All frequencies are angular frequencies in rad/s and all rates are in
//! 1/s; values quoted in s⁻¹ are taken verbatim as rad/s. The on-site
//! repulsion is `U = -g24² g² / (Δ Ω²)`, so `Δ < 0` gives a repulsive
//! photon-photon interaction.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Inputs of the driven four-level atoms inside one cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Drive Rabi frequency Ω on the 2-3 transition.
    pub omega: f64,
    /// Single-atom cavity coupling on the 1-3 transition.
    pub g13: f64,
    /// Cavity coupling on the 2-4 transition.
    pub g24: f64,
    /// Detuning δ of level 3.
    pub level3_detuning: f64,
    /// Detuning Δ of level 4; its sign selects repulsion (Δ < 0) or attraction.
    pub level4_detuning: f64,
    /// Two-photon detuning ε.
    pub two_photon_detuning: f64,
    /// Number of atoms N.
    pub atoms: u64,
    /// Bare cavity decay rate Γ_C.
    pub cavity_decay: f64,
    /// Spontaneous emission rate Γ_4 of level 4.
    pub level4_decay: f64,
}

impl PhysicalParams {
    /// Micro-toroid array used for the Mott-insulator run: Ω = 20 √N g13.
    pub fn mott_insulator() -> Self {
        let atoms = 1000;
        let g13 = 2.5e9;
        Self {
            omega: 20.0 * (atoms as f64).sqrt() * g13,
            g13,
            g24: 2.5e9,
            level3_detuning: 1.0e11,
            level4_detuning: -1.25e9,
            two_photon_detuning: 0.0,
            atoms,
            cavity_decay: 0.4e5,
            level4_decay: 1.6e7,
        }
    }

    /// Starting point of the Mott-to-superfluid ramp: Ω = 10 √N g13, Δ = -2.5e9.
    pub fn superfluid_transition() -> Self {
        let base = Self::mott_insulator();
        Self {
            omega: 10.0 * base.collective_coupling(),
            level4_detuning: -2.5e9,
            ..base
        }
    }

    /// Micro-toroid figures with g/Ω = 0.1 and g24 g/|ΔΩ| = 0.1.
    pub fn microtoroid_benchmark() -> Self {
        let base = Self::mott_insulator();
        let g = base.collective_coupling();
        let omega = 10.0 * g;
        Self {
            omega,
            level4_detuning: -base.g24 * g / (0.1 * omega),
            ..base
        }
    }

    /// A single Cooper-pair box in a superconducting resonator with Q ~ 10⁶
    /// at 6 GHz, operated at g/Ω = 0.1 and g24 g/|ΔΩ| = 0.1.
    pub fn circuit_qed() -> Self {
        let coupling = 2.0 * std::f64::consts::PI * 9.0e6;
        let resonator = 2.0 * std::f64::consts::PI * 6.0e9;
        let g = coupling;
        let omega = 10.0 * g;
        Self {
            omega,
            g13: coupling,
            g24: coupling,
            level3_detuning: 2.0 * std::f64::consts::PI * 1.0e9,
            level4_detuning: -coupling * g / (0.1 * omega),
            two_photon_detuning: 0.0,
            atoms: 1,
            cavity_decay: resonator / 1.0e6,
            level4_decay: 2.0 * std::f64::consts::PI * 1.0e6,
        }
    }

    /// Collective coupling g = √N g13.
    pub fn collective_coupling(&self) -> f64 {
        (self.atoms as f64).sqrt() * self.g13
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("Omega", self.omega),
            ("g13", self.g13),
            ("g24", self.g24),
            ("delta", self.level3_detuning),
            ("Delta", self.level4_detuning),
            ("epsilon", self.two_photon_detuning),
            ("Gamma_C", self.cavity_decay),
            ("Gamma_4", self.level4_decay),
        ];
        for (field, value) in finite {
            if !value.is_finite() {
                return Err(Error::param(field, format!("must be finite, got {value}")));
            }
        }
        if self.omega <= 0.0 {
            return Err(Error::param("Omega", "must be > 0"));
        }
        if self.g13 <= 0.0 {
            return Err(Error::param("g13", "must be > 0"));
        }
        if self.g24 < 0.0 {
            return Err(Error::param("g24", "must be >= 0"));
        }
        if self.atoms < 1 {
            return Err(Error::param("N", "must be >= 1"));
        }
        if self.cavity_decay < 0.0 {
            return Err(Error::param("Gamma_C", "must be >= 0"));
        }
        if self.level4_decay < 0.0 {
            return Err(Error::param("Gamma_4", "must be >= 0"));
        }
        Ok(())
    }

    /// Copy with a different drive strength.
    pub fn with_omega(&self, omega: f64) -> Self {
        Self { omega, ..*self }
    }
}

/// Effective quantities computed from [`PhysicalParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub g: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub mu_zero: f64,
    /// On-site photon repulsion, `-g24² g² / (Δ Ω²)`.
    #[serde(rename = "U")]
    pub u: f64,
    /// Chemical-potential shift `ε g² / Ω²`.
    pub kappa: f64,
    pub gamma_linear: f64,
    /// Pair-loss coefficient `g24² g² Γ_4 / (Δ² Ω²)`, active for two or more photons.
    pub gamma_pair_coeff: f64,
}

impl DerivedParams {
    /// Effective photon loss rate with `photons` photons in the cavity:
    /// Γ_C, plus the pair-loss coefficient once at least two photons are present.
    pub fn effective_loss(&self, photons: u32) -> f64 {
        if photons >= 2 {
            self.gamma_linear + self.gamma_pair_coeff
        } else {
            self.gamma_linear
        }
    }

    /// Smallest separation between the dark polariton and a bright branch.
    pub fn polariton_gap(&self) -> f64 {
        (self.mu_plus - self.mu_zero)
            .abs()
            .min((self.mu_minus - self.mu_zero).abs())
    }
}

pub fn derive(params: &PhysicalParams) -> Result<DerivedParams> {
    params.validate()?;
    let delta4 = params.level4_detuning;
    if delta4 == 0.0 {
        return Err(Error::UndefinedNonlinearity);
    }
    let g = params.collective_coupling();
    let omega = params.omega;
    let delta3 = params.level3_detuning;
    let b = g.hypot(omega);
    let a = (4.0 * b * b + delta3 * delta3).sqrt();
    let g2_over_omega2 = (g / omega) * (g / omega);
    let u = -params.g24 * params.g24 * g2_over_omega2 / delta4;
    let pair = params.g24 * params.g24 * g2_over_omega2 / (delta4 * delta4) * params.level4_decay;
    // The branch on the far side of δ is formed from the product μ+ μ- = -B²
    // to avoid cancellation when |δ| >> B.
    let (mu_plus, mu_minus) = if delta3 >= 0.0 {
        let up = 0.5 * (delta3 + a);
        (up, -b * b / up)
    } else {
        let down = 0.5 * (delta3 - a);
        (-b * b / down, down)
    };
    Ok(DerivedParams {
        g,
        b,
        a,
        mu_plus,
        mu_minus,
        mu_zero: 0.0,
        u,
        kappa: params.two_photon_detuning * g2_over_omega2,
        gamma_linear: params.cavity_decay,
        gamma_pair_coeff: pair,
    })
}

/// Which loss rate enters the figure of merit U/Γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LossConvention {
    /// Γ = Γ_C, the rate seen by a singly occupied cavity.
    #[default]
    CavityOnly,
    /// Γ = Γ_C plus the pair-loss coefficient.
    WithPairLoss,
}

impl LossConvention {
    pub fn rate(&self, derived: &DerivedParams) -> f64 {
        match self {
            LossConvention::CavityOnly => derived.gamma_linear,
            LossConvention::WithPairLoss => derived.effective_loss(2),
        }
    }
}

pub fn figure_of_merit(params: &PhysicalParams, convention: LossConvention) -> Result<f64> {
    let derived = derive(params)?;
    let gamma = convention.rate(&derived);
    if gamma <= 0.0 {
        return Err(Error::UndefinedFigureOfMerit);
    }
    Ok(derived.u.abs() / gamma)
}

/// Ratio of the nonlinearity at the configured Δ to the one reached in the
/// weak-coupling regime |Δ| = 10 g24 (same sign as Δ).
pub fn gain_vs_legacy(params: &PhysicalParams) -> Result<f64> {
    let current = derive(params)?;
    if params.g24 == 0.0 {
        return Err(Error::param("g24", "legacy comparison needs g24 > 0"));
    }
    let legacy_delta = 10.0 * params.g24 * params.level4_detuning.signum();
    let legacy = derive(&PhysicalParams {
        level4_detuning: legacy_delta,
        ..*params
    })?;
    Ok(current.u / legacy.u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

impl Boundary {
    pub fn as_str(&self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "open" => Ok(Boundary::Open),
            other => Err(Error::Config(format!(
                "boundary must be `periodic` or `open`, got `{other}`"
            ))),
        }
    }
}

/// Optional per-cavity corrections. Each list is either empty or holds one
/// entry per cavity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CavityOverrides {
    /// Cavity detuning offset δ_C (rad/s).
    pub delta_c: Vec<f64>,
    pub g13_scale: Vec<f64>,
    pub g24_scale: Vec<f64>,
    pub omega_scale: Vec<f64>,
}

impl CavityOverrides {
    pub fn is_empty(&self) -> bool {
        self.delta_c.is_empty()
            && self.g13_scale.is_empty()
            && self.g24_scale.is_empty()
            && self.omega_scale.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub sites: usize,
    /// Hopping rate J.
    pub hopping: f64,
    pub boundary: Boundary,
    pub overrides: CavityOverrides,
}

impl LatticeSpec {
    pub fn new(sites: usize, hopping: f64, boundary: Boundary) -> Self {
        Self {
            sites,
            hopping,
            boundary,
            overrides: CavityOverrides::default(),
        }
    }

    pub fn single() -> Self {
        Self::new(1, 0.0, Boundary::Open)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 1 {
            return Err(Error::param("L", "must be >= 1"));
        }
        if !(self.hopping >= 0.0 && self.hopping.is_finite()) {
            return Err(Error::param("J", "must be finite and >= 0"));
        }
        let lists: [(&'static str, &Vec<f64>); 4] = [
            ("delta_C", &self.overrides.delta_c),
            ("g13_scale", &self.overrides.g13_scale),
            ("g24_scale", &self.overrides.g24_scale),
            ("Omega_scale", &self.overrides.omega_scale),
        ];
        for (field, list) in lists {
            if !list.is_empty() && list.len() != self.sites {
                return Err(Error::param(
                    field,
                    format!("expected {} entries, got {}", self.sites, list.len()),
                ));
            }
            if list.iter().any(|v| !v.is_finite()) {
                return Err(Error::param(field, "entries must be finite"));
            }
        }
        for (field, list) in &lists[1..] {
            if list.iter().any(|&s| s < 0.0) {
                return Err(Error::param(field, "scales must be >= 0"));
            }
        }
        if self.overrides.omega_scale.iter().any(|&s| s == 0.0) {
            return Err(Error::param("Omega_scale", "scales must be > 0"));
        }
        Ok(())
    }

    /// Unordered nearest-neighbour pairs, each listed once.
    pub fn neighbor_pairs(&self) -> Vec<(usize, usize)> {
        let l = self.sites;
        match (self.boundary, l) {
            (_, 0 | 1) => Vec::new(),
            (_, 2) => vec![(0, 1)],
            (Boundary::Open, _) => (0..l - 1).map(|i| (i, i + 1)).collect(),
            (Boundary::Periodic, _) => (0..l).map(|i| (i, (i + 1) % l)).collect(),
        }
    }

    /// The physical parameters seen by cavity `site` once its scales are applied.
    pub fn site_params(&self, params: &PhysicalParams, site: usize) -> PhysicalParams {
        let scale = |list: &Vec<f64>| list.get(site).copied().unwrap_or(1.0);
        PhysicalParams {
            omega: params.omega * scale(&self.overrides.omega_scale),
            g13: params.g13 * scale(&self.overrides.g13_scale),
            g24: params.g24 * scale(&self.overrides.g24_scale),
            ..*params
        }
    }

    pub fn cavity_detuning(&self, site: usize) -> f64 {
        self.overrides.delta_c.get(site).copied().unwrap_or(0.0)
    }

    pub fn max_cavity_detuning(&self) -> f64 {
        self.overrides
            .delta_c
            .iter()
            .fold(0.0_f64, |acc, d| acc.max(d.abs()))
    }
}

/// Piecewise-linear drive schedule Ω(t), clamped outside its knots.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveRamp {
    knots: Vec<(f64, f64)>,
}

impl DriveRamp {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::param("ramp", "needs at least one knot"));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::param("ramp", "knot times must be strictly increasing"));
            }
        }
        if knots.iter().any(|&(t, o)| !t.is_finite() || !(o > 0.0) || !o.is_finite()) {
            return Err(Error::param("ramp", "knot Ω values must be finite and > 0"));
        }
        Ok(Self { knots })
    }

    pub fn constant(omega: f64) -> Self {
        Self {
            knots: vec![(0.0, omega)],
        }
    }

    pub fn linear(t0: f64, omega0: f64, t1: f64, omega1: f64) -> Result<Self> {
        Self::new(vec![(t0, omega0), (t1, omega1)])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn at(&self, t: f64) -> f64 {
        let first = self.knots[0];
        let last = self.knots[self.knots.len() - 1];
        if t <= first.0 {
            return first.1;
        }
        if t >= last.0 {
            return last.1;
        }
        let k = self.knots.partition_point(|&(tk, _)| tk <= t);
        let (t0, o0) = self.knots[k - 1];
        let (t1, o1) = self.knots[k];
        o0 + (t - t0) / (t1 - t0) * (o1 - o0)
    }

    pub fn initial(&self) -> f64 {
        self.knots[0].1
    }

    pub fn is_constant(&self) -> bool {
        let first = self.knots[0].1;
        self.knots.iter().all(|&(_, o)| o == first)
    }

    pub fn max_omega(&self) -> f64 {
        self.knots.iter().fold(0.0_f64, |m, &(_, o)| m.max(o))
    }

    pub fn min_omega(&self) -> f64 {
        self.knots.iter().fold(f64::INFINITY, |m, &(_, o)| m.min(o))
    }
}

/// Names of the regime checks emitted by [`check_validity`].
pub mod checks {
    pub const COUPLING: &str = "g_over_Omega";
    pub const PERTURBATIVE: &str = "g24_g_over_Delta_Omega";
    pub const G24: &str = "g24_over_Omega";
    pub const DETUNING: &str = "Delta_over_Omega";
    pub const HOPPING_LOWER: &str = "J_over_lower_gap";
    pub const HOPPING_UPPER: &str = "J_over_upper_gap";
    pub const CAVITY_DETUNING: &str = "delta_C_over_gap";
    pub const MOTT_DETUNING: &str = "delta_C_over_U";

    pub const ALL: [&str; 8] = [
        COUPLING,
        PERTURBATIVE,
        G24,
        DETUNING,
        HOPPING_LOWER,
        HOPPING_UPPER,
        CAVITY_DETUNING,
        MOTT_DETUNING,
    ];
}

/// Upper bounds for each regime ratio, keyed by check name.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityThresholds {
    values: Vec<(&'static str, f64)>,
}

impl Default for ValidityThresholds {
    fn default() -> Self {
        use checks::*;
        Self {
            values: vec![
                (COUPLING, 0.1),
                (PERTURBATIVE, 0.1),
                (G24, 0.1),
                (DETUNING, 0.1),
                (HOPPING_LOWER, 1e-2),
                (HOPPING_UPPER, 1e-2),
                (CAVITY_DETUNING, 1e-2),
                (MOTT_DETUNING, 1.0),
            ],
        }
    }
}

impl ValidityThresholds {
    /// Every check set to the same bound.
    pub fn uniform(bound: f64) -> Self {
        Self {
            values: checks::ALL.iter().map(|&name| (name, bound)).collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    pub fn set(&mut self, name: &str, bound: f64) -> Result<()> {
        match self.values.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => {
                slot.1 = bound;
                Ok(())
            }
            None => Err(Error::UnknownParameter(name.to_string())),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        self.values.iter().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityCheck {
    pub name: String,
    pub ratio: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub checks: Vec<ValidityCheck>,
    pub overall_pass: bool,
}

impl ValidityReport {
    pub fn check(&self, name: &str) -> Option<&ValidityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<24} {:>12.4e} <= {:<10.3e} {}",
                c.name,
                c.ratio,
                c.threshold,
                if c.pass { "ok" } else { "FAIL" }
            )?;
        }
        write!(f, "overall: {}", if self.overall_pass { "pass" } else { "fail" })
    }
}

// Ratios sitting exactly on a threshold count as passing despite rounding.
const THRESHOLD_SLACK: f64 = 1e-12;

pub fn check_validity(
    params: &PhysicalParams,
    lattice: &LatticeSpec,
    thresholds: &ValidityThresholds,
) -> Result<ValidityReport> {
    let d = derive(params)?;
    let omega = params.omega;
    let max_dc = lattice.max_cavity_detuning();
    let lower_gap = (d.mu_minus - d.mu_zero).abs();
    let upper_gap = (d.mu_plus - d.mu_zero).abs();
    let mott_ratio = if max_dc == 0.0 {
        0.0
    } else {
        max_dc / d.u.abs()
    };
    let ratios = [
        (checks::COUPLING, d.g / omega),
        (
            checks::PERTURBATIVE,
            params.g24 * d.g / (params.level4_detuning * omega).abs(),
        ),
        (checks::G24, params.g24 / omega),
        (checks::DETUNING, params.level4_detuning.abs() / omega),
        (checks::HOPPING_LOWER, lattice.hopping / lower_gap),
        (checks::HOPPING_UPPER, lattice.hopping / upper_gap),
        (checks::CAVITY_DETUNING, max_dc / d.polariton_gap()),
        (checks::MOTT_DETUNING, mott_ratio),
    ];
    let checks: Vec<ValidityCheck> = ratios
        .iter()
        .map(|&(name, ratio)| {
            let threshold = thresholds.get(name).unwrap_or(f64::INFINITY);
            let pass = ratio <= threshold * (1.0 + THRESHOLD_SLACK);
            ValidityCheck {
                name: name.to_string(),
                ratio,
                threshold,
                pass,
            }
        })
        .collect();
    let overall_pass = checks.iter().all(|c| c.pass);
    Ok(ValidityReport {
        checks,
        overall_pass,
    })
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn valid_params() -> impl Strategy<Value = PhysicalParams> {
        (
            9.0f64..13.0,
            7.0f64..10.0,
            6.0f64..10.0,
            -1e12f64..1e12,
            prop_oneof![-1e11f64..-1e3, 1e3f64..1e11],
            1u64..5000,
        )
            .prop_map(|(lo, lg, lg24, d3, d4, n)| PhysicalParams {
                omega: 10f64.powf(lo),
                g13: 10f64.powf(lg),
                g24: 10f64.powf(lg24),
                level3_detuning: d3,
                level4_detuning: d4,
                two_photon_detuning: 0.0,
                atoms: n,
                cavity_decay: 1e4,
                level4_decay: 1e7,
            })
    }

    proptest! {
        #[test]
        fn branch_product_is_minus_b_squared(p in valid_params()) {
            let d = derive(&p).unwrap();
            let product = d.mu_plus * d.mu_minus;
            prop_assert!((product + d.b * d.b).abs() <= 1e-12 * d.b * d.b * 4.0);
            prop_assert!(d.b >= d.g && d.b >= p.omega);
            prop_assert!(d.a >= 2.0 * d.b);
            prop_assert_eq!(d.mu_zero, 0.0);
        }

        #[test]
        fn repulsion_is_odd_in_detuning(p in valid_params()) {
            let flipped = PhysicalParams { level4_detuning: -p.level4_detuning, ..p };
            let u = derive(&p).unwrap().u;
            let uf = derive(&flipped).unwrap().u;
            prop_assert_eq!(u, -uf);
            prop_assert!(u == 0.0 || u.signum() == -p.level4_detuning.signum());
        }

        #[test]
        fn repulsion_scales_inverse_square_in_drive(p in valid_params(), s in 0.5f64..4.0) {
            let u = derive(&p).unwrap().u;
            let us = derive(&p.with_omega(p.omega * s)).unwrap().u;
            prop_assert!((us / u * s * s - 1.0).abs() < 1e-12);
        }

        #[test]
        fn derive_is_deterministic(p in valid_params()) {
            let a = derive(&p).unwrap();
            let b = derive(&p).unwrap();
            prop_assert_eq!(a.u.to_bits(), b.u.to_bits());
            prop_assert_eq!(a.a.to_bits(), b.a.to_bits());
        }

        #[test]
        fn infinite_thresholds_always_pass(p in valid_params(), j in 0.0f64..1e9) {
            let mut lattice = LatticeSpec::new(3, j, Boundary::Periodic);
            lattice.overrides.delta_c = vec![1e9, 0.0, -3e8];
            let report = check_validity(&p, &lattice, &ValidityThresholds::uniform(f64::INFINITY)).unwrap();
            prop_assert!(report.overall_pass);
        }
    }
}
