// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated multimode occupation-number bases.
//!
//! A basis holds every occupation vector `n` with `n_i <= cutoff_i` and
//! `sum_i w_i n_i <= cap`, in lexicographic order.

mod operator;
mod state;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use operator::{Ladder, SparseOperator};
pub use state::{QuantumState, StatePayload};

pub use num_complex::Complex64 as C64;

/// Default bound on the number of basis states.
pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeSpec {
    pub label: String,
    pub weight: u32,
    pub local_cutoff: u32,
}

impl ModeSpec {
    pub fn new(label: impl Into<String>, weight: u32, local_cutoff: u32) -> Self {
        Self {
            label: label.into(),
            weight,
            local_cutoff,
        }
    }
}

#[derive(Debug)]
pub struct FockBasis {
    modes: Vec<ModeSpec>,
    cap: u32,
    occupations: Vec<u16>,
    excitations: Vec<u32>,
    index: HashMap<Vec<u16>, usize>,
    sectors: Vec<Vec<usize>>,
}

impl FockBasis {
    pub fn new(modes: Vec<ModeSpec>, cap: u32) -> Result<Self> {
        Self::with_limit(modes, cap, DEFAULT_STATE_LIMIT)
    }

    pub fn with_limit(modes: Vec<ModeSpec>, cap: u32, limit: usize) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParameter {
                field: "modes",
                reason: "basis needs at least one mode".into(),
            });
        }
        if let Some(m) = modes.iter().find(|m| m.weight == 0) {
            return Err(Error::InvalidParameter {
                field: "weight",
                reason: format!("mode `{}` has weight 0", m.label),
            });
        }
        let width = modes.len();
        let mut occupations = Vec::new();
        let mut excitations = Vec::new();
        let mut current = vec![0u16; width];
        enumerate(&modes, cap, limit, 0, 0, &mut current, &mut occupations, &mut excitations)?;

        let dim = excitations.len();
        let mut index = HashMap::with_capacity(dim);
        for k in 0..dim {
            index.insert(occupations[k * width..(k + 1) * width].to_vec(), k);
        }
        let mut sectors = vec![Vec::new(); cap as usize + 1];
        for (k, &e) in excitations.iter().enumerate() {
            sectors[e as usize].push(k);
        }
        Ok(Self {
            modes,
            cap,
            occupations,
            excitations,
            index,
            sectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.excitations.len()
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn excitation_cap(&self) -> u32 {
        self.cap
    }

    pub fn occupation(&self, k: usize) -> &[u16] {
        let w = self.modes.len();
        &self.occupations[k * w..(k + 1) * w]
    }

    pub fn index_of(&self, occupation: &[u16]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Weighted excitation number of state `k`.
    pub fn excitation(&self, k: usize) -> u32 {
        self.excitations[k]
    }

    /// Indices of the states with weighted excitation exactly `n`, in basis order.
    pub fn sector(&self, n: u32) -> &[usize] {
        self.sectors.get(n as usize).map_or(&[], Vec::as_slice)
    }

    pub fn mode_index(&self, label: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.label == label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.modes.len() {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                index: mode,
                modes: self.modes.len(),
            })
        }
    }

    /// Weighted excitation of an arbitrary occupation vector.
    pub fn weighted_total(&self, occupation: &[u16]) -> u32 {
        self.modes
            .iter()
            .zip(occupation)
            .map(|(m, &n)| m.weight * u32::from(n))
            .sum()
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    modes: &[ModeSpec],
    cap: u32,
    limit: usize,
    depth: usize,
    used: u32,
    current: &mut Vec<u16>,
    occupations: &mut Vec<u16>,
    excitations: &mut Vec<u32>,
) -> Result<()> {
    if depth == modes.len() {
        if excitations.len() >= limit {
            return Err(Error::BasisTooLarge { limit });
        }
        occupations.extend_from_slice(current);
        excitations.push(used);
        return Ok(());
    }
    let mode = &modes[depth];
    let max_n = ((cap - used) / mode.weight).min(mode.local_cutoff).min(u16::MAX as u32);
    for n in 0..=max_n {
        current[depth] = n as u16;
        enumerate(
            modes,
            cap,
            limit,
            depth + 1,
            used + n * mode.weight,
            current,
            occupations,
            excitations,
        )?;
    }
    current[depth] = 0;
    Ok(())
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.cap == other.cap && self.modes == other.modes
    }
}

impl fmt::Display for FockBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FockBasis[")?;
        for (i, m) in self.modes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", m.label)?;
        }
        write!(f, "; cap {}; dim {}]", self.cap, self.dim())
    }
}
