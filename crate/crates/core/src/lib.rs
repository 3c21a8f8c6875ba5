// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Photon blockade and photonic Mott physics in arrays of coupled cavities
//! filled with EIT-driven four-level atoms.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod models;
pub mod observables;
pub mod output;
pub mod params;
pub mod polariton;
pub mod scenario;

pub use error::{Error, Result};
