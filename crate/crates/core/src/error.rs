// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("nonlinearity undefined at Δ=0 (field `Delta`)")]
    UndefinedNonlinearity,

    #[error("undefined figure of merit: effective loss rate Γ is zero")]
    UndefinedFigureOfMerit,

    #[error("basis too large: more than {limit} states")]
    BasisTooLarge { limit: usize },

    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: String, right: String },

    #[error("mode {index} out of range for a basis with {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("no mode labelled `{0}` in basis")]
    UnknownMode(String),

    #[error("excitation cap violated: requested weighted excitation {requested} exceeds cap {cap}")]
    CapViolation { requested: u32, cap: u32 },

    #[error("zero-norm state")]
    ZeroNorm,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("negative variance {0:e} beyond round-off")]
    NegativeVariance(f64),

    #[error(
        "dark branch not identifiable in the {excitations}-excitation sector: maximal overlap {overlap:.4} < 0.5"
    )]
    DarkBranchNotIdentifiable { excitations: u32, overlap: f64 },

    #[error("integration failed at t = {time:e} s: {reason}")]
    Integration { time: f64, reason: String },

    #[error("triggered jump at t = {time:e} s with zero total jump weight")]
    JumpDegeneracy { time: f64 },

    #[error("trajectory {index}: {source}")]
    Trajectory {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("time series have disjoint time ranges")]
    DisjointTimeRanges,

    #[error("time series: {0}")]
    TimeSeries(String),

    #[error("missing required field `{0}`")]
    MissingField(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for failures caused by user input rather than by a running solver.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::UndefinedNonlinearity
                | Error::BasisTooLarge { .. }
                | Error::CapViolation { .. }
                | Error::UnknownMode(_)
                | Error::MissingField(_)
                | Error::UnknownParameter(_)
                | Error::Config(_)
                | Error::TimeSeries(_)
                | Error::DisjointTimeRanges
        )
    }
}
