// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Piecewise-constant propagators `exp(-i H_eff τ)`, computed block by
//! block over the excitation sectors that `H_eff` leaves invariant.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fock::{FockBasis, C64};

#[derive(Debug)]
pub(crate) struct BlockPropagator {
    blocks: Vec<(Vec<usize>, DMatrix<C64>)>,
}

impl BlockPropagator {
    pub fn new(h_eff: &DMatrix<C64>, sectors: &[Vec<usize>], tau: f64) -> Self {
        let blocks = sectors
            .iter()
            .filter(|idx| !idx.is_empty())
            .map(|idx| {
                let block = DMatrix::from_fn(idx.len(), idx.len(), |r, c| h_eff[(idx[r], idx[c])] * C64::new(0.0, -tau));
                (idx.clone(), expm(&block))
            })
            .collect();
        Self { blocks }
    }

    pub fn apply(&self, psi: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(psi.len());
        for (idx, u) in &self.blocks {
            if idx.iter().all(|&k| psi[k] == C64::new(0.0, 0.0)) {
                continue;
            }
            let x = DVector::from_iterator(idx.len(), idx.iter().map(|&k| psi[k]));
            let y = u * x;
            for (i, &k) in idx.iter().enumerate() {
                out[k] = y[i];
            }
        }
        out
    }
}

/// Complex matrix held as separate real and imaginary parts, so that
/// products run on the real matrix-multiply kernel.
struct Split {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
}

impl Split {
    fn from_complex(m: &DMatrix<C64>) -> Self {
        Self {
            re: m.map(|z| z.re),
            im: m.map(|z| z.im),
        }
    }

    fn identity(n: usize) -> Self {
        Self {
            re: DMatrix::identity(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    fn to_complex(&self) -> DMatrix<C64> {
        self.re.zip_map(&self.im, C64::new)
    }

    fn mul(&self, other: &Split) -> Split {
        let mut re = &self.re * &other.re;
        re.gemm(-1.0, &self.im, &other.im, 1.0);
        let mut im = &self.re * &other.im;
        im.gemm(1.0, &self.im, &other.re, 1.0);
        Split { re, im }
    }

    /// `self += c · other` for complex `c`.
    fn add_scaled(&mut self, c: C64, other: &Split) {
        self.re += &other.re * c.re - &other.im * c.im;
        self.im += &other.im * c.re + &other.re * c.im;
    }

    fn scale_real(&mut self, x: f64) {
        self.re *= x;
        self.im *= x;
    }

    fn norm_one(&self) -> f64 {
        (0..self.re.ncols())
            .map(|c| {
                self.re
                    .column(c)
                    .iter()
                    .zip(self.im.column(c).iter())
                    .map(|(a, b)| a.hypot(*b))
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// Taylor degree after scaling to unit 1-norm; the truncation error is
/// below `e / 19!`, under one unit in the last place.
const TAYLOR_DEGREE: usize = 18;

/// Matrix exponential by scaling and squaring with a degree-18 Taylor
/// polynomial, evaluated in blocks of `A^4`.
pub(crate) fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let mut x = Split::from_complex(a);
    let norm = x.norm_one();
    let squarings = if norm > 1.0 { norm.log2().ceil() as i32 } else { 0 };
    x.scale_real(0.5f64.powi(squarings));
    let mut coef = [1.0; TAYLOR_DEGREE + 1];
    for k in 1..=TAYLOR_DEGREE {
        coef[k] = coef[k - 1] / k as f64;
    }
    let x2 = x.mul(&x);
    let x3 = x2.mul(&x);
    let x4 = x2.mul(&x2);
    let powers = [Split::identity(n), x, x2, x3];
    let block = |j: usize| {
        let mut b = Split {
            re: DMatrix::zeros(n, n),
            im: DMatrix::zeros(n, n),
        };
        for (i, p) in powers.iter().enumerate() {
            if let Some(&c) = coef.get(4 * j + i) {
                b.add_scaled(C64::new(c, 0.0), p);
            }
        }
        b
    };
    let blocks = TAYLOR_DEGREE / 4;
    let mut result = block(blocks);
    for j in (0..blocks).rev() {
        result = result.mul(&x4);
        let b = block(j);
        result.re += &b.re;
        result.im += &b.im;
    }
    for _ in 0..squarings {
        result = result.mul(&result);
    }
    result.to_complex()
}

/// Weighted-excitation sectors of `basis`, after checking that `h_eff`
/// has no entries between different sectors.
pub(crate) fn invariant_sectors(basis: &FockBasis, h_eff: &DMatrix<C64>) -> Result<Vec<Vec<usize>>> {
    for r in 0..basis.dim() {
        for c in 0..basis.dim() {
            if basis.excitation(r) != basis.excitation(c) && h_eff[(r, c)] != C64::new(0.0, 0.0) {
                return Err(Error::InvalidOperator(
                    "exponential propagation needs an excitation-conserving Hamiltonian".into(),
                ));
            }
        }
    }
    Ok((0..=basis.excitation_cap())
        .map(|n| basis.sector(n).to_vec())
        .collect())
}

/// Propagators over one segment of length `unit · 2^depth`, for every
/// power-of-two fraction down to `unit`. Levels are built on first use.
pub(crate) struct SegmentLadder {
    h_eff: DMatrix<C64>,
    unit: f64,
    levels: Vec<OnceLock<BlockPropagator>>,
}

impl SegmentLadder {
    pub fn new(h_eff: DMatrix<C64>, segment: f64, depth: u32) -> Self {
        Self {
            h_eff,
            unit: segment / (1u64 << depth) as f64,
            levels: (0..=depth).map(|_| OnceLock::new()).collect(),
        }
    }

    #[cfg(test)]
    pub fn depth(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn unit(&self) -> f64 {
        self.unit
    }

    /// Propagator over `2^level` units.
    pub fn level(&self, level: u32, sectors: &[Vec<usize>]) -> &BlockPropagator {
        self.levels[level as usize].get_or_init(|| {
            BlockPropagator::new(&self.h_eff, sectors, self.unit * (1u64 << level) as f64)
        })
    }
}
