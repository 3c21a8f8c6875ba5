// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::{FockBasis, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

/// Complex sparse matrix in compressed-row form over a shared basis.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    basis: Arc<FockBasis>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
    hermitian_hint: bool,
}

impl SparseOperator {
    /// Builds from `(row, col, value)` entries; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(
        basis: Arc<FockBasis>,
        mut triplets: Vec<(usize, usize, C64)>,
        hermitian_hint: bool,
    ) -> Result<Self> {
        let dim = basis.dim();
        if let Some(&(r, c, _)) = triplets.iter().find(|&&(r, c, _)| r >= dim || c >= dim) {
            return Err(Error::InvalidOperator(format!(
                "entry ({r}, {c}) outside dimension {dim}"
            )));
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != C64::new(0.0, 0.0));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(merged.len());
        let mut vals = Vec::with_capacity(merged.len());
        for (r, c, v) in merged {
            row_ptr[r + 1] += 1;
            cols.push(c);
            vals.push(v);
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            basis,
            row_ptr,
            cols,
            vals,
            hermitian_hint,
        })
    }

    pub fn zero(basis: Arc<FockBasis>) -> Self {
        let dim = basis.dim();
        Self {
            basis,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
            hermitian_hint: true,
        }
    }

    pub fn identity(basis: Arc<FockBasis>) -> Self {
        Self::diagonal(basis, |_| 1.0)
    }

    /// Real diagonal operator with entries `f(k)`.
    pub fn diagonal(basis: Arc<FockBasis>, f: impl Fn(usize) -> f64) -> Self {
        let triplets = (0..basis.dim())
            .map(|k| (k, k, C64::new(f(k), 0.0)))
            .collect();
        Self::from_triplets(basis, triplets, true).expect("diagonal entries are in range")
    }

    /// Bosonic raising or lowering operator on `mode`. Amplitudes that would
    /// leave the basis are dropped.
    pub fn ladder(basis: Arc<FockBasis>, mode: usize, kind: Ladder) -> Result<Self> {
        basis.check_mode(mode)?;
        let mut triplets = Vec::new();
        let mut target = vec![0u16; basis.num_modes()];
        for k in 0..basis.dim() {
            let occ = basis.occupation(k);
            let n = occ[mode];
            target.copy_from_slice(occ);
            match kind {
                Ladder::Raise => {
                    target[mode] = n + 1;
                    if let Some(j) = basis.index_of(&target) {
                        triplets.push((j, k, C64::new((f64::from(n) + 1.0).sqrt(), 0.0)));
                    }
                }
                Ladder::Lower => {
                    if n == 0 {
                        continue;
                    }
                    target[mode] = n - 1;
                    if let Some(j) = basis.index_of(&target) {
                        triplets.push((j, k, C64::new(f64::from(n).sqrt(), 0.0)));
                    }
                }
            }
        }
        Self::from_triplets(basis, triplets, false)
    }

    pub fn raise(basis: &Arc<FockBasis>, mode: usize) -> Result<Self> {
        Self::ladder(basis.clone(), mode, Ladder::Raise)
    }

    pub fn lower(basis: &Arc<FockBasis>, mode: usize) -> Result<Self> {
        Self::ladder(basis.clone(), mode, Ladder::Lower)
    }

    /// Occupation of `mode`, built directly on the diagonal.
    pub fn number(basis: Arc<FockBasis>, mode: usize) -> Result<Self> {
        basis.check_mode(mode)?;
        let b = basis.clone();
        Ok(Self::diagonal(basis, move |k| f64::from(b.occupation(k)[mode])))
    }

    /// `sum_i w_i n_i`.
    pub fn weighted_number(basis: Arc<FockBasis>) -> Self {
        let b = basis.clone();
        Self::diagonal(basis, move |k| f64::from(b.excitation(k)))
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn with_hermitian_hint(mut self, hint: bool) -> Self {
        self.hermitian_hint = hint;
        self
    }

    /// Iterates over stored `(row, col, value)` entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim()).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |p| (r, self.cols[p], self.vals[p]))
        })
    }

    fn same_basis(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                left: self.basis.to_string(),
                right: other.basis.to_string(),
            })
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        self.same_basis(other)?;
        let triplets = self
            .entries()
            .chain(other.entries().map(|(r, c, v)| (r, c, v * sign)))
            .collect();
        Self::from_triplets(
            self.basis.clone(),
            triplets,
            self.hermitian_hint && other.hermitian_hint,
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= factor;
        }
        out.hermitian_hint = self.hermitian_hint && factor.im == 0.0;
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        let mut triplets = Vec::new();
        for (r, k, a) in self.entries() {
            for p in other.row_ptr[k]..other.row_ptr[k + 1] {
                triplets.push((r, other.cols[p], a * other.vals[p]));
            }
        }
        Self::from_triplets(self.basis.clone(), triplets, false)
    }

    pub fn adjoint(&self) -> Self {
        let triplets = self.entries().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.basis.clone(), triplets, self.hermitian_hint)
            .expect("transposed entries stay in range")
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        for r in 0..self.dim() {
            let mut acc = C64::new(0.0, 0.0);
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[p] * x[self.cols[p]];
            }
            y[r] = acc;
        }
    }

    /// `y += alpha A x`.
    pub fn apply_add(&self, alpha: C64, x: &[C64], y: &mut [C64]) {
        for r in 0..self.dim() {
            let mut acc = C64::new(0.0, 0.0);
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[p] * x[self.cols[p]];
            }
            y[r] += alpha * acc;
        }
    }

    pub fn apply_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim()];
        self.apply(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (r, c, v) in self.entries() {
            m[(r, c)] += v;
        }
        m
    }

    /// Dense sub-block on the given (row = column) index set.
    pub fn restrict(&self, indices: &[usize]) -> DMatrix<C64> {
        let mut position = vec![usize::MAX; self.dim()];
        for (i, &k) in indices.iter().enumerate() {
            position[k] = i;
        }
        let mut m = DMatrix::zeros(indices.len(), indices.len());
        for (i, &r) in indices.iter().enumerate() {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let j = position[self.cols[p]];
                if j != usize::MAX {
                    m[(i, j)] += self.vals[p];
                }
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// `max|M - M†| / max|M|`; zero for the zero operator.
    pub fn hermiticity_defect(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        self.max_abs_diff(&self.adjoint()).expect("same basis") / scale
    }

    /// One `row col re im` line per stored entry.
    pub fn dump_triplets(&self) -> String {
        let mut out = String::new();
        for (r, c, v) in self.entries() {
            writeln!(out, "{r} {c} {:.17e} {:.17e}", v.re, v.im).expect("writing to a String");
        }
        out
    }

    pub fn parse_triplets(basis: Arc<FockBasis>, text: &str, hermitian_hint: bool) -> Result<Self> {
        let mut triplets = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::InvalidOperator(format!("line {}: expected `row col re im`", lineno + 1));
            if fields.len() != 4 {
                return Err(bad());
            }
            let r = fields[0].parse().map_err(|_| bad())?;
            let c = fields[1].parse().map_err(|_| bad())?;
            let re = fields[2].parse().map_err(|_| bad())?;
            let im = fields[3].parse().map_err(|_| bad())?;
            triplets.push((r, c, C64::new(re, im)));
        }
        Self::from_triplets(basis, triplets, hermitian_hint)
    }
}
