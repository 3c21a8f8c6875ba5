// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Photon numbers, number fluctuations, survival, and sampled time series.

use std::fmt::Write as _;

use crate::dynamics::{EnsembleStats, MasterRecord, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::fock::QuantumState;

/// Round-off allowance for a negative variance before it is treated as an error.
pub const VARIANCE_CLIP: f64 = 1e-12;

/// `(<n>, <n²>)` of basis mode `mode`, from the diagonal populations.
pub fn photon_moments_at_mode(state: &QuantumState, mode: usize) -> Result<(f64, f64)> {
    let basis = state.basis();
    basis.check_mode(mode)?;
    let populations = state.populations()?;
    let mut n1 = 0.0;
    let mut n2 = 0.0;
    for (k, p) in populations.iter().enumerate() {
        let n = f64::from(basis.occupation(k)[mode]);
        n1 += p * n;
        n2 += p * n * n;
    }
    Ok((n1, n2))
}

fn cavity_mode(state: &QuantumState, cavity: usize) -> Result<usize> {
    state.basis().mode_index(&format!("a[{cavity}]"))
}

/// `<a_l† a_l>` of cavity `l`, normalized by the state norm.
pub fn photon_number(state: &QuantumState, cavity: usize) -> Result<f64> {
    Ok(photon_moments_at_mode(state, cavity_mode(state, cavity)?)?.0)
}

/// Standard deviation of the photon number of cavity `l`.
pub fn photon_fluctuation(state: &QuantumState, cavity: usize) -> Result<f64> {
    let (n1, n2) = photon_moments_at_mode(state, cavity_mode(state, cavity)?)?;
    fluctuation_from_moments(n1, n2)
}

pub fn fluctuation_from_moments(n1: f64, n2: f64) -> Result<f64> {
    let var = n2 - n1 * n1;
    if var < -VARIANCE_CLIP {
        return Err(Error::NegativeVariance(var));
    }
    Ok(var.max(0.0).sqrt())
}

/// The survival column of a trajectory; `1 - survival` is its loss probability.
pub fn survival_probability(record: &TrajectoryRecord) -> Vec<f64> {
    record.survival.clone()
}

/// Sampled real columns on a shared time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    columns: Vec<(String, Vec<f64>)>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>) -> Self {
        Self {
            times,
            columns: Vec::new(),
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.times.len() {
            return Err(Error::TimeSeries(format!(
                "column `{name}` has {} values for {} times",
                values.len(),
                self.times.len()
            )));
        }
        if name == "time" || self.column(&name).is_some() {
            return Err(Error::TimeSeries(format!("duplicate column `{name}`")));
        }
        self.columns.push((name, values));
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    /// Appends every column of `other` under `prefix`; grids must match exactly.
    pub fn extend_prefixed(&mut self, prefix: &str, other: &TimeSeries) -> Result<()> {
        if other.times != self.times {
            return Err(Error::TimeSeries("time grids differ".into()));
        }
        for (name, values) in &other.columns {
            self.push(format!("{prefix}{name}"), values.clone())?;
        }
        Ok(())
    }

    /// Columns whose name starts with `prefix`, with the prefix removed.
    pub fn select_prefix(&self, prefix: &str) -> TimeSeries {
        TimeSeries {
            times: self.times.clone(),
            columns: self
                .columns
                .iter()
                .filter_map(|(n, v)| n.strip_prefix(prefix).map(|s| (s.to_string(), v.clone())))
                .collect(),
        }
    }

    /// Linear interpolation of column `name` at `t` (inside the grid).
    fn interpolate(&self, values: &[f64], t: f64) -> f64 {
        let k = self.times.partition_point(|&x| x < t);
        if k == 0 {
            return values[0];
        }
        if k == self.times.len() {
            return values[k - 1];
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        if t1 == t {
            return values[k];
        }
        values[k - 1] + (t - t0) / (t1 - t0) * (values[k] - values[k - 1])
    }

    /// CSV with a `time` column first and every value at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time");
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (k, t) in self.times.iter().enumerate() {
            write!(out, "{t:.16e}").expect("writing to a String");
            for (_, values) in &self.columns {
                write!(out, ",{:.16e}", values[k]).expect("writing to a String");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::TimeSeries("empty CSV".into()))?;
        let names: Vec<&str> = header.split(',').map(str::trim).collect();
        if names.first() != Some(&"time") {
            return Err(Error::TimeSeries("first CSV column must be `time`".into()));
        }
        let mut times = Vec::new();
        let mut data = vec![Vec::new(); names.len() - 1];
        for (row, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != names.len() {
                return Err(Error::TimeSeries(format!(
                    "row {} has {} fields, header has {}",
                    row + 2,
                    fields.len(),
                    names.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::TimeSeries(format!("row {}: cannot parse `{s}`", row + 2)))
            };
            times.push(parse(fields[0])?);
            for (col, f) in data.iter_mut().zip(&fields[1..]) {
                col.push(parse(f)?);
            }
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::TimeSeries("times must be strictly increasing".into()));
        }
        let mut series = TimeSeries::new(times);
        for (name, values) in names[1..].iter().zip(data) {
            series.push(*name, values)?;
        }
        Ok(series)
    }
}

/// `n1, F1, n2, F2, ...` (cavities numbered from 1) for each state.
pub fn cavity_series(times: &[f64], states: &[QuantumState], photon_modes: &[usize]) -> Result<TimeSeries> {
    let mut series = TimeSeries::new(times.to_vec());
    for (site, &mode) in photon_modes.iter().enumerate() {
        let mut n = Vec::with_capacity(states.len());
        let mut f = Vec::with_capacity(states.len());
        for state in states {
            let (m1, m2) = photon_moments_at_mode(state, mode)?;
            n.push(m1);
            f.push(fluctuation_from_moments(m1, m2)?);
        }
        series.push(format!("n{}", site + 1), n)?;
        series.push(format!("F{}", site + 1), f)?;
    }
    Ok(series)
}

pub fn master_series(record: &MasterRecord, photon_modes: &[usize]) -> Result<TimeSeries> {
    let mut series = cavity_series(&record.times, &record.states, photon_modes)?;
    let trace = record.states.iter().map(|s| s.norm_sqr()).collect();
    series.push("trace", trace)?;
    Ok(series)
}

pub fn trajectory_series(record: &TrajectoryRecord, photon_modes: &[usize]) -> Result<TimeSeries> {
    let mut series = cavity_series(&record.times, &record.states, photon_modes)?;
    series.push("survival", survival_probability(record))?;
    Ok(series)
}

pub fn ensemble_series(stats: &EnsembleStats) -> Result<TimeSeries> {
    let mut series = TimeSeries::new(stats.times.clone());
    for site in 0..stats.n_mean.len() {
        series.push(format!("n{}", site + 1), stats.n_mean[site].clone())?;
        series.push(format!("n{}_se", site + 1), stats.n_se[site].clone())?;
        series.push(format!("F{}", site + 1), stats.f_mean[site].clone())?;
        series.push(format!("F{}_se", site + 1), stats.f_se[site].clone())?;
    }
    series.push("survival", stats.survival_mean.clone())?;
    series.push("survival_se", stats.survival_se.clone())?;
    Ok(series)
}

/// Per-cavity deviations `dn_l = n_l(full) - n_l(effective)` and `dF_l`.
///
/// When the grids differ, the effective series is linearly interpolated
/// onto the full series' times inside the common range.
pub fn compare_models(full: &TimeSeries, effective: &TimeSeries) -> Result<TimeSeries> {
    let (ft, et) = (full.times(), effective.times());
    if ft.is_empty() || et.is_empty() {
        return Err(Error::TimeSeries("empty time series".into()));
    }
    let lo = ft[0].max(et[0]);
    let hi = ft[ft.len() - 1].min(et[et.len() - 1]);
    if lo > hi {
        return Err(Error::DisjointTimeRanges);
    }
    let same_grid = ft == et;
    let keep: Vec<usize> = (0..ft.len()).filter(|&k| ft[k] >= lo && ft[k] <= hi).collect();
    let mut out = TimeSeries::new(keep.iter().map(|&k| ft[k]).collect());
    let mut site = 1;
    loop {
        let names = [format!("n{site}"), format!("F{site}")];
        let present: Vec<_> = names
            .iter()
            .filter_map(|n| Some((n, full.column(n)?, effective.column(n)?)))
            .collect();
        if present.is_empty() {
            break;
        }
        for (name, fv, ev) in present {
            let dev = keep
                .iter()
                .map(|&k| {
                    let e = if same_grid { ev[k] } else { effective.interpolate(ev, ft[k]) };
                    fv[k] - e
                })
                .collect();
            out.push(format!("d{name}"), dev)?;
        }
        site += 1;
    }
    if out.columns.is_empty() {
        return Err(Error::TimeSeries(
            "no shared n<l>/F<l> columns to compare".into(),
        ));
    }
    Ok(out)
}

/// `max |column|` for every column.
pub fn max_abs(series: &TimeSeries) -> Vec<(String, f64)> {
    series
        .columns
        .iter()
        .map(|(n, v)| (n.clone(), v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))))
        .collect()
}
