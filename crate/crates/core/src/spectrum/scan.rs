//! Monte Carlo spectra over a dc-field grid.
//!
//! Every sample owns its RNG stream, derived from `(seed, N, sample index)`,
//! so the result does not depend on how samples are scheduled. Per-sample
//! results are collected in index order and reduced serially.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use super::detection::detection_mixing;
use super::hamiltonian::{pair_couplings, CollectiveSystem, Position};
use super::model::{bright_coupling, SidebandModel};
use super::oracle::{evolve_system, OracleOptions};
use super::{EnsembleConfig, SpectrumError, VolumeShape};
use crate::floquet::FieldDrive;
use crate::interaction::InteractionChannel;

/// Largest fraction of failed evaluations tolerated in a run.
pub const MAX_DROPPED_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Backend {
    /// Isolated-order Rabi formula.
    Sideband,
    /// Time-dependent integration of every sample.
    Oracle(OracleOptions),
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Sideband => "sideband",
            Backend::Oracle(_) => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanMetadata {
    pub channel: String,
    pub config: EnsembleConfig,
    pub backend: String,
    /// Failed (sample, grid point) evaluations, dropped from the averages.
    pub dropped: usize,
    pub evaluations: usize,
}

/// Mean transfer fractions `S_N` and their standard errors on a field grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumScan {
    pub f_grid: Vec<f64>,
    pub drive: FieldDrive,
    pub s: BTreeMap<usize, Vec<f64>>,
    pub stderr: BTreeMap<usize, Vec<f64>>,
    pub metadata: ScanMetadata,
}

/// Draws `n` positions (um) centred on the origin.
pub fn sample_positions<R: Rng + ?Sized>(rng: &mut R, n: usize, size: f64, shape: VolumeShape) -> Vec<Position> {
    match shape {
        VolumeShape::SphereUniform => {
            let r = 0.5 * size;
            (0..n)
                .map(|_| loop {
                    let p = [
                        rng.random_range(-r..r),
                        rng.random_range(-r..r),
                        rng.random_range(-r..r),
                    ];
                    if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= r * r {
                        break p;
                    }
                })
                .collect()
        }
        VolumeShape::Gaussian => {
            let normal = Normal::new(0.0, 0.25 * size).expect("positive width");
            (0..n)
                .map(|_| [normal.sample(rng), normal.sample(rng), normal.sample(rng)])
                .collect()
        }
    }
}

fn sample_rng(seed: u64, atoms: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((atoms as u64) << 48) | index as u64);
    rng
}

/// One sample's transfer fraction at every grid point.
type SampleRow = Vec<Result<f64, String>>;

fn sample_row(
    channel: &InteractionChannel,
    cfg: &EnsembleConfig,
    drives: &[FieldDrive],
    models: &[SidebandModel],
    backend: Backend,
    atoms: usize,
    index: usize,
) -> SampleRow {
    let mut rng = sample_rng(cfg.seed, atoms, index);
    let positions = sample_positions(&mut rng, atoms, cfg.volume_size, cfg.volume_shape);
    let phase = rng.random_range(0.0..TAU);
    match backend {
        Backend::Sideband => match pair_couplings(channel.c3, &positions) {
            Ok(v) => {
                let omega_b = bright_coupling(&v);
                models
                    .iter()
                    .map(|m| Ok(0.5 * m.transfer(omega_b, cfg.interaction_time)))
                    .collect()
            }
            Err(e) => vec![Err(e.to_string()); drives.len()],
        },
        Backend::Oracle(opts) => drives
            .iter()
            .map(|d| {
                CollectiveSystem::new(&positions, channel, d, phase)
                    .and_then(|sys| evolve_system(&sys, cfg.interaction_time, &opts))
                    .map(|ev| 0.5 * ev.transfer)
                    .map_err(|e| e.to_string())
            })
            .collect(),
    }
}

fn prepare(
    channel: &InteractionChannel,
    cfg: &EnsembleConfig,
    drive: &FieldDrive,
    f_grid: &[f64],
    backend: Backend,
) -> Result<(Vec<FieldDrive>, Vec<SidebandModel>), SpectrumError> {
    cfg.validate()?;
    if f_grid.is_empty() {
        return Err(SpectrumError::Config("field grid is empty".into()));
    }
    if f_grid.windows(2).any(|w| !(w[1] > w[0])) || f_grid.iter().any(|f| !f.is_finite()) {
        return Err(SpectrumError::Config("field grid must be finite and strictly increasing".into()));
    }
    if channel.initial[0] != channel.initial[1] {
        return Err(SpectrumError::MixedInitialPair(channel.label.clone()));
    }
    let drives: Vec<FieldDrive> = f_grid.iter().map(|&f| drive.with_dc(f)).collect();
    for d in &drives {
        d.validate()?;
    }
    let models = match backend {
        Backend::Sideband => drives
            .iter()
            .map(|d| SidebandModel::new(channel, d))
            .collect::<Result<Vec<_>, _>>()?,
        Backend::Oracle(_) => Vec::new(),
    };
    Ok((drives, models))
}

/// Per-sample transfer fractions for `atoms` atoms: element `[i][k]` is
/// sample `i` at grid point `k`, or the error that sample hit there.
///
/// These are the values [`simulate_spectrum`] averages; identical
/// `(cfg.seed, atoms, i)` give identical positions and rf phases in both
/// backends, so the two can be compared sample by sample.
pub fn sample_transfers(
    channel: &InteractionChannel,
    cfg: &EnsembleConfig,
    drive: &FieldDrive,
    f_grid: &[f64],
    backend: Backend,
    atoms: usize,
) -> Result<Vec<Vec<Result<f64, String>>>, SpectrumError> {
    if !cfg.atom_numbers().contains(&atoms) {
        return Err(SpectrumError::AtomNumber(atoms));
    }
    let (drives, models) = prepare(channel, cfg, drive, f_grid, backend)?;
    Ok(rows(channel, cfg, &drives, &models, backend, atoms))
}

fn rows(
    channel: &InteractionChannel,
    cfg: &EnsembleConfig,
    drives: &[FieldDrive],
    models: &[SidebandModel],
    backend: Backend,
    atoms: usize,
) -> Vec<SampleRow> {
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| sample_row(channel, cfg, drives, models, backend, atoms, i))
        .collect()
}

/// Monte Carlo spectrum for `N = 2..=cfg.atoms` with `drive`'s rf settings
/// and the dc field swept over `f_grid` (strictly increasing, V/cm).
///
/// Runs on the current rayon pool; the result is identical for any pool size.
pub fn simulate_spectrum(
    channel: &InteractionChannel,
    cfg: &EnsembleConfig,
    drive: &FieldDrive,
    f_grid: &[f64],
    backend: Backend,
) -> Result<SpectrumScan, SpectrumError> {
    let (drives, models) = prepare(channel, cfg, drive, f_grid, backend)?;

    let mut s = BTreeMap::new();
    let mut stderr = BTreeMap::new();
    let mut dropped = 0usize;
    let mut first_failure: Option<String> = None;
    let mut evaluations = 0usize;
    for atoms in cfg.atom_numbers() {
        let rows = rows(channel, cfg, &drives, &models, backend, atoms);
        let mut mean = Vec::with_capacity(f_grid.len());
        let mut err = Vec::with_capacity(f_grid.len());
        for k in 0..f_grid.len() {
            let mut vals = Vec::with_capacity(rows.len());
            for row in &rows {
                match &row[k] {
                    Ok(v) => vals.push(*v),
                    Err(e) => {
                        dropped += 1;
                        first_failure.get_or_insert_with(|| e.clone());
                    }
                }
            }
            evaluations += rows.len();
            let (m, e) = mean_stderr(&vals);
            mean.push(m);
            err.push(e);
        }
        s.insert(atoms, mean);
        stderr.insert(atoms, err);
    }
    if dropped as f64 > MAX_DROPPED_FRACTION * evaluations as f64 {
        return Err(SpectrumError::TooManyDropped {
            dropped,
            total: evaluations,
            first: first_failure.unwrap_or_default(),
        });
    }
    let (s, stderr) = if cfg.detection_efficiency < 1.0 {
        detection_mixing(&s, &stderr, cfg.detection_efficiency, cfg.true_number_weights.as_deref())?
    } else {
        (s, stderr)
    };
    Ok(SpectrumScan {
        f_grid: f_grid.to_vec(),
        drive: *drive,
        s,
        stderr,
        metadata: ScanMetadata {
            channel: channel.label.clone(),
            config: cfg.clone(),
            backend: backend.name().to_string(),
            dropped,
            evaluations,
        },
    })
}

/// Mean and standard error of the mean (`NaN` for no values).
pub fn mean_stderr(vals: &[f64]) -> (f64, f64) {
    let n = vals.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = vals.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// A local maximum of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub value: f64,
    /// Height above the higher of the two flanking minima.
    pub prominence: f64,
}

/// Local maxima whose prominence is at least `min_prominence`, in grid order.
pub fn find_peaks(values: &[f64], min_prominence: f64) -> Vec<Peak> {
    let n = values.len();
    let mut peaks = Vec::new();
    let mut i = 0;
    while i < n {
        // collapse plateaus to their first index
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        let left_ok = i == 0 || values[i - 1] < values[i];
        let right_ok = j + 1 == n || values[j + 1] < values[i];
        if left_ok && right_ok && n > 1 {
            let v = values[i];
            let mut left_min = v;
            for &x in values[..i].iter().rev() {
                if x > v {
                    break;
                }
                left_min = left_min.min(x);
            }
            let mut right_min = v;
            for &x in &values[j + 1..] {
                if x > v {
                    break;
                }
                right_min = right_min.min(x);
            }
            let prominence = v - left_min.max(right_min);
            if prominence >= min_prominence {
                peaks.push(Peak {
                    index: i,
                    value: v,
                    prominence,
                });
            }
        }
        i = j + 1;
    }
    peaks
}
