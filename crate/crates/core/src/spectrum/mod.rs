//! Atom-number-resolved transfer spectra for a few atoms in a small volume.
//!
//! Model limits:
//!
//! * Single-transfer collective basis: `|P...P>` plus one flipped pair
//!   `|i -> nS, j -> (n+1)S>`. Multi-pair states are not included.
//! * Only the channel coupling acts; vdW shifts among P atoms are ignored.
//! * The interaction window is switched instantaneously; the rf phase at the
//!   start of the window is random for every Monte Carlo sample.
//!
//! Signal normalization: the transfer probability `P` is the population that
//! has left `|P...P>`. A transferred pair puts one of its two atoms into the
//! nS state, so the nS fraction among the atoms of the interacting pair is
//! `S = P / 2`. It is bounded by 0.5 pointwise, and for a disordered ensemble
//! the time-averaged `P` of a two-level transfer is 1/2, giving 0.25.

mod basis;
mod detection;
mod hamiltonian;
mod model;
mod oracle;
mod scan;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floquet::FloquetError;
use crate::resonance::ResonanceError;

pub use basis::{build_collective_basis, BasisState, CollectiveBasis};
pub use detection::{detection_mixing, detection_weights};
pub use hamiltonian::{hamiltonian_at, pair_couplings, CollectiveSystem, Position};
pub use model::{bright_coupling, rabi_transfer, sideband_model_transfer, SidebandModel};
pub use oracle::{evolve_oracle, Evolution, OracleOptions};
pub use scan::{find_peaks, mean_stderr, sample_positions, sample_transfers, simulate_spectrum, Backend, Peak, ScanMetadata, SpectrumScan};

pub const MIN_ATOMS: usize = 2;
pub const MAX_ATOMS: usize = 5;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("atom number {0} outside the supported range {MIN_ATOMS}..={MAX_ATOMS}")]
    AtomNumber(usize),
    #[error("atoms {0} and {1} sit at the same position")]
    CoincidentPositions(usize, usize),
    #[error("expected {expected} positions, got {got}")]
    PositionCount { expected: usize, got: usize },
    #[error("channel `{0}` has different initial states; the N-atom model needs identical atoms")]
    MixedInitialPair(String),
    #[error("step size underflow at t = {t} us (h = {h:e} us)")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),
    #[error("norm drift {0:e} exceeds the bound")]
    NormDrift(f64),
    #[error("{dropped} of {total} samples failed (more than 1%); first failure: {first}")]
    TooManyDropped { dropped: usize, total: usize, first: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Floquet(#[from] FloquetError),
    #[error(transparent)]
    Resonance(#[from] ResonanceError),
}

/// Spatial distribution of the atoms in the excitation volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeShape {
    /// Uniform in a sphere of diameter `volume_size`.
    SphereUniform,
    /// Isotropic Gaussian with per-axis standard deviation `volume_size / 4`.
    Gaussian,
}

/// Monte Carlo ensemble settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    /// Largest atom number; spectra are produced for every N in `2..=atoms`.
    pub atoms: usize,
    /// Characteristic size of the excitation volume, um.
    pub volume_size: f64,
    pub volume_shape: VolumeShape,
    pub samples: usize,
    pub seed: u64,
    /// Interaction window, us.
    pub interaction_time: f64,
    /// Detection efficiency in (0, 1].
    pub detection_efficiency: f64,
    /// Relative weights of the true atom numbers `2..=atoms` used for
    /// detection mixing; uniform when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_number_weights: Option<Vec<f64>>,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            atoms: 5,
            volume_size: 35.0,
            volume_shape: VolumeShape::SphereUniform,
            samples: 500,
            seed: 1,
            interaction_time: 3.0,
            detection_efficiency: 1.0,
            true_number_weights: None,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<(), SpectrumError> {
        if !(MIN_ATOMS..=MAX_ATOMS).contains(&self.atoms) {
            return Err(SpectrumError::AtomNumber(self.atoms));
        }
        let bad = |m: &str| Err(SpectrumError::Config(m.to_string()));
        if !(self.volume_size > 0.0 && self.volume_size.is_finite()) {
            return bad("volume_size must be > 0");
        }
        if self.samples == 0 {
            return bad("samples must be >= 1");
        }
        if !(self.interaction_time > 0.0 && self.interaction_time.is_finite()) {
            return bad("interaction_time must be > 0");
        }
        if !(self.detection_efficiency > 0.0 && self.detection_efficiency <= 1.0) {
            return bad("detection_efficiency must lie in (0, 1]");
        }
        if let Some(w) = &self.true_number_weights {
            if w.len() != self.atoms - 1 {
                return bad("true_number_weights needs one entry per N in 2..=atoms");
            }
            if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
                return bad("true_number_weights must be non-negative with a positive sum");
            }
        }
        Ok(())
    }

    pub fn atom_numbers(&self) -> std::ops::RangeInclusive<usize> {
        MIN_ATOMS..=self.atoms
    }
}
