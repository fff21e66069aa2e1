//! Radio-frequency-assisted Förster resonances between a few cold Rydberg atoms.
//!
//! The crate is organised bottom-up:
//!
//! * [`atomic_data`]: per-state energies and polarizabilities, parameter files.
//! * [`floquet`]: composite dc+rf Stark expansion, Bessel and generalized Bessel
//!   functions, Floquet sideband tables.
//! * [`interaction`]: Förster channels, field-dependent defect, dipole-dipole
//!   coupling, pair-state shifts and the van der Waals limit.
//! * [`resonance`]: dc fields where `defect = m * f_rf`, sideband weights.
//! * [`spectrum`]: few-body collective dynamics and Monte Carlo transfer spectra.
//! * [`report`]: fixed-format CSV output shared by the CLI and tests.
//!
//! Units throughout: energies as E/h in MHz, fields in V/cm, rf frequencies as
//! ordinary frequencies in MHz, times in μs, distances in μm.

// `!(x <= bound)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atomic_data;
pub mod floquet;
pub mod interaction;
pub mod report;
pub mod resonance;
pub mod spectrum;

pub use atomic_data::{load_parameters, OrbitalL, ParamError, ParameterSet, RydbergState, StateKey};
pub use floquet::{FieldDrive, SidebandTable, StarkExpansion};
pub use interaction::{InteractionChannel, PairGeometry};
pub use resonance::ResonanceLocus;
pub use spectrum::{EnsembleConfig, SpectrumScan, VolumeShape};
