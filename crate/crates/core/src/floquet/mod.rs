//! Stark shift in a composite field `F(t) = F_dc + F_rf cos(wt)` and the
//! Floquet sidebands it produces.
//!
//! For `E = E0 - alpha F^2 / 2` the composite field gives
//!
//! ```text
//! E(t) = E0 - alpha/2 [F_dc^2 + F_rf^2/2 + 2 F_dc F_rf cos(wt) + F_rf^2/2 cos(2wt)]
//! ```
//!
//! and the wave function splits into sidebands spaced by the rf frequency with
//! generalized-Bessel amplitudes of `x = alpha F_dc F_rf / w` and
//! `y = alpha F_rf^2 / (8 w)`, both `alpha` and `w` in angular units.

pub mod bessel;

use std::f64::consts::TAU;

use thiserror::Error;

use crate::atomic_data::RydbergState;

pub use bessel::{bessel_j, bessel_j_seq, generalized_bessel, generalized_bessel_orders};

/// Default allowed Parseval deficit of a sideband table.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum FloquetError {
    #[error("invalid drive: {0}")]
    InvalidDrive(String),
    #[error("sideband table truncated at m_max = {m_max}: sum of intensities falls short of 1 by {deficit:e} (> {tolerance:e}); raise m_max")]
    TruncationInsufficient { m_max: usize, deficit: f64, tolerance: f64 },
}

/// dc + rf field: `F(t) = f_dc + f_rf cos(2 pi freq_rf t + phase)`.
///
/// Fields in V/cm, `freq_rf` is the ordinary frequency in MHz (time in us).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FieldDrive {
    pub f_dc: f64,
    pub f_rf: f64,
    pub freq_rf: f64,
}

impl FieldDrive {
    pub fn new(f_dc: f64, f_rf: f64, freq_rf: f64) -> Result<Self, FloquetError> {
        let d = FieldDrive { f_dc, f_rf, freq_rf };
        d.validate()?;
        Ok(d)
    }

    /// Pure dc field.
    pub fn dc(f_dc: f64) -> Result<Self, FloquetError> {
        Self::new(f_dc, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<(), FloquetError> {
        let bad = |m: &str| Err(FloquetError::InvalidDrive(m.to_string()));
        if !(self.f_dc.is_finite() && self.f_rf.is_finite() && self.freq_rf.is_finite()) {
            return bad("non-finite field or frequency");
        }
        if self.f_dc < 0.0 || self.f_rf < 0.0 {
            return bad("fields must be >= 0");
        }
        if self.freq_rf < 0.0 || (self.f_rf > 0.0 && self.freq_rf == 0.0) {
            return bad("rf frequency must be > 0 when an rf amplitude is set");
        }
        Ok(())
    }

    pub fn with_dc(self, f_dc: f64) -> Self {
        FieldDrive { f_dc, ..self }
    }

    /// Angular rf frequency in rad/us.
    pub fn angular_frequency(&self) -> f64 {
        TAU * self.freq_rf
    }

    /// Instantaneous field at time `t` (us) for rf phase `phase` (rad).
    pub fn field_at(&self, t: f64, phase: f64) -> f64 {
        self.f_dc + self.f_rf * (self.angular_frequency() * t + phase).cos()
    }

    /// Time average of `F(t)^2`.
    pub fn mean_square_field(&self) -> f64 {
        self.f_dc * self.f_dc + 0.5 * self.f_rf * self.f_rf
    }
}

/// Terms of the composite-field Stark shift, MHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarkExpansion {
    /// dc plus ac Stark shift, the `F_dc^2 + F_rf^2/2` term.
    pub shift_static: f64,
    /// Coefficient of `cos(wt)`.
    pub amp_1omega: f64,
    /// Coefficient of `cos(2wt)`.
    pub amp_2omega: f64,
}

impl StarkExpansion {
    /// Oscillating energy `amp_1omega cos(wt) + amp_2omega cos(2wt)` at phase `wt`.
    pub fn oscillating(&self, phase: f64) -> f64 {
        self.amp_1omega * phase.cos() + self.amp_2omega * (2.0 * phase).cos()
    }
}

pub fn stark_expansion(state: &RydbergState, drive: &FieldDrive) -> StarkExpansion {
    let a = state.alpha;
    StarkExpansion {
        shift_static: -0.5 * a * drive.mean_square_field(),
        amp_1omega: -a * drive.f_dc * drive.f_rf,
        amp_2omega: -0.25 * a * drive.f_rf * drive.f_rf,
    }
}

/// Generalized-Bessel arguments `(x, y)` for polarizability `alpha`
/// (MHz/(V/cm)^2, E/h) under `drive`.
///
/// This is the one place where ordinary units become angular ones: the
/// polarizability becomes `2 pi alpha` rad/us per (V/cm)^2 and the rf
/// frequency `2 pi freq_rf` rad/us.
pub fn floquet_arguments(alpha: f64, drive: &FieldDrive) -> (f64, f64) {
    if drive.f_rf == 0.0 {
        return (0.0, 0.0);
    }
    let alpha_ang = TAU * alpha;
    let w = drive.angular_frequency();
    (
        alpha_ang * drive.f_dc * drive.f_rf / w,
        alpha_ang * drive.f_rf * drive.f_rf / (8.0 * w),
    )
}

/// Truncation order that keeps the Parseval deficit negligible: `|x| + 2|y| + 40`.
/// The `y` series steps `m` by two, so the margin is 20 Bessel orders past `|y|`.
pub fn auto_m_max(x: f64, y: f64) -> usize {
    (x.abs() + 2.0 * y.abs()).ceil() as usize + 40
}

/// Sideband amplitudes of one state for one drive.
///
/// Order `m` labels the sideband at energy `E_mean + m freq_rf`. Its amplitude
/// is `J_{-m}(x, y) = J_m(-x, -y)`: the state picks up the phase
/// `exp(-i 2pi int E dt)`, whose `exp(+i m w t)` component is the one at
/// `E_mean - m freq_rf`.
#[derive(Debug, Clone, PartialEq)]
pub struct SidebandTable {
    pub state: RydbergState,
    pub drive: FieldDrive,
    pub m_max: usize,
    /// `(x, y)` of the table.
    pub arguments: (f64, f64),
    amplitudes: Vec<f64>,
}

impl SidebandTable {
    pub fn orders(&self) -> impl Iterator<Item = i32> {
        let m = self.m_max as i32;
        -m..=m
    }

    /// Amplitude of order `m`, zero outside the table.
    pub fn amplitude(&self, m: i32) -> f64 {
        let idx = m + self.m_max as i32;
        if idx < 0 {
            return 0.0;
        }
        self.amplitudes.get(idx as usize).copied().unwrap_or(0.0)
    }

    /// Amplitudes for `-m_max..=m_max`.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn intensity_sum(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    /// Mean (dc + ac Stark shifted) energy of the state, MHz.
    pub fn mean_energy(&self) -> f64 {
        self.state.stark_energy(self.drive.f_dc) - 0.25 * self.state.alpha * self.drive.f_rf * self.drive.f_rf
    }

    pub fn energy(&self, m: i32) -> f64 {
        self.mean_energy() + m as f64 * self.drive.freq_rf
    }
}

/// Builds the sideband table, checking the normalization against [`NORM_TOLERANCE`].
pub fn sideband_table(state: &RydbergState, drive: &FieldDrive, m_max: usize) -> Result<SidebandTable, FloquetError> {
    sideband_table_with_tolerance(state, drive, m_max, NORM_TOLERANCE)
}

/// As [`sideband_table`] with the truncation order from [`auto_m_max`].
pub fn sideband_table_auto(state: &RydbergState, drive: &FieldDrive) -> Result<SidebandTable, FloquetError> {
    drive.validate()?;
    let (x, y) = floquet_arguments(state.alpha, drive);
    sideband_table(state, drive, auto_m_max(x, y))
}

pub fn sideband_table_with_tolerance(
    state: &RydbergState,
    drive: &FieldDrive,
    m_max: usize,
    tolerance: f64,
) -> Result<SidebandTable, FloquetError> {
    drive.validate()?;
    if drive.freq_rf <= 0.0 {
        return Err(FloquetError::InvalidDrive("sideband tables need freq_rf > 0".into()));
    }
    let (x, y) = floquet_arguments(state.alpha, drive);
    let amplitudes = generalized_bessel_orders(m_max, -x, -y);
    let table = SidebandTable {
        state: state.clone(),
        drive: *drive,
        m_max,
        arguments: (x, y),
        amplitudes,
    };
    let deficit = 1.0 - table.intensity_sum();
    if deficit > tolerance {
        return Err(FloquetError::TruncationInsufficient {
            m_max,
            deficit,
            tolerance,
        });
    }
    Ok(table)
}

/// `(m, energy)` for each sideband order, energies in MHz.
pub fn sideband_energies(state: &RydbergState, drive: &FieldDrive, m_max: usize) -> Result<Vec<(i32, f64)>, FloquetError> {
    let table = sideband_table(state, drive, m_max)?;
    Ok(table.orders().map(|m| (m, table.energy(m))).collect())
}
