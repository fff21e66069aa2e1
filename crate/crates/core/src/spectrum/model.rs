//! Fast sideband backend.
//!
//! Each order `m` is treated as a two-level problem: the bright collective
//! state couples to `|P...P>` with `g_m = w_m * Omega_b`, where
//! `Omega_b = sqrt(sum over ordered pairs V_ij^2)`, and is detuned by
//! `d_m = defect_mean - m * freq_rf`. The other orders act dispersively: each
//! shifts the two levels apart by `g_k^2 / d_k`, so the effective detuning is
//! `d_m + 2 sum_{k != m} g_k^2 / d_k` (orders with `|d_k| <= |g_k|` are
//! near-resonant themselves and left out of the sum). The transfer is the
//! Rabi probability of the dominant order, the one with the largest envelope
//! `g^2 / (g^2 + d^2/4)`. When several orders are near-resonant at once the
//! model is outside its range.

use std::f64::consts::PI;

use super::SpectrumError;
use crate::floquet::FieldDrive;
use crate::interaction::InteractionChannel;
use crate::resonance::ChannelSidebands;

/// Sideband weights and mean defect of a channel at one drive.
#[derive(Debug, Clone)]
pub struct SidebandModel {
    drive: FieldDrive,
    defect_mean: f64,
    /// `(m, |w_m|)` for every order with a non-negligible weight.
    orders: Vec<(i32, f64)>,
}

/// Orders whose weight falls below this are skipped.
const WEIGHT_FLOOR: f64 = 1e-15;

impl SidebandModel {
    pub fn new(channel: &InteractionChannel, drive: &FieldDrive) -> Result<Self, SpectrumError> {
        if drive.f_rf == 0.0 {
            drive.validate()?;
            return Ok(SidebandModel {
                drive: *drive,
                defect_mean: channel.forster_defect(drive.f_dc),
                orders: vec![(0, 1.0)],
            });
        }
        let sb = ChannelSidebands::auto(channel, drive)?;
        let m_max = sb.m_max() as i32;
        let orders = sb
            .signed_weights()
            .into_iter()
            .zip(-m_max..=m_max)
            .filter(|(w, _)| w.abs() > WEIGHT_FLOOR)
            .map(|(w, m)| (m, w.abs()))
            .collect();
        let defect_mean = sb.final_pair[0].mean_energy() + sb.final_pair[1].mean_energy()
            - sb.initial[0].mean_energy()
            - sb.initial[1].mean_energy();
        Ok(SidebandModel {
            drive: *drive,
            defect_mean,
            orders,
        })
    }

    pub fn drive(&self) -> &FieldDrive {
        &self.drive
    }

    /// Cycle-averaged defect, MHz.
    pub fn defect_mean(&self) -> f64 {
        self.defect_mean
    }

    pub fn orders(&self) -> &[(i32, f64)] {
        &self.orders
    }

    /// Detuning of order `m` from its resonance, MHz.
    pub fn detuning(&self, m: i32) -> f64 {
        self.defect_mean - m as f64 * self.drive.freq_rf
    }

    /// Transfer out of `|P...P>` after `t` us for bright-state coupling
    /// `omega_b` (MHz).
    pub fn transfer(&self, omega_b: f64, t: f64) -> f64 {
        match self.dominant_order(omega_b) {
            Some((_, g, d)) => rabi_transfer(g, d, t),
            None => 0.0,
        }
    }

    /// Dispersive term `g_k^2 / d_k` of order `k`, or zero when the order is
    /// near-resonant.
    fn dispersive(&self, m: i32, w: f64, omega_b: f64) -> f64 {
        let g = w * omega_b;
        let d = self.detuning(m);
        if d.abs() > g.abs() {
            g * g / d
        } else {
            0.0
        }
    }

    /// `(m, g_m, effective detuning)` of the order with the largest Rabi envelope.
    pub fn dominant_order(&self, omega_b: f64) -> Option<(i32, f64, f64)> {
        let total: f64 = self.orders.iter().map(|&(m, w)| self.dispersive(m, w, omega_b)).sum();
        let mut best: Option<((i32, f64, f64), f64)> = None;
        for &(m, w) in &self.orders {
            let g = w * omega_b;
            let d = self.detuning(m) + 2.0 * (total - self.dispersive(m, w, omega_b));
            let env = if g == 0.0 { 0.0 } else { g * g / (g * g + 0.25 * d * d) };
            if best.is_none_or(|(_, e)| env > e) {
                best = Some(((m, g, d), env));
            }
        }
        best.map(|(o, _)| o)
    }
}

/// Two-level transfer for coupling `g` and detuning `d` (both MHz) after `t` us.
pub fn rabi_transfer(g: f64, d: f64, t: f64) -> f64 {
    let g2 = g * g;
    if g2 == 0.0 {
        return 0.0;
    }
    let split = (4.0 * g2 + d * d).sqrt();
    let s = (PI * t * split).sin();
    4.0 * g2 / (split * split) * s * s
}

/// Bright-state coupling of `|P...P>` for pair couplings `V_ij` (i < j).
pub fn bright_coupling(couplings: &[f64]) -> f64 {
    (2.0 * couplings.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Sideband-model transfer for pair couplings `couplings` after `t` us.
pub fn sideband_model_transfer(
    channel: &InteractionChannel,
    drive: &FieldDrive,
    couplings: &[f64],
    t: f64,
) -> Result<f64, SpectrumError> {
    Ok(SidebandModel::new(channel, drive)?.transfer(bright_coupling(couplings), t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic_data::ParameterSet;

    fn ch37() -> InteractionChannel {
        ParameterSet::reference().channel("37P").unwrap().clone()
    }

    #[test]
    fn dc_only_is_single_order() {
        let ch = ch37();
        let m = SidebandModel::new(&ch, &FieldDrive::dc(1.5).unwrap()).unwrap();
        assert_eq!(m.orders().len(), 1);
        assert_eq!(m.orders()[0].0, 0);
        assert!((m.orders()[0].1 - 1.0).abs() < 1e-14);
        assert!((m.defect_mean() - ch.forster_defect(1.5)).abs() < 1e-9);
    }

    #[test]
    fn resonant_rabi() {
        let g = 0.2;
        for &t in &[0.3, 1.1, 2.9] {
            let want = (2.0 * PI * g * t).sin().powi(2);
            assert!((rabi_transfer(g, 0.0, t) - want).abs() < 1e-14);
        }
        assert_eq!(rabi_transfer(0.0, 1.0, 1.0), 0.0);
        assert!(rabi_transfer(0.1, 50.0, 3.0) <= 4.0 * 0.01 / 2500.0 + 1e-16);
    }

    #[test]
    fn bright_coupling_two_atoms() {
        assert!((bright_coupling(&[3.0]) - 3.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!((bright_coupling(&[3.0, 4.0, 0.0]) - 50f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn ac_shift_enters_mean_defect() {
        let ch = ch37();
        let drive = FieldDrive::new(1.2, 0.3, 15.0).unwrap();
        let m = SidebandModel::new(&ch, &drive).unwrap();
        let want = ch.forster_defect(1.2) + 0.25 * ch.defect_curvature() * 0.09;
        assert!((m.defect_mean() - want).abs() < 1e-9);
    }
}
