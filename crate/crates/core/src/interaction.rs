//! Förster channels nP + nP -> nS + (n+1)S, the dipole-dipole coupling
//! between the collective states and the pair-state energy shift.

use thiserror::Error;

use crate::atomic_data::{OrbitalL, RydbergState, StateKey};

/// Allowed mismatch between a stored defect and the one recomputed from the
/// member energies, in MHz.
pub const DEFECT_CONSISTENCY_TOL: f64 = 1e-6;

/// RMS of the angular factor `1 - 3 cos^2(theta)` over the sphere: sqrt(4/5).
pub const RMS_ANGULAR_FACTOR: f64 = 0.894_427_190_999_915_9;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("delta0 = {stored} MHz disagrees with member energies ({recomputed} MHz)")]
    InconsistentDefect { stored: f64, recomputed: f64 },
    #[error("{0} is not finite")]
    NonFinite(&'static str),
    #[error("interatomic distance must be positive, got {0} um")]
    NonPositiveDistance(f64),
    #[error("|cos(theta)| must be <= 1, got {0}")]
    BadAngle(f64),
}

/// A two-atom Förster channel.
///
/// The defect is `delta0 = E(final[0]) + E(final[1]) - E(initial[0]) - E(initial[1])`
/// at zero field, i.e. `E(nS) + E((n+1)S) - 2 E(nP)` for the Rb channels.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionChannel {
    pub label: String,
    pub initial: [RydbergState; 2],
    pub final_pair: [RydbergState; 2],
    pub delta0: f64,
    /// Effective dipole-dipole coefficient, MHz um^3.
    pub c3: f64,
    /// Overrides the sign rule of the pair shift when set.
    pub pp_above_override: Option<bool>,
    pub provenance: String,
}

impl InteractionChannel {
    pub fn new(
        label: &str,
        initial: [RydbergState; 2],
        final_pair: [RydbergState; 2],
        delta0: f64,
        c3: f64,
    ) -> Result<Self, ChannelError> {
        if !delta0.is_finite() {
            return Err(ChannelError::NonFinite("delta0_MHz"));
        }
        if !c3.is_finite() {
            return Err(ChannelError::NonFinite("C3_MHz_um3"));
        }
        let recomputed = final_pair[0].energy0 + final_pair[1].energy0 - initial[0].energy0 - initial[1].energy0;
        if (recomputed - delta0).abs() > DEFECT_CONSISTENCY_TOL {
            return Err(ChannelError::InconsistentDefect {
                stored: delta0,
                recomputed,
            });
        }
        Ok(InteractionChannel {
            label: label.to_string(),
            initial,
            final_pair,
            delta0,
            c3,
            pp_above_override: None,
            provenance: String::new(),
        })
    }

    /// A channel defined only by its van der Waals anchor: the defect `delta`
    /// (MHz) and `C6` (GHz um^6). Member states are placeholders for
    /// `nP3/2 + nP3/2 -> nS1/2 + (n+1)S1/2` with zero polarizability, and C3 is
    /// back-computed from `|C6| = 2 V^2 R^6 / |delta|` with the
    /// orientation-averaged `V = C3 * sqrt(4/5) / R^3`.
    pub fn from_vdw_anchor(label: &str, n: u32, c6_ghz_um6: f64, delta: f64) -> Result<Self, ChannelError> {
        if !c6_ghz_um6.is_finite() {
            return Err(ChannelError::NonFinite("C6"));
        }
        let placeholder = |n, l, j, e| {
            let key = StateKey::new(n, l, j, 0.5).expect("valid placeholder key");
            RydbergState::new(key, e, 0.0)
                .map_err(|_| ChannelError::NonFinite("delta"))
                .map(|s| s.with_provenance("placeholder for a vdW-anchored channel"))
        };
        let p = placeholder(n, OrbitalL::P, 1.5, 0.0)?;
        let s = placeholder(n, OrbitalL::S, 0.5, 0.0)?;
        let s1 = placeholder(n + 1, OrbitalL::S, 0.5, delta)?;
        let v_avg = (c6_ghz_um6.abs() * 1e3 * delta.abs() / 2.0).sqrt();
        let c3 = v_avg / RMS_ANGULAR_FACTOR;
        let mut ch = InteractionChannel::new(label, [p.clone(), p], [s, s1], delta, c3)?;
        ch.provenance = format!("vdW anchor: C6 = {c6_ghz_um6} GHz um^6, delta = {delta} MHz");
        Ok(ch)
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Coefficient `k` in `defect(F) = delta0 + k F^2 / 2`, MHz/(V/cm)^2.
    ///
    /// `k = alpha(initial[0]) + alpha(initial[1]) - alpha(final[0]) - alpha(final[1])`.
    pub fn defect_curvature(&self) -> f64 {
        self.initial[0].alpha + self.initial[1].alpha - self.final_pair[0].alpha - self.final_pair[1].alpha
    }

    /// Förster defect of the Stark-shifted collective states at dc field `f_dc`.
    pub fn forster_defect(&self, f_dc: f64) -> f64 {
        self.delta0 + 0.5 * self.defect_curvature() * f_dc * f_dc
    }

    /// d(defect)/dF at `f_dc`.
    pub fn defect_slope(&self, f_dc: f64) -> f64 {
        self.defect_curvature() * f_dc
    }

    /// True when a dc field alone can bring the defect to zero at some F > 0.
    pub fn is_dc_accessible(&self) -> bool {
        let k = self.defect_curvature();
        k != 0.0 && self.delta0 * k < 0.0
    }

    /// The dc field where the defect vanishes, if the channel is dc-accessible.
    pub fn dc_resonance_field(&self) -> Option<f64> {
        self.is_dc_accessible()
            .then(|| (-2.0 * self.delta0 / self.defect_curvature()).sqrt())
    }

    /// Whether nP + nP lies above the final pair, which sets the sign of the
    /// pair shift. Follows `delta0 < 0` unless overridden.
    pub fn pp_above(&self) -> bool {
        self.pp_above_override.unwrap_or(self.delta0 < 0.0)
    }

    /// Signed van der Waals coefficient of the channel in GHz um^6, from
    /// `C6 = +-2 V^2 R^6 / |delta0|` with the orientation-averaged coupling.
    pub fn c6(&self) -> f64 {
        let v = self.c3 * RMS_ANGULAR_FACTOR;
        let sign = if self.pp_above() { 1.0 } else { -1.0 };
        sign * 2.0 * v * v / self.delta0.abs() / 1e3
    }
}

/// Relative placement of two atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    r: f64,
    cos_theta: f64,
    orientation_averaged: bool,
}

impl PairGeometry {
    pub fn new(r: f64, cos_theta: f64) -> Result<Self, ChannelError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(ChannelError::NonPositiveDistance(r));
        }
        if !(cos_theta.abs() <= 1.0) {
            return Err(ChannelError::BadAngle(cos_theta));
        }
        Ok(PairGeometry {
            r,
            cos_theta,
            orientation_averaged: false,
        })
    }

    pub fn averaged(r: f64) -> Result<Self, ChannelError> {
        let mut g = Self::new(r, 0.0)?;
        g.orientation_averaged = true;
        Ok(g)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    pub fn is_orientation_averaged(&self) -> bool {
        self.orientation_averaged
    }
}

/// Angular factor `1 - 3 cos^2(theta)`.
pub fn angular_factor(cos_theta: f64) -> f64 {
    1.0 - 3.0 * cos_theta * cos_theta
}

/// Dipole-dipole matrix element between the initial and final collective states, MHz.
pub fn dd_coupling(channel: &InteractionChannel, geom: &PairGeometry) -> f64 {
    let angular = if geom.orientation_averaged {
        RMS_ANGULAR_FACTOR
    } else {
        angular_factor(geom.cos_theta)
    };
    channel.c3 * angular / geom.r.powi(3)
}

/// Energy shift of the nP + nP pair state for coupling `v` and defect `delta`:
/// `+-(sqrt(delta^2/4 + 2 v^2) - |delta|/2)`, positive when `pp_above`.
pub fn pair_shift(v: f64, delta: f64, pp_above: bool) -> f64 {
    let half = 0.5 * delta.abs();
    let two_v2 = 2.0 * v * v;
    // sqrt(h^2 + 2v^2) - h, written without cancellation for |delta| >> v
    let magnitude = two_v2 / ((half * half + two_v2).sqrt() + half);
    if pp_above {
        magnitude
    } else {
        -magnitude
    }
}

/// Van der Waals shift `C6 / R^6` in MHz for `c6` in GHz um^6 and `r` in um.
pub fn vdw_energy(c6_ghz_um6: f64, r: f64) -> f64 {
    c6_ghz_um6 * 1e3 / r.powi(6)
}

/// Resonant dipole-dipole shift the rf field unlocks: the pair shift at zero defect.
pub fn rf_tuned_dd_strength(channel: &InteractionChannel, geom: &PairGeometry) -> f64 {
    pair_shift(dd_coupling(channel, geom), 0.0, channel.pp_above())
}
