//! Dc fields where an rf-assisted Förster resonance of order `m` occurs,
//! `defect(F) = m * freq_rf`, and the strength of each resonance.

use thiserror::Error;

use crate::floquet::{auto_m_max, floquet_arguments, sideband_table, FieldDrive, FloquetError, SidebandTable};
use crate::interaction::InteractionChannel;

/// Residual tolerance of a refined locus, MHz.
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const DEFAULT_GRID_POINTS: usize = 2000;

#[derive(Debug, Error, PartialEq)]
pub enum ResonanceError {
    #[error("invalid field range [{0}, {1}]")]
    BadRange(f64, f64),
    #[error("rf frequency must be > 0, got {0}")]
    BadFrequency(f64),
    #[error("invalid order range [{0}, {1}]")]
    BadOrders(i32, i32),
    #[error("locus at {0} V/cm has zero defect slope")]
    ZeroSlope(f64),
    #[error("order {order} needs sideband tables beyond m_max = {m_max}")]
    Truncation { order: i32, m_max: usize },
    #[error("drive dc field {drive} V/cm is not at the locus ({locus} V/cm)")]
    DriveMismatch { drive: f64, locus: f64 },
    #[error(transparent)]
    Floquet(#[from] FloquetError),
}

/// One resonance: `defect(F_resonance) = order_m * freq_rf`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceLocus {
    pub order_m: i32,
    pub f_resonance: f64,
    /// d(defect)/dF at the locus, MHz/(V/cm).
    pub defect_slope: f64,
    pub freq_rf: f64,
    pub channel: String,
    /// Set when the defect only touches `m * freq_rf` (zero slope).
    pub degenerate: bool,
}

/// Grid-scan-and-refine search over a channel's defect curve.
#[derive(Debug, Clone, Copy)]
pub struct ResonanceSearch {
    pub grid_points: usize,
    /// rf amplitude whose ac Stark shift is added to the defect; 0 gives the
    /// bare dc defect.
    pub rf_amplitude: f64,
}

impl Default for ResonanceSearch {
    fn default() -> Self {
        ResonanceSearch {
            grid_points: DEFAULT_GRID_POINTS,
            rf_amplitude: 0.0,
        }
    }
}

impl ResonanceSearch {
    pub fn with_rf_amplitude(mut self, f_rf: f64) -> Self {
        self.rf_amplitude = f_rf;
        self
    }

    fn defect(&self, channel: &InteractionChannel, f: f64) -> f64 {
        channel.forster_defect(f) + 0.25 * channel.defect_curvature() * self.rf_amplitude * self.rf_amplitude
    }

    pub fn run(
        &self,
        channel: &InteractionChannel,
        freq_rf: f64,
        f_range: (f64, f64),
        m_range: (i32, i32),
    ) -> Result<Vec<ResonanceLocus>, ResonanceError> {
        let (lo, hi) = f_range;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(ResonanceError::BadRange(lo, hi));
        }
        if !(freq_rf > 0.0 && freq_rf.is_finite()) {
            return Err(ResonanceError::BadFrequency(freq_rf));
        }
        if m_range.0 > m_range.1 {
            return Err(ResonanceError::BadOrders(m_range.0, m_range.1));
        }
        let n = self.grid_points.max(2);
        let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();

        let mut loci = Vec::new();
        for m in m_range.0..=m_range.1 {
            let target = m as f64 * freq_rf;
            let g = |f: f64| self.defect(channel, f) - target;
            let vals: Vec<f64> = grid.iter().map(|&f| g(f)).collect();
            let mut roots: Vec<(f64, bool)> = Vec::new();
            for i in 0..n - 1 {
                let (a, b) = (vals[i], vals[i + 1]);
                if a == 0.0 {
                    roots.push((grid[i], false));
                } else if a * b < 0.0 {
                    roots.push((refine(&g, grid[i], grid[i + 1], a, b), false));
                } else if i > 0 && a.abs() <= vals[i - 1].abs() && a.abs() <= b.abs() && a * vals[i - 1] > 0.0 {
                    // possible double root between grid points
                    let f_min = golden_min(|f| g(f).abs(), grid[i - 1], grid[i + 1]);
                    if g(f_min).abs() < RESIDUAL_TOL {
                        roots.push((f_min, true));
                    }
                }
            }
            if vals[n - 1] == 0.0 {
                roots.push((grid[n - 1], false));
            }
            for (f, touching) in roots {
                let slope = channel.defect_slope(f);
                let degenerate = touching || slope.abs() < 1e-9;
                loci.push(ResonanceLocus {
                    order_m: m,
                    f_resonance: f,
                    defect_slope: slope,
                    freq_rf,
                    channel: channel.label.clone(),
                    degenerate,
                });
            }
        }
        loci.sort_by(|a, b| a.f_resonance.total_cmp(&b.f_resonance).then(a.order_m.cmp(&b.order_m)));
        Ok(loci)
    }
}

/// All roots of `defect(F) - m * freq_rf` in `f_range` for `m` in `m_range`,
/// sorted by field.
pub fn find_resonances(
    channel: &InteractionChannel,
    freq_rf: f64,
    f_range: (f64, f64),
    m_range: (i32, i32),
) -> Result<Vec<ResonanceLocus>, ResonanceError> {
    ResonanceSearch::default().run(channel, freq_rf, f_range, m_range)
}

/// Illinois-modified regula falsi on a sign-changing bracket.
fn refine(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> f64 {
    let mut side = 0;
    for _ in 0..200 {
        let c = if fa != fb { (a * fb - b * fa) / (fb - fa) } else { 0.5 * (a + b) };
        let c = if c > a.min(b) && c < a.max(b) { c } else { 0.5 * (a + b) };
        let fc = g(c);
        if fc == 0.0 || (fc.abs() < 1e-3 * RESIDUAL_TOL && (b - a).abs() < 1e-9) {
            return c;
        }
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
            side = 0;
        } else {
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        b = c;
        fb = fc;
        if (b - a).abs() <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
            break;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}

fn golden_min(h: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    for _ in 0..200 {
        if h(c) < h(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
        if (b - a).abs() < 1e-14 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Converts a resonance width in field units (V/cm) to frequency units (MHz).
pub fn field_to_frequency_width(locus: &ResonanceLocus, width_field: f64) -> Result<f64, ResonanceError> {
    if locus.degenerate || locus.defect_slope == 0.0 {
        return Err(ResonanceError::ZeroSlope(locus.f_resonance));
    }
    Ok(locus.defect_slope.abs() * width_field)
}

/// Sideband tables of the four member states of a channel under one drive.
#[derive(Debug, Clone)]
pub struct ChannelSidebands {
    pub initial: [SidebandTable; 2],
    pub final_pair: [SidebandTable; 2],
}

impl ChannelSidebands {
    /// Tables with an explicit truncation order.
    pub fn new(channel: &InteractionChannel, drive: &FieldDrive, m_max: usize) -> Result<Self, FloquetError> {
        Ok(ChannelSidebands {
            initial: [
                sideband_table(&channel.initial[0], drive, m_max)?,
                sideband_table(&channel.initial[1], drive, m_max)?,
            ],
            final_pair: [
                sideband_table(&channel.final_pair[0], drive, m_max)?,
                sideband_table(&channel.final_pair[1], drive, m_max)?,
            ],
        })
    }

    /// Tables with the largest automatic truncation order among the members.
    pub fn auto(channel: &InteractionChannel, drive: &FieldDrive) -> Result<Self, FloquetError> {
        let m_max = channel
            .initial
            .iter()
            .chain(channel.final_pair.iter())
            .map(|s| {
                let (x, y) = floquet_arguments(s.alpha, drive);
                auto_m_max(x, y)
            })
            .max()
            .unwrap_or(20);
        Self::new(channel, drive, m_max)
    }

    pub fn m_max(&self) -> usize {
        self.initial
            .iter()
            .chain(self.final_pair.iter())
            .map(|t| t.m_max)
            .min()
            .unwrap_or(0)
    }

    pub fn drive(&self) -> &FieldDrive {
        &self.initial[0].drive
    }

    /// Signed transition amplitudes for every order `-m_max..=m_max`:
    /// `sum_{m1 + m2 - m3 - m4 = m} a_P1(m1) a_P2(m2) a_S(m3) a_S'(m4)`.
    pub fn signed_weights(&self) -> Vec<f64> {
        let conv = |a: &[f64], b: &[f64]| {
            let mut out = vec![0.0; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0.0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let m_max = self.m_max();
        let clip = |t: &SidebandTable| -> Vec<f64> {
            (-(m_max as i32)..=m_max as i32).map(|m| t.amplitude(m)).collect()
        };
        let up = conv(&clip(&self.initial[0]), &clip(&self.initial[1]));
        let down = conv(&clip(&self.final_pair[0]), &clip(&self.final_pair[1]));
        // up has offset 2M, down has offset 2M; w(m) = sum_k up(m + k) down(k)
        let off = 2 * m_max as i64;
        (-(m_max as i64)..=m_max as i64)
            .map(|m| {
                let mut s = 0.0;
                for (kd, &d) in down.iter().enumerate() {
                    let k = kd as i64 - off;
                    let iu = m + k + off;
                    if iu >= 0 && (iu as usize) < up.len() {
                        s += up[iu as usize] * d;
                    }
                }
                s
            })
            .collect()
    }

    /// `|weight|` of order `m`.
    pub fn weight(&self, m: i32) -> Result<f64, ResonanceError> {
        let m_max = self.m_max();
        if m.unsigned_abs() as usize > m_max {
            return Err(ResonanceError::Truncation { order: m, m_max });
        }
        Ok(self.signed_weights()[(m + m_max as i32) as usize].abs())
    }
}

/// Effective coupling weight of a resonance: the factor multiplying the bare
/// dipole-dipole coupling at the locus.
pub fn resonance_strength(locus: &ResonanceLocus, sidebands: &ChannelSidebands) -> Result<f64, ResonanceError> {
    let f_dc = sidebands.drive().f_dc;
    if (f_dc - locus.f_resonance).abs() > 1e-9 * locus.f_resonance.abs().max(1.0) {
        return Err(ResonanceError::DriveMismatch {
            drive: f_dc,
            locus: locus.f_resonance,
        });
    }
    sidebands.weight(locus.order_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic_data::ParameterSet;
    use crate::floquet::generalized_bessel;

    fn ch(label: &str) -> InteractionChannel {
        ParameterSet::reference().channel(label).unwrap().clone()
    }

    #[test]
    fn loci_37p_at_15mhz() {
        let c = ch("37P");
        let loci = find_resonances(&c, 15.0, (0.0, 2.5), (-6, 6)).unwrap();
        assert!(!loci.is_empty());
        for l in &loci {
            assert!((c.forster_defect(l.f_resonance) - l.order_m as f64 * 15.0).abs() < RESIDUAL_TOL);
            assert!(!l.degenerate);
        }
        let m0 = loci.iter().find(|l| l.order_m == 0).unwrap();
        assert!((m0.f_resonance - 1.79).abs() < 1e-9);
        for w in loci.windows(2) {
            assert!(w[0].f_resonance <= w[1].f_resonance);
        }
        // consecutive orders differ by exactly 15 MHz in defect
        for w in loci.windows(2) {
            let dd = c.forster_defect(w[1].f_resonance) - c.forster_defect(w[0].f_resonance);
            assert!((dd - 15.0 * (w[1].order_m - w[0].order_m) as f64).abs() < 2.0 * RESIDUAL_TOL);
        }
    }

    #[test]
    fn loci_39p_at_95mhz() {
        let c = ch("39P");
        let loci = find_resonances(&c, 95.0, (0.0, 2.5), (-3, 3)).unwrap();
        let first = loci.iter().find(|l| l.order_m == 1).unwrap();
        let second = loci.iter().find(|l| l.order_m == 2).unwrap();
        assert!((first.f_resonance - 0.66).abs() / 0.66 < 0.05, "{}", first.f_resonance);
        assert!((second.f_resonance - 1.55).abs() / 1.55 < 0.05, "{}", second.f_resonance);
        // monotone channel: one locus per order
        assert_eq!(loci.iter().filter(|l| l.order_m == 1).count(), 1);
    }

    #[test]
    fn empty_when_out_of_reach() {
        let c = ch("39P");
        let loci = find_resonances(&c, 500.0, (0.0, 1.0), (1, 3)).unwrap();
        assert!(loci.is_empty());
    }

    #[test]
    fn bad_inputs() {
        let c = ch("37P");
        assert!(find_resonances(&c, 15.0, (1.0, 0.5), (0, 1)).is_err());
        assert!(find_resonances(&c, 15.0, (-1.0, 0.5), (0, 1)).is_err());
        assert!(find_resonances(&c, 0.0, (0.0, 2.0), (0, 1)).is_err());
        assert!(find_resonances(&c, 15.0, (0.0, 2.0), (2, 1)).is_err());
    }

    #[test]
    fn degenerate_at_zero_field() {
        let c = ch("39P");
        // defect(0) = delta0 = m f for f = delta0, m = 1
        let loci = find_resonances(&c, c.delta0, (0.0, 1.0), (1, 1)).unwrap();
        assert_eq!(loci.len(), 1);
        assert!(loci[0].degenerate);
        assert!(field_to_frequency_width(&loci[0], 0.01).is_err());
    }

    #[test]
    fn width_conversion() {
        let c = ch("37P");
        let loci = find_resonances(&c, 15.0, (1.7, 1.9), (0, 0)).unwrap();
        assert_eq!(field_to_frequency_width(&loci[0], 0.0).unwrap(), 0.0);
        let w = field_to_frequency_width(&loci[0], 0.016).unwrap();
        assert!((w - 1.9).abs() / 1.9 < 0.15, "{w}");
    }

    #[test]
    fn halved_frequency_doubles_order() {
        let c = ch("37P");
        let a = find_resonances(&c, 15.0, (0.0, 2.5), (-3, 3)).unwrap();
        let b = find_resonances(&c, 7.5, (0.0, 2.5), (-6, 6)).unwrap();
        for l in &a {
            let twin = b.iter().find(|k| k.order_m == 2 * l.order_m).unwrap();
            assert!((twin.f_resonance - l.f_resonance).abs() < 1e-9);
        }
    }

    #[test]
    fn undriven_weights() {
        let c = ch("37P");
        let drive = FieldDrive::new(1.79, 0.0, 15.0).unwrap();
        let sb = ChannelSidebands::new(&c, &drive, 6).unwrap();
        assert_eq!(sb.weight(0).unwrap(), 1.0);
        for m in [-3, -1, 1, 2] {
            assert_eq!(sb.weight(m).unwrap(), 0.0);
        }
        assert!(sb.weight(7).is_err());
    }

    #[test]
    fn odd_weights_vanish_without_dc() {
        let c = ch("37P");
        let drive = FieldDrive::new(0.0, 0.8, 15.0).unwrap();
        let sb = ChannelSidebands::auto(&c, &drive).unwrap();
        for m in [-5, -3, -1, 1, 3] {
            assert!(sb.weight(m).unwrap() < 1e-12);
        }
    }

    #[test]
    fn four_state_sum_is_combined_bessel() {
        // the product of the four phase factors has x = k F_dc F_rf / f with
        // k the defect curvature, so the weight of order m is |J_{-m}(x, y)|
        let c = ch("37P");
        let drive = FieldDrive::new(1.6, 0.4, 15.0).unwrap();
        let sb = ChannelSidebands::auto(&c, &drive).unwrap();
        let (x, y) = floquet_arguments(c.defect_curvature(), &drive);
        for m in -4..=4 {
            let direct = generalized_bessel(-m, x, y).abs();
            assert!((sb.weight(m).unwrap() - direct).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn strength_checks_drive() {
        let c = ch("37P");
        let locus = find_resonances(&c, 15.0, (0.0, 2.5), (1, 1)).unwrap().remove(0);
        let drive = FieldDrive::new(locus.f_resonance, 0.15, 15.0).unwrap();
        let sb = ChannelSidebands::auto(&c, &drive).unwrap();
        let w = resonance_strength(&locus, &sb).unwrap();
        assert!(w > 0.0 && w <= 1.0);
        let other = ChannelSidebands::auto(&c, &drive.with_dc(1.0)).unwrap();
        assert!(matches!(resonance_strength(&locus, &other), Err(ResonanceError::DriveMismatch { .. })));
    }
}
