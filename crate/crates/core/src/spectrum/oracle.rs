//! Brute-force time evolution of the collective state.
//!
//! `i d(psi)/dt = 2 pi H(t) psi` (H in MHz, t in us) from `|P...P>`, integrated
//! with the Dormand-Prince 5(4) pair and adaptive step control on the full
//! dense Hamiltonian. The energy of `|P...P>` is subtracted from the diagonal
//! at every time, which changes only the global phase.

use std::f64::consts::TAU;

use ndarray::Array2;
use num_complex::Complex64;

use super::hamiltonian::{CollectiveSystem, Position};
use super::SpectrumError;
use crate::floquet::FieldDrive;
use crate::interaction::InteractionChannel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Absolute tolerance of the embedded error estimate, per step.
    pub atol: f64,
    pub rtol: f64,
    /// Largest allowed `| |psi|^2 - 1 |` at the end of the run.
    pub norm_tolerance: f64,
    pub max_steps: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        // estimated local error <= 1e-10 per component, well inside 1e-8
        OracleOptions {
            atol: 1e-10,
            rtol: 1e-10,
            norm_tolerance: 1e-6,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    /// Population of each basis state at the final time.
    pub populations: Vec<f64>,
    /// Population that left `|P...P>`.
    pub transfer: f64,
    pub norm_drift: f64,
    pub steps: usize,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Rhs<'a> {
    system: &'a CollectiveSystem,
    h: Array2<Complex64>,
}

impl Rhs<'_> {
    fn eval(&mut self, t: f64, psi: &[Complex64], out: &mut [Complex64]) {
        self.system.fill_hamiltonian(t, &mut self.h);
        let d = psi.len();
        let e_ref = self.h[[0, 0]].re;
        for k in 0..d {
            self.h[[k, k]] -= e_ref;
        }
        let h = self.h.as_slice().expect("standard layout");
        let minus_i_2pi = Complex64::new(0.0, -TAU);
        for (i, o) in out.iter_mut().enumerate() {
            let row = &h[i * d..(i + 1) * d];
            let mut acc = Complex64::new(0.0, 0.0);
            for (hij, pj) in row.iter().zip(psi) {
                acc += hij * pj;
            }
            *o = minus_i_2pi * acc;
        }
    }
}

/// Evolves a prepared system over `[0, t_end]`.
pub fn evolve_system(system: &CollectiveSystem, t_end: f64, opts: &OracleOptions) -> Result<Evolution, SpectrumError> {
    let d = system.dim();
    let mut rhs = Rhs {
        system,
        h: Array2::zeros((d, d)),
    };
    let zero = Complex64::new(0.0, 0.0);
    let mut psi = vec![zero; d];
    psi[0] = Complex64::new(1.0, 0.0);

    let mut k = vec![vec![zero; d]; 7];
    let mut tmp = vec![zero; d];
    let mut y_new = vec![zero; d];

    let scale = {
        let h0 = system.hamiltonian_at(0.0);
        let (e0, ef) = system.diagonal_at(0.0);
        let offdiag: f64 = (1..d).map(|i| h0[[0, i]].norm()).fold(0.0, f64::max);
        (ef - e0).abs() + offdiag * (d as f64).sqrt() + 1.0
    };
    let mut h = (0.01 / (TAU * scale)).min(t_end);
    let h_min = 1e-14 * t_end.max(1.0);

    let mut t = 0.0;
    let mut steps = 0usize;
    rhs.eval(t, &psi, &mut k[0]);
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(SpectrumError::TooManySteps(opts.max_steps));
        }
        if t + h > t_end {
            h = t_end - t;
        }
        for s in 1..7 {
            for i in 0..d {
                let mut acc = psi[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += kj[i] * (h * a);
                    }
                }
                tmp[i] = acc;
            }
            if s == 6 {
                y_new.copy_from_slice(&tmp);
            }
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            rhs.eval(t + C[s] * h, &tmp, &mut tail[0]);
        }
        let mut err: f64 = 0.0;
        for i in 0..d {
            let mut e = Complex64::new(0.0, 0.0);
            for (s, ks) in k.iter().enumerate() {
                if E[s] != 0.0 {
                    e += ks[i] * (h * E[s]);
                }
            }
            let sc = opts.atol + opts.rtol * psi[i].norm().max(y_new[i].norm());
            err = err.max(e.norm() / sc);
        }
        if err <= 1.0 {
            t += h;
            steps += 1;
            psi.copy_from_slice(&y_new);
            let last = k[6].clone();
            k[0].copy_from_slice(&last);
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h < h_min {
                return Err(SpectrumError::StepUnderflow { t, h });
            }
        }
    }

    let populations: Vec<f64> = psi.iter().map(|c| c.norm_sqr()).collect();
    let norm: f64 = populations.iter().sum();
    let norm_drift = (norm - 1.0).abs();
    if norm_drift > opts.norm_tolerance {
        return Err(SpectrumError::NormDrift(norm_drift));
    }
    let transfer = populations[1..].iter().sum();
    Ok(Evolution {
        populations,
        transfer,
        norm_drift,
        steps,
    })
}

/// Populations after evolving `|P...P>` for `t_end` us with rf phase `phase`.
pub fn evolve_oracle(
    positions: &[Position],
    channel: &InteractionChannel,
    drive: &FieldDrive,
    phase: f64,
    t_end: f64,
    opts: &OracleOptions,
) -> Result<Evolution, SpectrumError> {
    let system = CollectiveSystem::new(positions, channel, drive, phase)?;
    evolve_system(&system, t_end, opts)
}
