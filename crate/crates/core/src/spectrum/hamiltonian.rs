use ndarray::Array2;
use num_complex::Complex64;

use super::basis::{build_collective_basis, BasisState, CollectiveBasis};
use super::SpectrumError;
use crate::atomic_data::RydbergState;
use crate::floquet::FieldDrive;
use crate::interaction::{angular_factor, InteractionChannel};

/// Atom position in um; the quantization (field) axis is z.
pub type Position = [f64; 3];

/// Dipole-dipole couplings `V_ij = C3 (1 - 3 cos^2 theta_ij) / R_ij^3` for `i < j`,
/// in the order (0,1), (0,2), ..., (1,2), ...
pub fn pair_couplings(c3: f64, positions: &[Position]) -> Result<Vec<f64>, SpectrumError> {
    let mut out = Vec::with_capacity(positions.len() * (positions.len().saturating_sub(1)) / 2);
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let d = [
                positions[j][0] - positions[i][0],
                positions[j][1] - positions[i][1],
                positions[j][2] - positions[i][2],
            ];
            let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if r == 0.0 {
                return Err(SpectrumError::CoincidentPositions(i, j));
            }
            out.push(c3 * angular_factor(d[2] / r) / (r * r * r));
        }
    }
    Ok(out)
}

fn pair_index(atoms: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    a * atoms - a * (a + 1) / 2 + (b - a - 1)
}

/// A fixed configuration of N atoms in one channel and drive.
#[derive(Debug, Clone)]
pub struct CollectiveSystem {
    basis: CollectiveBasis,
    couplings: Vec<f64>,
    initial: RydbergState,
    final_s: RydbergState,
    final_s_prime: RydbergState,
    drive: FieldDrive,
    phase: f64,
}

impl CollectiveSystem {
    pub fn new(
        positions: &[Position],
        channel: &InteractionChannel,
        drive: &FieldDrive,
        phase: f64,
    ) -> Result<Self, SpectrumError> {
        if channel.initial[0] != channel.initial[1] {
            return Err(SpectrumError::MixedInitialPair(channel.label.clone()));
        }
        let basis = build_collective_basis(positions.len())?;
        let couplings = pair_couplings(channel.c3, positions)?;
        Ok(CollectiveSystem {
            basis,
            couplings,
            initial: channel.initial[0].clone(),
            final_s: channel.final_pair[0].clone(),
            final_s_prime: channel.final_pair[1].clone(),
            drive: *drive,
            phase,
        })
    }

    pub fn basis(&self) -> &CollectiveBasis {
        &self.basis
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Coupling of `|P...P>` to basis state `idx`.
    pub fn coupling_to(&self, idx: usize) -> f64 {
        match self.basis.get(idx) {
            BasisState::AllInitial => 0.0,
            BasisState::Flipped { s, s_prime } => self.couplings[pair_index(self.basis.atoms(), s, s_prime)],
        }
    }

    /// Collective energies `(E(|P...P>), E(flipped))` at time `t`, MHz.
    pub fn diagonal_at(&self, t: f64) -> (f64, f64) {
        let f = self.drive.field_at(t, self.phase);
        let n = self.basis.atoms() as f64;
        let e_p = self.initial.stark_energy(f);
        let all_p = n * e_p;
        let flipped = (n - 2.0) * e_p + self.final_s.stark_energy(f) + self.final_s_prime.stark_energy(f);
        (all_p, flipped)
    }

    /// Writes `H(t)` (MHz) into `h`.
    pub fn fill_hamiltonian(&self, t: f64, h: &mut Array2<Complex64>) {
        let (e0, ef) = self.diagonal_at(t);
        h.fill(Complex64::new(0.0, 0.0));
        h[[0, 0]] = Complex64::new(e0, 0.0);
        for k in 1..self.dim() {
            h[[k, k]] = Complex64::new(ef, 0.0);
            let v = Complex64::new(self.coupling_to(k), 0.0);
            h[[0, k]] = v;
            h[[k, 0]] = v.conj();
        }
    }

    pub fn hamiltonian_at(&self, t: f64) -> Array2<Complex64> {
        let d = self.dim();
        let mut h = Array2::zeros((d, d));
        self.fill_hamiltonian(t, &mut h);
        h
    }
}

/// Dense collective Hamiltonian at time `t` (us) in MHz, for rf phase `phase`.
pub fn hamiltonian_at(
    t: f64,
    positions: &[Position],
    channel: &InteractionChannel,
    drive: &FieldDrive,
    phase: f64,
) -> Result<Array2<Complex64>, SpectrumError> {
    Ok(CollectiveSystem::new(positions, channel, drive, phase)?.hamiltonian_at(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic_data::ParameterSet;

    fn ch37() -> InteractionChannel {
        ParameterSet::reference().channel("37P").unwrap().clone()
    }

    #[test]
    fn pair_index_order() {
        let mut k = 0;
        for i in 0..5 {
            for j in i + 1..5 {
                assert_eq!(pair_index(5, i, j), k);
                assert_eq!(pair_index(5, j, i), k);
                k += 1;
            }
        }
    }

    #[test]
    fn degenerate_at_dc_resonance() {
        let drive = FieldDrive::dc(1.79).unwrap();
        let pos = [[0.0, 0.0, 0.0], [10.0, 0.0, 0.0], [0.0, 7.0, 3.0]];
        let h = hamiltonian_at(0.4, &pos, &ch37(), &drive, 0.0).unwrap();
        for k in 1..h.nrows() {
            assert!((h[[k, k]].re - h[[0, 0]].re).abs() < 1e-6);
        }
    }

    #[test]
    fn magic_angle_pair() {
        let c = (1.0f64 / 3.0).sqrt();
        let s = (1.0 - c * c).sqrt();
        let pos = [[0.0, 0.0, 0.0], [8.0 * s, 0.0, 8.0 * c]];
        let h = hamiltonian_at(0.0, &pos, &ch37(), &FieldDrive::dc(1.0).unwrap(), 0.0).unwrap();
        assert!(h[[0, 1]].norm() < 1e-12);
        assert!(h[[0, 2]].norm() < 1e-12);
    }

    #[test]
    fn hermitian() {
        let drive = FieldDrive::new(1.7, 0.2, 15.0).unwrap();
        let pos = [[0.0, 0.0, 0.0], [10.0, 1.0, 0.0], [0.0, 7.0, 3.0], [4.0, -5.0, 9.0], [-6.0, 2.0, -2.0]];
        let h = hamiltonian_at(0.123, &pos, &ch37(), &drive, 1.1).unwrap();
        assert_eq!(h.nrows(), 21);
        for i in 0..21 {
            for j in 0..21 {
                assert_eq!(h[[i, j]], h[[j, i]].conj());
            }
        }
    }

    #[test]
    fn coincident_positions_rejected() {
        let pos = [[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]];
        let err = hamiltonian_at(0.0, &pos, &ch37(), &FieldDrive::dc(1.0).unwrap(), 0.0).unwrap_err();
        assert!(matches!(err, SpectrumError::CoincidentPositions(0, 1)));
    }
}
