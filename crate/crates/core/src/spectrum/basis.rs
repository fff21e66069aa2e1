use super::{SpectrumError, MAX_ATOMS, MIN_ATOMS};

/// Collective basis state of N atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisState {
    /// Every atom in the initial nP state.
    AllInitial,
    /// Atom `s` in nS, atom `s_prime` in (n+1)S, the others in nP.
    Flipped { s: usize, s_prime: usize },
}

/// `|P...P>` followed by every ordered flipped pair; dimension `1 + N(N-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveBasis {
    atoms: usize,
    states: Vec<BasisState>,
}

impl CollectiveBasis {
    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn get(&self, idx: usize) -> BasisState {
        self.states[idx]
    }
}

pub fn build_collective_basis(atoms: usize) -> Result<CollectiveBasis, SpectrumError> {
    if !(MIN_ATOMS..=MAX_ATOMS).contains(&atoms) {
        return Err(SpectrumError::AtomNumber(atoms));
    }
    let mut states = vec![BasisState::AllInitial];
    for s in 0..atoms {
        for s_prime in 0..atoms {
            if s != s_prime {
                states.push(BasisState::Flipped { s, s_prime });
            }
        }
    }
    Ok(CollectiveBasis { atoms, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn dimensions() {
        assert_eq!(build_collective_basis(2).unwrap().dim(), 3);
        assert_eq!(build_collective_basis(3).unwrap().dim(), 7);
        assert_eq!(build_collective_basis(5).unwrap().dim(), 21);
        assert!(build_collective_basis(1).is_err());
        assert!(build_collective_basis(6).is_err());
    }

    #[test]
    fn distinct_and_exhaustive() {
        for n in 2..=5 {
            let b = build_collective_basis(n).unwrap();
            let set: HashSet<_> = b.states().iter().copied().collect();
            assert_eq!(set.len(), b.dim());
            assert_eq!(b.get(0), BasisState::AllInitial);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert!(set.contains(&BasisState::Flipped { s: i, s_prime: j }));
                    }
                }
            }
        }
    }
}
