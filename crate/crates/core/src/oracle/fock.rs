//! Two-mode Fock states with ladder operators.

use alloc::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Float;

use crate::observables::InputState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    A,
    B,
    ADag,
    BDag,
}

/// Sparse superposition `Σ c(n_a, n_b) |n_a, n_b⟩`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockState {
    amps: BTreeMap<(u32, u32), Complex64>,
}

impl FockState {
    pub fn basis(n_a: u32, n_b: u32) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert((n_a, n_b), Complex64::new(1.0, 0.0));
        Self { amps }
    }

    pub fn from_terms(terms: &[((u32, u32), Complex64)]) -> Self {
        let mut s = Self::default();
        for &(n, c) in terms {
            *s.amps.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        s
    }

    pub fn from_input(input: InputState) -> Self {
        match input {
            InputState::Vacuum => Self::basis(0, 0),
            InputState::PhotonA => Self::basis(1, 0),
            InputState::PhotonB => Self::basis(0, 1),
            InputState::Noon2 => {
                let c = Complex64::new(0.5.sqrt(), 0.0);
                Self::from_terms(&[((2, 0), c), ((0, 2), c)])
            }
        }
    }

    pub fn apply(&self, op: Ladder) -> Self {
        let mut out = Self::default();
        for (&(na, nb), &c) in &self.amps {
            let (target, factor) = match op {
                Ladder::A if na > 0 => ((na - 1, nb), (na as f64).sqrt()),
                Ladder::B if nb > 0 => ((na, nb - 1), (nb as f64).sqrt()),
                Ladder::ADag => ((na + 1, nb), ((na + 1) as f64).sqrt()),
                Ladder::BDag => ((na, nb + 1), ((nb + 1) as f64).sqrt()),
                _ => continue,
            };
            *out.amps.entry(target).or_insert(Complex64::new(0.0, 0.0)) += c * factor;
        }
        out
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .filter_map(|(n, c)| other.amps.get(n).map(|d| c.conj() * d))
            .sum()
    }

    /// `⟨ψ| ops[0] ops[1] … ops[n−1] |ψ⟩`.
    pub fn expectation(&self, ops: &[Ladder]) -> Complex64 {
        let mut v = self.clone();
        for &op in ops.iter().rev() {
            v = v.apply(op);
        }
        self.inner(&v)
    }
}
