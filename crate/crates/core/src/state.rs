//! States of the one-excitation sector.
//!
//! Basis ordering is fixed throughout the crate: index `i < N` is a photon in
//! cavity `i + 1`, index `N + i` is an excitation of atom `i + 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `||psi|| = 1` accepted for initial states.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Excitation {
    Photon,
    Atom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationState {
    n_cavities: usize,
    amplitudes: Vec<Complex64>,
}

impl SingleExcitationState {
    /// A single photon or exciton localized on `site` (1-based).
    pub fn localized(n_cavities: usize, kind: Excitation, site: usize) -> Result<Self> {
        if site < 1 || site > n_cavities {
            return Err(Error::OutOfRange {
                what: "site",
                value: site as i64,
                lo: 1,
                hi: n_cavities as i64,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * n_cavities];
        let offset = match kind {
            Excitation::Photon => 0,
            Excitation::Atom => n_cavities,
        };
        amplitudes[offset + site - 1] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_cavities,
            amplitudes,
        })
    }

    pub fn atom(n_cavities: usize, site: usize) -> Result<Self> {
        Self::localized(n_cavities, Excitation::Atom, site)
    }

    pub fn photon(n_cavities: usize, site: usize) -> Result<Self> {
        Self::localized(n_cavities, Excitation::Photon, site)
    }

    /// Wraps an amplitude vector of length `2N`, rejecting unnormalized input.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_amplitudes_unchecked(amplitudes)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Only checks that the length is even and nonzero.
    pub(crate) fn from_amplitudes_unchecked(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() || !amplitudes.len().is_multiple_of(2) {
            return Err(Error::Dimension {
                got: amplitudes.len(),
                expected: amplitudes.len() + amplitudes.len() % 2,
            });
        }
        Ok(Self {
            n_cavities: amplitudes.len() / 2,
            amplitudes,
        })
    }

    pub fn n_cavities(&self) -> usize {
        self.n_cavities
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn photon_amplitudes(&self) -> &[Complex64] {
        &self.amplitudes[..self.n_cavities]
    }

    pub fn atom_amplitudes(&self) -> &[Complex64] {
        &self.amplitudes[self.n_cavities..]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn photon_probabilities(&self) -> Vec<f64> {
        self.photon_amplitudes()
            .iter()
            .map(|a| a.norm_sqr())
            .collect()
    }

    pub fn atom_probabilities(&self) -> Vec<f64> {
        self.atom_amplitudes()
            .iter()
            .map(|a| a.norm_sqr())
            .collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn localized_layout() {
        let s = SingleExcitationState::atom(3, 2).unwrap();
        assert_eq!(s.amplitudes().len(), 6);
        assert_eq!(s.atom_probabilities(), vec![0.0, 1.0, 0.0]);
        assert_eq!(s.photon_probabilities(), vec![0.0; 3]);
        let p = SingleExcitationState::photon(3, 3).unwrap();
        assert_eq!(p.photon_probabilities(), vec![0.0, 0.0, 1.0]);
        assert!(SingleExcitationState::atom(3, 0).is_err());
        assert!(SingleExcitationState::atom(3, 4).is_err());
    }

    #[test]
    fn rejects_unnormalized() {
        let v = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            SingleExcitationState::from_amplitudes(v),
            Err(Error::NotNormalized { .. })
        ));
        let odd = vec![Complex64::new(1.0, 0.0); 3];
        assert!(SingleExcitationState::from_amplitudes(odd).is_err());
    }

    #[test]
    fn fidelity_of_orthogonal_states() {
        let a = SingleExcitationState::atom(3, 1).unwrap();
        let b = SingleExcitationState::photon(3, 1).unwrap();
        assert_eq!(a.fidelity(&b), 0.0);
        assert_eq!(a.fidelity(&a), 1.0);
    }
}
