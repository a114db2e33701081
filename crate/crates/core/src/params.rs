//! Physical configuration of a staggered coupled-cavity array.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Array size, hopping pattern and atom-field parameters.
///
/// Frequencies are in whatever unit the caller picks; the CLI uses units of
/// the atom-field rate `J`. The atomic frequency is derived from the
/// detuning as `omega_a = omega_f - delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayParams {
    n_cavities: usize,
    eta: f64,
    kappa: f64,
    omega_f: f64,
    delta: f64,
    coupling_j: f64,
}

impl ArrayParams {
    /// Validates and builds a parameter set.
    ///
    /// `|eta| <= 1` is accepted here so that the matrix oracle can cover the
    /// fully dimerized array; closed-form routines call
    /// [`ArrayParams::require_analytic`] on top of this.
    pub fn new(
        n_cavities: usize,
        eta: f64,
        kappa: f64,
        omega_f: f64,
        delta: f64,
        coupling_j: f64,
    ) -> Result<Self> {
        if n_cavities == 0 || n_cavities.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "N = {n_cavities}: only odd array lengths N >= 1 are supported"
            )));
        }
        for (name, v) in [
            ("eta", eta),
            ("kappa", kappa),
            ("omega_f", omega_f),
            ("delta", delta),
            ("J", coupling_j),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
            }
        }
        if eta.abs() > 1.0 {
            return Err(Error::InvalidParams(format!(
                "|eta| = {} exceeds 1",
                eta.abs()
            )));
        }
        if kappa <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "kappa = {kappa} must be positive"
            )));
        }
        if coupling_j < 0.0 {
            return Err(Error::InvalidParams(format!(
                "J = {coupling_j} must be non-negative"
            )));
        }
        Ok(Self {
            n_cavities,
            eta,
            kappa,
            omega_f,
            delta,
            coupling_j,
        })
    }

    /// Photonic-only configuration (no detuning, no atom-field coupling).
    pub fn photonic(n_cavities: usize, eta: f64, kappa: f64, omega_f: f64) -> Result<Self> {
        Self::new(n_cavities, eta, kappa, omega_f, 0.0, 0.0)
    }

    pub fn n_cavities(&self) -> usize {
        self.n_cavities
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn omega_f(&self) -> f64 {
        self.omega_f
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn coupling_j(&self) -> f64 {
        self.coupling_j
    }

    /// Atomic transition frequency `omega_f - delta`.
    pub fn omega_a(&self) -> f64 {
        self.omega_f - self.delta
    }

    /// Hopping rate on odd bonds (cavities 1-2, 3-4, ...).
    pub fn kappa_odd(&self) -> f64 {
        (1.0 + self.eta) * self.kappa
    }

    /// Hopping rate on even bonds (cavities 2-3, 4-5, ...).
    pub fn kappa_even(&self) -> f64 {
        (1.0 - self.eta) * self.kappa
    }

    /// Fails unless `|eta| < 1`, the domain of the closed-form normal modes.
    pub fn require_analytic(&self) -> Result<()> {
        if self.eta.abs() < 1.0 {
            Ok(())
        } else {
            Err(Error::Domain { eta: self.eta })
        }
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(
            self.n_cavities,
            eta,
            self.kappa,
            self.omega_f,
            self.delta,
            self.coupling_j,
        )
    }

    pub fn with_n(&self, n_cavities: usize) -> Result<Self> {
        Self::new(
            n_cavities,
            self.eta,
            self.kappa,
            self.omega_f,
            self.delta,
            self.coupling_j,
        )
    }

    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::new(
            self.n_cavities,
            self.eta,
            kappa,
            self.omega_f,
            self.delta,
            self.coupling_j,
        )
    }

    pub fn with_coupling(&self, coupling_j: f64) -> Result<Self> {
        Self::new(
            self.n_cavities,
            self.eta,
            self.kappa,
            self.omega_f,
            self.delta,
            coupling_j,
        )
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(
            self.n_cavities,
            self.eta,
            self.kappa,
            self.omega_f,
            delta,
            self.coupling_j,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_and_zero_lengths() {
        assert!(ArrayParams::photonic(0, 0.0, 1.0, 0.0).is_err());
        assert!(ArrayParams::photonic(4, 0.0, 1.0, 0.0).is_err());
        assert!(ArrayParams::photonic(1, 0.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(ArrayParams::photonic(3, 0.0, 0.0, 0.0).is_err());
        assert!(ArrayParams::photonic(3, 1.5, 1.0, 0.0).is_err());
        assert!(ArrayParams::new(3, 0.0, 1.0, 0.0, 0.0, -1.0).is_err());
        assert!(ArrayParams::new(3, f64::NAN, 1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn dimerized_limit_is_accepted_but_not_analytic() {
        let p = ArrayParams::photonic(5, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(p.kappa_odd(), 0.0);
        assert_eq!(p.kappa_even(), 2.0);
        assert_eq!(p.require_analytic(), Err(Error::Domain { eta: -1.0 }));
    }

    #[test]
    fn derived_quantities() {
        let p = ArrayParams::new(101, -0.25, 100.0, 1000.0, 2.0, 1.0).unwrap();
        assert_eq!(p.omega_a(), 998.0);
        assert_eq!(p.kappa_odd(), 75.0);
        assert_eq!(p.kappa_even(), 125.0);
    }
}
