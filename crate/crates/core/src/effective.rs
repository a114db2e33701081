//! Reduced dynamics in the strong-hopping regime.
//!
//! Only the bound photonic mode and its atomic analogue exchange energy,
//! through a two-level Jaynes-Cummings block with Rabi frequency
//! `Omega = sqrt(delta^2 + 4 J^2)`. Band photon modes rotate freely at their
//! own frequencies and every band atomic mode rotates at `omega_a`.
//!
//! States produced here are expressed in the frame rotating at `omega_a`,
//! i.e. the global phase `exp(-i omega_a t)` is dropped. Probabilities and
//! fidelities are unaffected, and atomic components orthogonal to the bound
//! mode stay bitwise constant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ArrayParams;
use crate::spectral::{full_spectrum, tau, ModeTable};
use crate::state::{Excitation, SingleExcitationState};
use crate::trace::EvolutionTrace;

/// Largest `J / (kappa |eta|)` for which the reduced description is trusted.
pub const REGIME_MAX_RATIO: f64 = 0.1;

/// `Omega = sqrt(delta^2 + 4 J^2)`.
pub fn rabi(j: f64, delta: f64) -> f64 {
    (delta * delta + 4.0 * j * j).sqrt()
}

/// Eigenvectors of the bound-pair block `[[omega_f, J], [J, omega_a]]` in
/// the (bound photon, bound exciton) basis.
///
/// `(a_plus, b_plus)` has energy `(omega_a + omega_f) / 2 + Omega / 2`,
/// `(a_minus, b_minus)` has `(omega_a + omega_f) / 2 - Omega / 2`. With
/// `delta = omega_f - omega_a` this gives `A ∝ 2J`, `B ∝ ±Omega - delta`.
/// Signs are fixed by `A >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPair {
    pub rabi_omega: f64,
    pub delta: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
}

impl DressedPair {
    /// `(omega_a + omega_f) / 2 +- Omega / 2`, upper first.
    pub fn energies(&self, omega_f: f64) -> (f64, f64) {
        let mean = omega_f - 0.5 * self.delta;
        (mean + 0.5 * self.rabi_omega, mean - 0.5 * self.rabi_omega)
    }
}

/// Unit eigenvector for the eigenvalue `sign * Omega / 2` of
/// `[[delta/2, J], [J, -delta/2]]`, picking whichever of the two equivalent
/// unnormalized forms is better conditioned.
fn dressed_vector(j: f64, delta: f64, omega: f64, sign: f64) -> (f64, f64) {
    let lam2 = sign * omega; // twice the eigenvalue
    let first = (2.0 * j, lam2 - delta);
    let second = (lam2 + delta, 2.0 * j);
    let n1 = first.0.hypot(first.1);
    let n2 = second.0.hypot(second.1);
    let (a, b) = if n1 >= n2 {
        (first.0 / n1, first.1 / n1)
    } else {
        (second.0 / n2, second.1 / n2)
    };
    if a < 0.0 {
        (-a, -b)
    } else {
        (a, b)
    }
}

pub fn dressed_coefficients(j: f64, delta: f64) -> Result<DressedPair> {
    if j < 0.0 || !j.is_finite() || !delta.is_finite() {
        return Err(Error::InvalidParams(format!("J = {j}, delta = {delta}")));
    }
    if j == 0.0 && delta == 0.0 {
        return Err(Error::Degenerate(
            "J = 0 and delta = 0: dressed pair is degenerate",
        ));
    }
    let omega = rabi(j, delta);
    let (a_plus, b_plus) = dressed_vector(j, delta, omega, 1.0);
    let (a_minus, b_minus) = dressed_vector(j, delta, omega, -1.0);
    Ok(DressedPair {
        rabi_omega: omega,
        delta,
        a_plus,
        a_minus,
        b_plus,
        b_minus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeCheck {
    /// `J / (kappa |eta|)`, infinite for the uniform array.
    pub ratio: f64,
    pub ok: bool,
}

/// Advisory check of the strong-hopping conditions `J / (kappa |eta|) <= 0.1`
/// and `|delta| <= 10 J`. Never blocks a computation.
pub fn regime_validity(params: &ArrayParams) -> RegimeCheck {
    let eta = params.eta().abs();
    if eta == 0.0 {
        return RegimeCheck {
            ratio: f64::INFINITY,
            ok: false,
        };
    }
    let ratio = params.coupling_j() / (params.kappa() * eta);
    let detuning_ok = params.delta().abs() <= 10.0 * params.coupling_j().max(1e-12);
    RegimeCheck {
        ratio,
        ok: ratio <= REGIME_MAX_RATIO && detuning_ok,
    }
}

/// Parameters plus the normal modes the reduced dynamics is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveModel {
    params: ArrayParams,
    modes: ModeTable,
    ln_n_script: f64,
}

impl EffectiveModel {
    pub fn new(params: &ArrayParams) -> Result<Self> {
        params.require_analytic()?;
        let modes = full_spectrum(params)?;
        let ln_n_script = 2.0 * modes.bound().ln_prefactor;
        Ok(Self {
            params: *params,
            modes,
            ln_n_script,
        })
    }

    pub fn params(&self) -> &ArrayParams {
        &self.params
    }

    pub fn modes(&self) -> &ModeTable {
        &self.modes
    }

    /// Squared bound-mode prefactor, the bound weight of site 1.
    pub fn n_script(&self) -> f64 {
        self.ln_n_script.exp()
    }

    pub fn rabi_omega(&self) -> f64 {
        rabi(self.params.coupling_j(), self.params.delta())
    }

    pub fn dressed(&self) -> Result<DressedPair> {
        dressed_coefficients(self.params.coupling_j(), self.params.delta())
    }

    /// `N tau^((x0 + x - 2) / 2)` for odd sites, evaluated in log space.
    pub fn bound_overlap(&self, x0: usize, x: usize) -> Result<f64> {
        self.check_odd(x0)?;
        self.check_odd(x)?;
        let t = tau(self.params.eta())?;
        let p = (x0 + x - 2) / 2;
        let mag = (self.ln_n_script + p as f64 * t.abs().ln()).exp();
        Ok(if t < 0.0 && p % 2 == 1 { -mag } else { mag })
    }

    fn check_odd(&self, site: usize) -> Result<()> {
        let n = self.params.n_cavities();
        if site < 1 || site > n {
            return Err(Error::OutOfRange {
                what: "site",
                value: site as i64,
                lo: 1,
                hi: n as i64,
            });
        }
        if site.is_multiple_of(2) {
            return Err(Error::SiteParity {
                site,
                expected: "odd",
            });
        }
        Ok(())
    }

    /// `exp(-i H_pair t)` for the bound pair in the rotating frame, as
    /// `[[uaa, uab], [uba, ubb]]` acting on (photon, exciton).
    fn pair_propagator(&self, t: f64) -> [[Complex64; 2]; 2] {
        let j = self.params.coupling_j();
        let d = self.params.delta();
        let omega = self.rabi_omega();
        let global = Complex64::from_polar(1.0, -0.5 * d * t);
        let (s, c) = (0.5 * omega * t).sin_cos();
        // sin(Omega t / 2) / Omega, continuous at Omega = 0
        let sinc = if omega == 0.0 { 0.5 * t } else { s / omega };
        let i = Complex64::i();
        let uaa = global * (c - i * d * sinc);
        let ubb = global * (c + i * d * sinc);
        let uab = global * (-i * 2.0 * j * sinc);
        [[uaa, uab], [uab, ubb]]
    }

    /// State at time `t` (rotating frame).
    pub fn propagate(
        &self,
        initial: &SingleExcitationState,
        t: f64,
    ) -> Result<SingleExcitationState> {
        let n = self.params.n_cavities();
        if initial.n_cavities() != n {
            return Err(Error::Dimension {
                got: initial.amplitudes().len(),
                expected: 2 * n,
            });
        }
        initial.check_normalized()?;
        if !t.is_finite() || t < 0.0 {
            return Err(Error::BadTime(t));
        }
        Ok(self.propagate_unchecked(initial, t))
    }

    fn propagate_unchecked(
        &self,
        initial: &SingleExcitationState,
        t: f64,
    ) -> SingleExcitationState {
        let n = self.params.n_cavities();
        let omega_a = self.params.omega_a();
        let photon = initial.photon_amplitudes();
        let atom = initial.atom_amplitudes();
        let bound = &self.modes.bound().amplitudes;

        let project = |phi: &[f64], v: &[Complex64]| -> Complex64 {
            phi.iter().zip(v).map(|(p, a)| a * *p).sum()
        };

        let d_bound = project(bound, atom);
        let c_bound = project(bound, photon);
        let u = self.pair_propagator(t);
        let c_bound_t = u[0][0] * c_bound + u[0][1] * d_bound;
        let d_bound_t = u[1][0] * c_bound + u[1][1] * d_bound;

        let mut out = vec![Complex64::new(0.0, 0.0); 2 * n];
        // atomic band modes all share omega_a: static in this frame
        for x in 0..n {
            out[n + x] = atom[x] - bound[x] * d_bound + bound[x] * d_bound_t;
            out[x] = bound[x] * c_bound_t;
        }
        for mode in self.modes.band_modes() {
            let c = project(&mode.amplitudes, photon);
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ct = c * Complex64::from_polar(1.0, -(mode.frequency - omega_a) * t);
            for (o, p) in out[..n].iter_mut().zip(&mode.amplitudes) {
                *o += ct * *p;
            }
        }
        SingleExcitationState::from_amplitudes_unchecked(out)
            .expect("2N amplitudes by construction")
    }
}

/// Photon and exciton amplitudes on odd site `x` for an exciton initially on
/// odd site `x0`, in the frame rotating at `omega_a`:
///
/// ```text
/// photon = -2i o (J / Omega) sin(Omega t / 2) e^{-i delta t / 2}
/// atom   = delta_{x x0} + o [(cos(Omega t / 2) + i (delta / Omega) sin(Omega t / 2)) e^{-i delta t / 2} - 1]
/// ```
///
/// with `o = N tau^((x0 + x - 2) / 2)` and `delta = omega_f - omega_a`.
pub fn amplitudes_closed_form(
    model: &EffectiveModel,
    x0: usize,
    x: usize,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    let o = model.bound_overlap(x0, x)?;
    let j = model.params.coupling_j();
    let d = model.params.delta();
    let omega = model.rabi_omega();
    let (s, c) = (0.5 * omega * t).sin_cos();
    let (j_over, d_over) = if omega == 0.0 {
        (0.0, 0.0)
    } else {
        (j / omega, d / omega)
    };
    let phase = Complex64::from_polar(1.0, -0.5 * d * t);
    let i = Complex64::i();
    let photon = -2.0 * i * o * j_over * s * phase;
    let kron = if x == x0 { 1.0 } else { 0.0 };
    let atom = kron + o * ((c + i * d_over * s) * phase - 1.0);
    Ok((photon, atom))
}

/// Resonant (`delta = 0`) photon and exciton probabilities on odd site `x`
/// for an exciton initially on odd site `x0`.
pub fn probabilities_resonant(
    model: &EffectiveModel,
    x0: usize,
    x: usize,
    t: f64,
) -> Result<(f64, f64)> {
    if model.params.delta() != 0.0 {
        return Err(Error::InvalidParams(
            "resonant probabilities need delta = 0; use the amplitudes instead".into(),
        ));
    }
    let o = model.bound_overlap(x0, x)?;
    let j = model.params.coupling_j();
    let omega = model.rabi_omega();
    if omega == 0.0 {
        return Ok((0.0, if x == x0 { 1.0 } else { 0.0 }));
    }
    let (s, c) = (0.5 * omega * t).sin_cos();
    let p_f = (2.0 * o * j / omega).powi(2) * s * s;
    let kron = if x == x0 { 1.0 } else { 0.0 };
    let p_a = (kron + o * (c - 1.0)).powi(2);
    Ok((p_f, p_a))
}

pub fn evolve_effective(
    model: &EffectiveModel,
    initial: &SingleExcitationState,
    times: &[f64],
) -> Result<EvolutionTrace> {
    let states = times
        .iter()
        .map(|&t| model.propagate(initial, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvolutionTrace::from_states(times, &states))
}

/// Largest change of any probability along the effective trace of an
/// exciton started on even site `x0`.
pub fn freezing_check(model: &EffectiveModel, x0: usize, times: &[f64]) -> Result<f64> {
    if x0 % 2 == 1 {
        return Err(Error::SiteParity {
            site: x0,
            expected: "even",
        });
    }
    let n = model.params.n_cavities();
    let initial = SingleExcitationState::localized(n, Excitation::Atom, x0)?;
    Ok(evolve_effective(model, &initial, times)?.max_deviation_from_initial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn rabi_values() {
        assert_eq!(rabi(0.7, 0.0), 1.4);
        assert_eq!(rabi(0.0, -3.0), 3.0);
        assert_abs_diff_eq!(rabi(1.0, 3.0), 13f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn dressed_resonant() {
        let d = dressed_coefficients(1.0, 0.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for v in [d.a_plus, d.a_minus, d.b_plus, d.b_minus] {
            assert_abs_diff_eq!(v.abs(), h, epsilon = 1e-15);
        }
        assert_eq!(d.energies(10.0), (11.0, 9.0));
    }

    #[test]
    fn dressed_dispersive_limit() {
        let d = dressed_coefficients(1e-4, 10.0).unwrap();
        // delta > 0: omega_f above omega_a, upper state is photonic
        assert!(d.a_plus > 1.0 - 1e-9);
        assert!(d.b_minus.abs() > 1.0 - 1e-9);
        let d = dressed_coefficients(0.0, 2.0).unwrap();
        assert_eq!((d.a_plus, d.b_plus), (1.0, 0.0));
        assert_eq!((d.a_minus, d.b_minus.abs()), (0.0, 1.0));
        assert!(dressed_coefficients(0.0, 0.0).is_err());
    }

    #[test]
    fn regime() {
        let p = ArrayParams::new(101, -0.25, 100.0, 1000.0, 0.0, 1.0).unwrap();
        let r = regime_validity(&p);
        assert_abs_diff_eq!(r.ratio, 0.04, epsilon = 1e-15);
        assert!(r.ok);
        assert!(!regime_validity(&p.with_kappa(1.0).unwrap()).ok);
        let r0 = regime_validity(&p.with_eta(0.0).unwrap());
        assert!(!r0.ok && r0.ratio.is_infinite());
        assert!(!regime_validity(&p.with_delta(50.0).unwrap()).ok);
    }

    #[test]
    fn closed_form_initial_condition_and_revival() {
        let p = ArrayParams::new(21, -0.3, 50.0, 7.0, 0.0, 1.0).unwrap();
        let m = EffectiveModel::new(&p).unwrap();
        let omega = m.rabi_omega();
        for t in [0.0, 4.0 * PI / omega] {
            let (ph, at) = amplitudes_closed_form(&m, 1, 1, t).unwrap();
            assert_abs_diff_eq!(ph.norm(), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(at.re, 1.0, epsilon = 1e-14);
            let (ph, at) = amplitudes_closed_form(&m, 1, 5, t).unwrap();
            assert_abs_diff_eq!(ph.norm() + at.norm(), 0.0, epsilon = 1e-14);
        }
        assert!(amplitudes_closed_form(&m, 2, 1, 1.0).is_err());
        assert!(probabilities_resonant(&m, 1, 4, 1.0).is_err());
    }

    #[test]
    fn resonant_probabilities_need_zero_detuning() {
        let p = ArrayParams::new(5, -0.3, 50.0, 7.0, 0.2, 1.0).unwrap();
        let m = EffectiveModel::new(&p).unwrap();
        assert!(probabilities_resonant(&m, 1, 1, 1.0).is_err());
        assert!(amplitudes_closed_form(&m, 1, 1, 1.0).is_ok());
    }

    #[test]
    fn n_script_limit() {
        // tau = -0.6: N -> 1 - tau^2 = 0.64 for long arrays
        let p = ArrayParams::new(101, -0.25, 100.0, 1000.0, 0.0, 1.0).unwrap();
        let m = EffectiveModel::new(&p).unwrap();
        assert_abs_diff_eq!(m.n_script(), 0.64, epsilon = 1e-12);
        let b1 = m.modes().bound().amplitudes[0];
        assert_abs_diff_eq!(m.n_script(), b1 * b1, epsilon = 1e-12);
    }

    #[test]
    fn freezing_rejects_odd_sites() {
        let p = ArrayParams::new(5, -0.3, 50.0, 7.0, 0.0, 1.0).unwrap();
        let m = EffectiveModel::new(&p).unwrap();
        assert!(freezing_check(&m, 3, &[0.0, 1.0]).is_err());
        assert_eq!(freezing_check(&m, 2, &[0.0, 1.0, 2.0]).unwrap(), 0.0);
    }
}
