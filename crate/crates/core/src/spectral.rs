//! Closed-form normal modes of the staggered free-photon hopping Hamiltonian.
//!
//! For an odd number of cavities the hopping Hamiltonian splits into a single
//! bound mode pinned at `omega_f` and two bands `omega_f -/+ eps_k` with
//! `k = 2 pi m / (N + 1)`, `m = 1..=(N - 1) / 2`.
//!
//! Branch bookkeeping: the branch index `mu = +1` labels the *lower* band,
//! `omega = omega_f - eps_k`, and `mu = -1` the upper band. On odd sites the
//! band amplitude carries the factor `mu`.
//!
//! Sign convention: every mode is flipped so that its first nonzero site
//! amplitude is positive. For the bound mode this reverses the sign of the
//! literal analytic prefactor, which is negative for every `eta`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ArrayParams;

/// Tolerance on `|e^{i theta_k}| = 1` checked by [`theta_k`].
pub const PHASE_MODULUS_TOL: f64 = 1e-12;

/// Which of the two bands a band mode belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `mu = +1`, frequency `omega_f - eps_k`.
    Lower,
    /// `mu = -1`, frequency `omega_f + eps_k`.
    Upper,
}

impl Branch {
    /// The numerical branch index `mu`.
    pub fn mu(self) -> f64 {
        match self {
            Branch::Lower => 1.0,
            Branch::Upper => -1.0,
        }
    }

    pub fn from_mu(mu: i32) -> Option<Self> {
        match mu {
            1 => Some(Branch::Lower),
            -1 => Some(Branch::Upper),
            _ => None,
        }
    }

    pub fn mu_i32(self) -> i32 {
        match self {
            Branch::Lower => 1,
            Branch::Upper => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeLabel {
    Bound,
    Band { m: usize, branch: Branch },
}

impl std::fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModeLabel::Bound => write!(f, "bound"),
            ModeLabel::Band { m, branch } => write!(f, "band_{}_{:+}", m, branch.mu_i32()),
        }
    }
}

/// One photonic normal mode with its real site amplitudes (sites `1..=N`
/// stored at indices `0..N`).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalMode {
    pub label: ModeLabel,
    pub wavevector: Option<f64>,
    pub epsilon: Option<f64>,
    pub theta: Option<f64>,
    pub frequency: f64,
    pub amplitudes: Vec<f64>,
    /// Natural log of the magnitude of the factor multiplying `tau^(x-1)`
    /// (bound) or `sin(...)` (band).
    pub ln_prefactor: f64,
}

impl NormalMode {
    /// Magnitude of the normalization prefactor, when it is a normal `f64`.
    ///
    /// For the bound mode at large `N` and `eta > 0` the prefactor underflows
    /// even though the amplitude vector itself is perfectly representable.
    pub fn norm_prefactor(&self) -> Option<f64> {
        let v = self.ln_prefactor.exp();
        (v.is_normal()).then_some(v)
    }

    pub fn is_bound(&self) -> bool {
        self.label == ModeLabel::Bound
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// The complete orthonormal set of `N` photonic normal modes: the bound mode
/// first, then band modes ordered by `(m, branch)` with the lower branch first.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    params: ArrayParams,
    modes: Vec<NormalMode>,
}

impl ModeTable {
    pub fn params(&self) -> &ArrayParams {
        &self.params
    }

    pub fn modes(&self) -> &[NormalMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn bound(&self) -> &NormalMode {
        &self.modes[0]
    }

    pub fn band_modes(&self) -> &[NormalMode] {
        &self.modes[1..]
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.frequency).collect()
    }

    /// `N x N` matrix whose columns are the mode amplitude vectors.
    pub fn amplitude_matrix(&self) -> DMatrix<f64> {
        let n = self.params.n_cavities();
        DMatrix::from_fn(n, self.modes.len(), |x, j| self.modes[j].amplitudes[x])
    }

    /// Builds a table from arbitrary modes. Used to inject faults when
    /// exercising the identity checks; no invariants are enforced.
    pub fn from_parts(params: ArrayParams, modes: Vec<NormalMode>) -> Self {
        Self { params, modes }
    }
}

/// `tau = (eta + 1) / (eta - 1)`, the ratio between successive odd-site
/// amplitudes of the bound mode.
pub fn tau(eta: f64) -> Result<f64> {
    if eta.is_nan() || eta.abs() >= 1.0 {
        return Err(Error::Domain { eta });
    }
    Ok((eta + 1.0) / (eta - 1.0))
}

/// Band half-splitting `eps_k = 2 kappa sqrt(cos^2(k/2) + eta^2 sin^2(k/2))`.
pub fn epsilon_k(kappa: f64, eta: f64, k: f64) -> f64 {
    let (s, c) = (0.5 * k).sin_cos();
    2.0 * kappa * (c * c + eta * eta * s * s).sqrt()
}

/// The unit phasor `e^{i theta_k} = kappa (1 - eta) / eps_k * (e^{-ik} - tau)`.
pub fn theta_phasor(kappa: f64, eta: f64, k: f64) -> Result<Complex64> {
    let t = tau(eta)?;
    let eps = epsilon_k(kappa, eta, k);
    if eps == 0.0 {
        return Err(Error::Degenerate("eps_k vanishes"));
    }
    Ok(Complex64::from_polar(1.0, -k).sub_real(t) * (kappa * (1.0 - eta) / eps))
}

trait SubReal {
    fn sub_real(self, r: f64) -> Self;
}

impl SubReal for Complex64 {
    fn sub_real(self, r: f64) -> Self {
        Complex64::new(self.re - r, self.im)
    }
}

/// Principal-value phase `theta_k` in `(-pi, pi]`. The unit-modulus property
/// of the phasor is checked rather than assumed.
pub fn theta_k(kappa: f64, eta: f64, k: f64) -> Result<f64> {
    let z = theta_phasor(kappa, eta, k)?;
    let modulus = z.norm();
    if (modulus - 1.0).abs() > PHASE_MODULUS_TOL {
        return Err(Error::PhaseModulus { modulus });
    }
    let th = z.im.atan2(z.re);
    // atan2 yields -pi for (negative, -0.0); fold onto the half-open interval
    Ok(if th <= -PI { th + 2.0 * PI } else { th })
}

/// Band wavevectors `2 pi m / (N + 1)`, `m = 1..=(N - 1) / 2`.
pub fn mode_wavevectors(n_cavities: usize) -> Result<Vec<f64>> {
    if n_cavities == 0 || n_cavities.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "N = {n_cavities}: wavevector grid needs odd N"
        )));
    }
    let denom = (n_cavities + 1) as f64;
    Ok((1..=(n_cavities - 1) / 2)
        .map(|m| 2.0 * PI * m as f64 / denom)
        .collect())
}

/// `ln |A|` for the bound mode, evaluated as `-1/2 ln sum_j |tau|^{2j}` so
/// that neither `tau^(N+1)` nor `A` itself is ever formed.
fn bound_ln_prefactor(n_cavities: usize, tau: f64) -> f64 {
    let n_odd = n_cavities.div_ceil(2);
    let r = tau.abs();
    let ln_sum = if r <= 1.0 {
        let r2 = r * r;
        let mut acc = 0.0;
        let mut term = 1.0;
        for _ in 0..n_odd {
            acc += term;
            term *= r2;
        }
        acc.ln()
    } else {
        let inv2 = 1.0 / (r * r);
        let mut acc = 0.0;
        let mut term = 1.0;
        for _ in 0..n_odd {
            acc += term;
            term *= inv2;
        }
        2.0 * (n_odd - 1) as f64 * r.ln() + acc.ln()
    };
    -0.5 * ln_sum
}

/// The literal analytic prefactor `A = 2/(eta-1) sqrt(eta / (tau^(N+1) - 1))`.
///
/// Returns `None` at `eta = 0` (0/0) or when an intermediate overflows. Kept
/// as an independent cross-check of the log-space construction.
pub fn bound_prefactor_literal(n_cavities: usize, eta: f64) -> Option<f64> {
    let t = tau(eta).ok()?;
    if eta == 0.0 {
        return None;
    }
    let tn = t.powi((n_cavities + 1) as i32);
    let a = 2.0 / (eta - 1.0) * (eta / (tn - 1.0)).sqrt();
    (a.is_finite() && a != 0.0).then_some(a)
}

fn canonicalize_sign(amps: &mut [f64]) {
    if let Some(first) = amps.iter().copied().find(|a| *a != 0.0) {
        if first < 0.0 {
            amps.iter_mut().for_each(|a| *a = -*a);
        }
    }
}

/// The bound mode: amplitude `A tau^(x-1)` on site `2x - 1`, zero on every
/// even site, frequency exactly `omega_f`.
///
/// Amplitudes are formed as `exp(j ln|tau| + ln|A|)` with the sign of
/// `tau^j`, so nothing overflows for `eta > 0` and large `N`. At `eta = 0`
/// this reduces to `(-1)^j sqrt(2 / (N + 1))` without evaluating the 0/0 form
/// of the analytic prefactor.
pub fn bound_mode(params: &ArrayParams) -> Result<NormalMode> {
    params.require_analytic()?;
    let n = params.n_cavities();
    let t = tau(params.eta())?;
    let ln_r = t.abs().ln();
    let ln_a = bound_ln_prefactor(n, t);
    let mut amps = vec![0.0; n];
    for j in 0..n.div_ceil(2) {
        let mag = (j as f64 * ln_r + ln_a).exp();
        amps[2 * j] = if t < 0.0 && j % 2 == 1 { -mag } else { mag };
    }
    let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    canonicalize_sign(&mut amps);
    Ok(NormalMode {
        label: ModeLabel::Bound,
        wavevector: None,
        epsilon: None,
        theta: None,
        frequency: params.omega_f(),
        amplitudes: amps,
        ln_prefactor: ln_a,
    })
}

/// Band mode `(m, branch)` with frequency `omega_f - mu eps_k`.
pub fn band_mode(params: &ArrayParams, m: usize, branch: Branch) -> Result<NormalMode> {
    params.require_analytic()?;
    let n = params.n_cavities();
    let m_max = (n - 1) / 2;
    if m < 1 || m > m_max {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            lo: 1,
            hi: m_max as i64,
        });
    }
    let (kappa, eta) = (params.kappa(), params.eta());
    let k = 2.0 * PI * m as f64 / (n + 1) as f64;
    let eps = epsilon_k(kappa, eta, k);
    let theta = theta_k(kappa, eta, k)?;
    let mu = branch.mu();
    let b = (2.0 / (n + 1) as f64).sqrt();

    let mut amps = vec![0.0; n];
    for xt in 1..=n.div_ceil(2) {
        amps[2 * xt - 2] = mu * b * (k * xt as f64 + theta).sin();
    }
    for xt in 1..=(n - 1) / 2 {
        amps[2 * xt - 1] = b * (k * xt as f64).sin();
    }
    canonicalize_sign(&mut amps);

    Ok(NormalMode {
        label: ModeLabel::Band { m, branch },
        wavevector: Some(k),
        epsilon: Some(eps),
        theta: Some(theta),
        frequency: params.omega_f() - mu * eps,
        amplitudes: amps,
        ln_prefactor: b.ln(),
    })
}

/// All `N` normal modes. `N = 1` yields the single bound mode `(1)`.
pub fn full_spectrum(params: &ArrayParams) -> Result<ModeTable> {
    params.require_analytic()?;
    let n = params.n_cavities();
    let mut modes = Vec::with_capacity(n);
    modes.push(bound_mode(params)?);
    for m in 1..=(n - 1) / 2 {
        modes.push(band_mode(params, m, Branch::Lower)?);
        modes.push(band_mode(params, m, Branch::Upper)?);
    }
    Ok(ModeTable {
        params: *params,
        modes,
    })
}

/// Band gap read off the finite spectrum, next to its thermodynamic-limit
/// lower bound `4 kappa |eta|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    /// `min(upper band) - max(lower band)`; the midgap bound level is excluded.
    pub width: f64,
    pub thermo_bound: f64,
}

pub fn gap(params: &ArrayParams) -> Result<Gap> {
    params.require_analytic()?;
    if params.n_cavities() < 3 {
        return Err(Error::InvalidParams(
            "a gap needs N >= 3; N = 1 has no bands".into(),
        ));
    }
    let table = full_spectrum(params)?;
    let mut lower_max = f64::NEG_INFINITY;
    let mut upper_min = f64::INFINITY;
    for mode in table.band_modes() {
        match mode.label {
            ModeLabel::Band {
                branch: Branch::Lower,
                ..
            } => lower_max = lower_max.max(mode.frequency),
            ModeLabel::Band {
                branch: Branch::Upper,
                ..
            } => upper_min = upper_min.min(mode.frequency),
            ModeLabel::Bound => {}
        }
    }
    Ok(Gap {
        width: upper_min - lower_max,
        thermo_bound: 4.0 * params.kappa() * params.eta().abs(),
    })
}

/// Spatial extent of the bound mode, `|1 / ln((1 + eta) / (1 - eta))|`.
/// Infinite at `eta = 0`.
pub fn localization_length(eta: f64) -> Result<f64> {
    if eta.is_nan() || eta.abs() >= 1.0 {
        return Err(Error::Domain { eta });
    }
    if eta == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((1.0 / ((1.0 + eta) / (1.0 - eta)).ln()).abs())
}
