//! Numerical residuals of the trigonometric, orthonormality and
//! diagonalization identities behind the closed-form normal modes.
//!
//! Residuals are max-norms. Tolerances come in three tiers: pure
//! trigonometric sums, identities that divide by `eps_k` (which can be as
//! small as `2 kappa |eta|`), and full matrix reconstructions.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::oracle::{
    build_full_matrix, build_hopping_matrix, reconstruct_from_modes, StaggeredCouplings,
};
use crate::params::ArrayParams;
use crate::spectral::{
    epsilon_k, full_spectrum, mode_wavevectors, tau, theta_k, theta_phasor, ModeLabel, ModeTable,
};

pub const TOL_TRIG: f64 = 1e-12;
pub const TOL_EPS_DIVISION: f64 = 1e-11;
pub const TOL_MATRIX: f64 = 1e-10;

/// Array lengths of the default verification grid.
pub const GRID_N: [usize; 6] = [1, 3, 5, 15, 51, 101];
/// Staggerings of the default verification grid.
pub const GRID_ETA: [f64; 9] = [0.0, 0.05, -0.05, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub identity: String,
    pub params: ArrayParams,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn push(&mut self, identity: &str, params: &ArrayParams, residual: f64, tolerance: f64) {
        self.entries.push(ResidualEntry {
            identity: identity.to_string(),
            params: *params,
            residual,
            tolerance,
            // NaN residuals fail
            pass: residual <= tolerance,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn extend(&mut self, other: ResidualReport) {
        self.entries.extend(other.entries);
    }
}

/// `max_x |sin(kx + theta_k) - kappa(1-eta)/eps_k [sin(k(x-1)) - tau sin(kx)]|`
/// over `x = 1..=(N+1)/2`.
pub fn residual_trig_shift(kappa: f64, eta: f64, k: f64, n_cavities: usize) -> Result<f64> {
    let t = tau(eta)?;
    let th = theta_k(kappa, eta, k)?;
    let scale = kappa * (1.0 - eta) / epsilon_k(kappa, eta, k);
    Ok((1..=n_cavities.div_ceil(2))
        .map(|x| {
            let x = x as f64;
            let lhs = (k * x + th).sin();
            let rhs = scale * ((k * (x - 1.0)).sin() - t * (k * x).sin());
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max))
}

/// Residuals of the two sine-sum identities on the wavevector grid: the
/// orthogonality sum (checked for both upper limits `(N +- 1)/2`) and the
/// shifted cross sum equal to `(N+1)/2 cos k delta_kk'`.
pub fn residual_sine_sums(n_cavities: usize, k: f64, k_prime: f64) -> (f64, f64) {
    let same = (k - k_prime).abs() < 1e-12;
    let np1 = (n_cavities + 1) as f64;
    let sum_sin = |upper: usize| -> f64 {
        (1..=upper)
            .map(|x| (k * x as f64).sin() * (k_prime * x as f64).sin())
            .sum()
    };
    let target1 = if same { np1 / 4.0 } else { 0.0 };
    let r1 = (sum_sin(n_cavities.div_ceil(2)) - target1)
        .abs()
        .max((sum_sin((n_cavities - 1) / 2) - target1).abs());

    let cross: f64 = (1..=n_cavities.div_ceil(2))
        .map(|x| {
            let x = x as f64;
            (k * (x - 1.0)).sin() * (k_prime * x).sin()
                + (k_prime * (x - 1.0)).sin() * (k * x).sin()
        })
        .sum();
    let target2 = if same { np1 / 2.0 * k.cos() } else { 0.0 };
    (r1, (cross - target2).abs())
}

/// `max |G - 1|` for the Gram matrix of the mode amplitudes.
pub fn residual_orthonormality(modes: &ModeTable) -> f64 {
    let phi = modes.amplitude_matrix();
    let gram = phi.transpose() * &phi;
    let mut worst: f64 = 0.0;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

/// Residuals of the free-field diagonalization identities:
///
/// * `g`: `max_{k mu} |sum_x rho_x g_{k mu, x}|` with
///   `g_{k mu, x} = phi_l(x+1) phi_{k mu}(x) + phi_l(x) phi_{k mu}(x+1)`;
/// * `f`: `max |sum_x rho_x f^{k' mu'}_{k mu, x} + mu eps_k delta delta|` with
///   `f = phi_{k mu}(x+1) phi_{k' mu'}(x) + phi_{k mu}(x) phi_{k' mu'}(x+1)`.
pub fn residual_diagonalization(params: &ArrayParams, modes: &ModeTable) -> (f64, f64) {
    let rho = StaggeredCouplings::new(params).rho;
    let bond_sum = |a: &[f64], b: &[f64]| -> f64 {
        rho.iter()
            .enumerate()
            .map(|(x, r)| r * (a[x + 1] * b[x] + a[x] * b[x + 1]))
            .sum()
    };
    let bound = &modes.bound().amplitudes;
    let bands = modes.band_modes();

    let g = bands
        .iter()
        .map(|m| bond_sum(bound, &m.amplitudes).abs())
        .fold(0.0, f64::max);

    let mut f: f64 = 0.0;
    for (i, a) in bands.iter().enumerate() {
        for (j, b) in bands.iter().enumerate() {
            let target = match (a.label, i == j) {
                (ModeLabel::Band { branch, .. }, true) => -branch.mu() * a.epsilon.unwrap_or(0.0),
                _ => 0.0,
            };
            f = f.max((bond_sum(&a.amplitudes, &b.amplitudes) - target).abs());
        }
    }
    (g, f)
}

/// `1 + tau^2 - 2 tau cos k = eps_k^2 / (kappa^2 (1 - eta)^2)` and
/// `|e^{i theta_k}| = 1`, maximized over the grid.
pub fn residual_tau_epsilon(kappa: f64, eta: f64, n_cavities: usize) -> Result<(f64, f64)> {
    let t = tau(eta)?;
    let mut rel: f64 = 0.0;
    let mut modulus: f64 = 0.0;
    for k in mode_wavevectors(n_cavities)? {
        let lhs = 1.0 + t * t - 2.0 * t * k.cos();
        let eps = epsilon_k(kappa, eta, k);
        let rhs = eps * eps / (kappa * kappa * (1.0 - eta).powi(2));
        rel = rel.max((lhs - rhs).abs() / rhs.max(1.0));
        modulus = modulus.max((theta_phasor(kappa, eta, k)?.norm() - 1.0).abs());
    }
    Ok((rel, modulus))
}

/// Uniform-hopping modes `sqrt(2/(N+1)) sin(pi m x / (N+1))`, `m = 1..=N`,
/// each with its eigenfrequency `omega_f - 2 kappa cos(pi m / (N+1))`.
pub fn uniform_modes(n_cavities: usize, kappa: f64, omega_f: f64) -> Vec<(f64, Vec<f64>)> {
    let np1 = (n_cavities + 1) as f64;
    let b = (2.0 / np1).sqrt();
    (1..=n_cavities)
        .map(|m| {
            let q = PI * m as f64 / np1;
            let amps = (1..=n_cavities).map(|x| b * (q * x as f64).sin()).collect();
            (omega_f - 2.0 * kappa * q.cos(), amps)
        })
        .collect()
}

fn sign_aligned_diff(a: &[f64], b: &[f64]) -> f64 {
    let plus = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let minus = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x + y).abs())
        .fold(0.0, f64::max);
    plus.min(minus)
}

/// Largest deviation between the `eta = 0` mode table and the uniform-hopping
/// modes (amplitudes after per-mode sign alignment, and frequencies).
///
/// Band `(m, +1)` pairs with uniform mode `m`, band `(m, -1)` with
/// `N + 1 - m`, and the bound mode with `(N + 1) / 2`. The bound mode is also
/// compared at `eta = +-1e-13` to exercise the general construction.
pub fn uniform_limit_check(n_cavities: usize) -> Result<f64> {
    let (kappa, omega_f) = (1.0, 0.0);
    let params = ArrayParams::photonic(n_cavities, 0.0, kappa, omega_f)?;
    let table = full_spectrum(&params)?;
    let uniform = uniform_modes(n_cavities, kappa, omega_f);
    let mut worst: f64 = 0.0;
    for mode in table.modes() {
        let idx = match mode.label {
            ModeLabel::Bound => n_cavities.div_ceil(2),
            ModeLabel::Band { m, branch } => match branch.mu_i32() {
                1 => m,
                _ => n_cavities + 1 - m,
            },
        };
        let (w, amps) = &uniform[idx - 1];
        worst = worst.max(sign_aligned_diff(&mode.amplitudes, amps));
        worst = worst.max((mode.frequency - w).abs());
    }
    for eta in [1e-13, -1e-13] {
        let near = full_spectrum(&params.with_eta(eta)?)?;
        let (_, amps) = &uniform[n_cavities.div_ceil(2) - 1];
        worst = worst.max(sign_aligned_diff(&near.bound().amplitudes, amps));
    }
    Ok(worst)
}

/// Every identity at one parameter point.
pub fn verify_point(params: &ArrayParams) -> Result<ResidualReport> {
    verify_table(params, &full_spectrum(params)?)
}

/// Every identity at one parameter point, against a caller-supplied mode
/// table (which may be deliberately corrupted).
pub fn verify_table(params: &ArrayParams, table: &ModeTable) -> Result<ResidualReport> {
    params.require_analytic()?;
    let n = params.n_cavities();
    let (kappa, eta) = (params.kappa(), params.eta());
    let ks = mode_wavevectors(n)?;
    let mut report = ResidualReport::default();

    let mut trig: f64 = 0.0;
    for &k in &ks {
        trig = trig.max(residual_trig_shift(kappa, eta, k, n)?);
    }
    report.push("trig_shift", params, trig, TOL_TRIG);

    let (mut s1, mut s2): (f64, f64) = (0.0, 0.0);
    for &k in &ks {
        for &kp in &ks {
            let (a, b) = residual_sine_sums(n, k, kp);
            s1 = s1.max(a);
            s2 = s2.max(b);
        }
    }
    report.push("sine_sum_orthogonality", params, s1, TOL_TRIG);
    report.push("sine_sum_shifted", params, s2, TOL_TRIG);

    let (tau_eps, modulus) = residual_tau_epsilon(kappa, eta, n)?;
    report.push("tau_epsilon_identity", params, tau_eps, TOL_EPS_DIVISION);
    report.push("theta_unit_modulus", params, modulus, TOL_TRIG);

    report.push(
        "orthonormality",
        params,
        residual_orthonormality(table),
        TOL_TRIG,
    );

    let (g, f) = residual_diagonalization(params, table);
    report.push("diagonalization_g", params, g, TOL_EPS_DIVISION);
    report.push("diagonalization_f", params, f, TOL_EPS_DIVISION);

    let hf = build_hopping_matrix(params);
    let eigen = table
        .modes()
        .iter()
        .map(|m| {
            (0..n)
                .map(|x| {
                    let hphi: f64 = (0..n).map(|y| hf.entries[(x, y)] * m.amplitudes[y]).sum();
                    (hphi - m.frequency * m.amplitudes[x]).abs()
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    report.push("eigen_consistency", params, eigen, TOL_MATRIX);

    let rebuilt = reconstruct_from_modes(table, params)?;
    let full = build_full_matrix(params);
    report.push(
        "full_reconstruction",
        params,
        rebuilt.max_abs_diff(&full),
        TOL_MATRIX,
    );
    let photon_block = (rebuilt.entries.view((0, 0), (n, n)) - &hf.entries).amax();
    report.push(
        "photon_block_reconstruction",
        params,
        photon_block,
        TOL_MATRIX,
    );

    Ok(report)
}

/// The default grid: `N in {1,3,5,15,51,101}`, `eta in {0, +-0.05, +-0.25,
/// +-0.5, +-0.9}`, plus the uniform-limit checks for each `N`.
///
/// `kappa = 1`, `omega_f = 0`, `delta = 0`, `J = 0.1`.
pub fn verify_default_grid() -> Result<ResidualReport> {
    let mut report = ResidualReport::default();
    for &n in &GRID_N {
        for &eta in &GRID_ETA {
            let p = ArrayParams::new(n, eta, 1.0, 0.0, 0.0, 0.1)?;
            report.extend(verify_point(&p)?);
        }
        let p = ArrayParams::new(n, 0.0, 1.0, 0.0, 0.0, 0.1)?;
        report.push("uniform_limit", &p, uniform_limit_check(n)?, TOL_MATRIX);
    }
    Ok(report)
}
