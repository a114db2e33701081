//! Brute-force reference: dense Hamiltonian matrices in the site basis and
//! propagation through a full symmetric eigendecomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ArrayParams;
use crate::spectral::ModeTable;
use crate::state::SingleExcitationState;
use crate::trace::EvolutionTrace;

/// Norm drift beyond this signals a broken eigendecomposition.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// Bond couplings `rho_x = -kappa [1 - (-1)^x eta]`, `x = 1..N-1`, stored at
/// index `x - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StaggeredCouplings {
    pub rho: Vec<f64>,
}

impl StaggeredCouplings {
    pub fn new(params: &ArrayParams) -> Self {
        let (kappa, eta) = (params.kappa(), params.eta());
        let rho = (1..params.n_cavities())
            .map(|x| {
                let parity = if x % 2 == 0 { 1.0 } else { -1.0 };
                -kappa * (1.0 - parity * eta)
            })
            .collect();
        Self { rho }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// `N x N` free-photon hopping block.
    Photonic,
    /// `2N x 2N` photons-then-atoms single-excitation Hamiltonian.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    pub kind: MatrixKind,
    pub n_cavities: usize,
    pub entries: DMatrix<f64>,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Sorted eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut w: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        w.sort_by(f64::total_cmp);
        w
    }

    /// `max |H_ij - H'_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.entries - &other.entries).amax()
    }

    /// `<psi|H|psi>`, real for symmetric `H`.
    pub fn expectation(&self, state: &SingleExcitationState) -> f64 {
        let psi = state.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, pi) in psi.iter().enumerate() {
            let row: Complex64 = psi
                .iter()
                .enumerate()
                .map(|(j, pj)| pj * self.entries[(i, j)])
                .sum();
            acc += pi.conj() * row;
        }
        acc.re
    }
}

pub fn build_hopping_matrix(params: &ArrayParams) -> HamiltonianMatrix {
    let n = params.n_cavities();
    let rho = StaggeredCouplings::new(params).rho;
    let mut h = DMatrix::from_diagonal_element(n, n, params.omega_f());
    for (x, r) in rho.into_iter().enumerate() {
        h[(x, x + 1)] = r;
        h[(x + 1, x)] = r;
    }
    HamiltonianMatrix {
        kind: MatrixKind::Photonic,
        n_cavities: n,
        entries: h,
    }
}

/// `[[H_f, J 1], [J 1, omega_a 1]]` in the photons-then-atoms basis.
pub fn build_full_matrix(params: &ArrayParams) -> HamiltonianMatrix {
    let n = params.n_cavities();
    let hf = build_hopping_matrix(params).entries;
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&hf);
    for x in 0..n {
        h[(n + x, n + x)] = params.omega_a();
        h[(x, n + x)] = params.coupling_j();
        h[(n + x, x)] = params.coupling_j();
    }
    HamiltonianMatrix {
        kind: MatrixKind::Full,
        n_cavities: n,
        entries: h,
    }
}

/// Reassembles the full Hamiltonian from normal modes: each mode contributes
/// `omega |phi><phi|` on the photon block, `omega_a |phi><phi|` on the atom
/// block and `J |phi><phi|` on both coupling blocks.
pub fn reconstruct_from_modes(
    modes: &ModeTable,
    params: &ArrayParams,
) -> Result<HamiltonianMatrix> {
    params.require_analytic()?;
    let n = params.n_cavities();
    if modes.params().n_cavities() != n {
        return Err(Error::InvalidParams(format!(
            "mode table is for N = {}, parameters say N = {n}",
            modes.params().n_cavities()
        )));
    }
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    for mode in modes.modes() {
        let phi = DVector::from_column_slice(&mode.amplitudes);
        let proj = &phi * phi.transpose();
        let mut block = h.view_mut((0, 0), (n, n));
        block += &proj * mode.frequency;
        let mut block = h.view_mut((n, n), (n, n));
        block += &proj * params.omega_a();
        let mut block = h.view_mut((0, n), (n, n));
        block += &proj * params.coupling_j();
        let mut block = h.view_mut((n, 0), (n, n));
        block += &proj * params.coupling_j();
    }
    Ok(HamiltonianMatrix {
        kind: MatrixKind::Full,
        n_cavities: n,
        entries: h,
    })
}

/// `exp(-i H t)` for a fixed `H`, diagonalized once and reused at every time.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    n_cavities: usize,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl ExactPropagator {
    pub fn new(h: &HamiltonianMatrix) -> Result<Self> {
        if h.kind != MatrixKind::Full {
            return Err(Error::InvalidParams(
                "exact propagation needs the full 2N x 2N Hamiltonian".into(),
            ));
        }
        let n = h.n_cavities;
        let decoupled = h.entries.view((0, n), (n, n)).iter().all(|v| *v == 0.0)
            && h.entries.view((n, 0), (n, n)).iter().all(|v| *v == 0.0);
        let (eigenvalues, vectors) = if decoupled {
            // keeps photon and atom sectors exactly separate; a joint solve
            // may rotate within degenerate cross-sector eigenspaces
            let photon = SymmetricEigen::new(h.entries.view((0, 0), (n, n)).into_owned());
            let atom = SymmetricEigen::new(h.entries.view((n, n), (n, n)).into_owned());
            let mut v = DMatrix::zeros(2 * n, 2 * n);
            v.view_mut((0, 0), (n, n)).copy_from(&photon.eigenvectors);
            v.view_mut((n, n), (n, n)).copy_from(&atom.eigenvectors);
            let w = photon
                .eigenvalues
                .iter()
                .chain(atom.eigenvalues.iter())
                .copied()
                .collect();
            (w, v)
        } else {
            let eig = SymmetricEigen::new(h.entries.clone());
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        };
        Ok(Self {
            n_cavities: n,
            eigenvalues,
            eigenvectors: vectors.map(|v| Complex64::new(v, 0.0)),
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Propagates `initial` to every time in `times`.
    pub fn evolve(
        &self,
        initial: &SingleExcitationState,
        times: &[f64],
    ) -> Result<Vec<SingleExcitationState>> {
        if initial.n_cavities() != self.n_cavities {
            return Err(Error::Dimension {
                got: initial.amplitudes().len(),
                expected: 2 * self.n_cavities,
            });
        }
        initial.check_normalized()?;
        if let Some(&t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::BadTime(t));
        }
        let psi0 = DVector::from_column_slice(initial.amplitudes());
        let coeffs = self.eigenvectors.tr_mul(&psi0);
        let norm0 = initial.norm();
        times
            .iter()
            .map(|&t| {
                if t == 0.0 {
                    return Ok(initial.clone());
                }
                let rotated = DVector::from_iterator(
                    coeffs.len(),
                    coeffs
                        .iter()
                        .zip(&self.eigenvalues)
                        .map(|(c, w)| c * Complex64::from_polar(1.0, -w * t)),
                );
                let psi = &self.eigenvectors * rotated;
                let state = SingleExcitationState::from_amplitudes_unchecked(
                    psi.iter().copied().collect(),
                )?;
                let drift = (state.norm() - norm0).abs();
                if drift > NORM_DRIFT_LIMIT {
                    return Err(Error::NormDrift { drift });
                }
                Ok(state)
            })
            .collect()
    }
}

/// `psi(t) = exp(-i H t) psi(0)` at each requested time.
pub fn evolve_exact(
    h: &HamiltonianMatrix,
    initial: &SingleExcitationState,
    times: &[f64],
) -> Result<Vec<SingleExcitationState>> {
    ExactPropagator::new(h)?.evolve(initial, times)
}

/// Exact per-site probability trace for `initial` under the full Hamiltonian.
pub fn exact_trace(
    params: &ArrayParams,
    initial: &SingleExcitationState,
    times: &[f64],
) -> Result<EvolutionTrace> {
    let states = evolve_exact(&build_full_matrix(params), initial, times)?;
    Ok(EvolutionTrace::from_states(times, &states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hopping_three_sites() {
        let p = ArrayParams::photonic(3, 0.5, 1.0, 0.0).unwrap();
        let h = build_hopping_matrix(&p);
        assert_eq!(h.entries[(0, 1)], -1.5);
        assert_eq!(h.entries[(1, 2)], -0.5);
        assert_eq!(h.entries[(0, 2)], 0.0);
        assert_eq!(h.entries, h.entries.transpose());
        let w = h.eigenvalues();
        // +-sqrt(1.5^2 + 0.5^2) = +-sqrt(2.5)
        assert_abs_diff_eq!(w[0], -2.5f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(w[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w[2], 2.5f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn couplings_alternate() {
        let p = ArrayParams::photonic(5, 0.2, 2.0, 0.0).unwrap();
        let c = StaggeredCouplings::new(&p);
        assert_eq!(c.rho.len(), 4);
        assert_abs_diff_eq!(c.rho[0], -2.4, epsilon = 1e-15);
        assert_abs_diff_eq!(c.rho[1], -1.6, epsilon = 1e-15);
        assert_abs_diff_eq!(c.rho[2], -2.4, epsilon = 1e-15);
        let uniform = StaggeredCouplings::new(&p.with_eta(0.0).unwrap());
        assert!(uniform.rho.iter().all(|r| *r == -2.0));
    }

    #[test]
    fn full_matrix_blocks() {
        let p = ArrayParams::new(3, 0.1, 1.0, 5.0, 0.5, 0.3).unwrap();
        let h = build_full_matrix(&p);
        assert_eq!(h.dim(), 6);
        assert_eq!(h.entries[(3, 3)], 4.5);
        assert_eq!(h.entries[(1, 4)], 0.3);
        assert_eq!(h.entries[(4, 1)], 0.3);
        assert_eq!(h.entries[(0, 4)], 0.0);
        assert_eq!(h.entries, h.entries.transpose());
    }

    #[test]
    fn single_cavity_resonant_doublet() {
        let p = ArrayParams::new(1, 0.0, 1.0, 3.0, 0.0, 0.7).unwrap();
        let w = build_full_matrix(&p).eigenvalues();
        assert_abs_diff_eq!(w[0], 2.3, epsilon = 1e-14);
        assert_abs_diff_eq!(w[1], 3.7, epsilon = 1e-14);
    }

    #[test]
    fn zero_time_is_identity() {
        let p = ArrayParams::new(5, 0.3, 1.0, 2.0, 0.0, 0.4).unwrap();
        let init = SingleExcitationState::atom(5, 3).unwrap();
        let out = evolve_exact(&build_full_matrix(&p), &init, &[0.0]).unwrap();
        assert_eq!(out[0], init);
    }

    #[test]
    fn decoupled_photon_never_reaches_atoms() {
        let p = ArrayParams::new(7, -0.3, 1.0, 2.0, 0.0, 0.0).unwrap();
        let init = SingleExcitationState::photon(7, 3).unwrap();
        let times: Vec<f64> = (0..20).map(|i| 0.37 * i as f64).collect();
        for s in evolve_exact(&build_full_matrix(&p), &init, &times).unwrap() {
            assert!(s
                .atom_amplitudes()
                .iter()
                .all(|a| a.re == 0.0 && a.im == 0.0));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = ArrayParams::new(3, 0.3, 1.0, 2.0, 0.0, 0.4).unwrap();
        let h = build_full_matrix(&p);
        let init = SingleExcitationState::atom(3, 1).unwrap();
        assert!(matches!(
            evolve_exact(&h, &init, &[f64::NAN]),
            Err(Error::BadTime(_))
        ));
        assert!(matches!(
            evolve_exact(&h, &init, &[-1.0]),
            Err(Error::BadTime(_))
        ));
        assert!(evolve_exact(&build_hopping_matrix(&p), &init, &[1.0]).is_err());
        let wrong = SingleExcitationState::atom(5, 1).unwrap();
        assert!(evolve_exact(&h, &wrong, &[1.0]).is_err());
    }
}
