//! Hand-derived values the library must reproduce.

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use cavity_array::identities::{uniform_limit_check, verify_default_grid};
use cavity_array::*;

fn fig3(kappa: f64) -> ArrayParams {
    ArrayParams::new(101, -0.25, kappa, 1000.0, 0.0, 1.0).unwrap()
}

#[test]
fn three_site_spectrum_by_hand() {
    // off-diagonals -1.5, -0.5: eigenvalues 0, +-sqrt(2.5)
    let p = ArrayParams::photonic(3, 0.5, 1.0, 0.0).unwrap();
    let t = full_spectrum(&p).unwrap();
    let mut w = t.frequencies();
    w.sort_by(f64::total_cmp);
    assert_abs_diff_eq!(w[0], -1.5811388300841898, epsilon = 1e-14);
    assert_abs_diff_eq!(w[1], 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(w[2], 1.5811388300841898, epsilon = 1e-14);
    // tau = -3: (1, 0, -3) / sqrt(10)
    let b = &t.bound().amplitudes;
    assert_abs_diff_eq!(b[0], 1.0 / 10f64.sqrt(), epsilon = 1e-15);
    assert_eq!(b[1], 0.0);
    assert_abs_diff_eq!(b[2], -3.0 / 10f64.sqrt(), epsilon = 1e-15);
}

#[test]
fn script_n_at_figure_parameters() {
    // tau = -0.6, N = 101: 1 / sum_{j<=50} 0.36^j = 0.64 up to 0.36^51
    let m = EffectiveModel::new(&fig3(100.0)).unwrap();
    assert_abs_diff_eq!(m.n_script(), 0.64, epsilon = 1e-12);
    let site1 = m.modes().bound().amplitudes[0];
    assert_abs_diff_eq!(m.n_script(), site1 * site1, epsilon = 1e-12);
}

#[test]
fn resonant_landmarks_at_figure_parameters() {
    let m = EffectiveModel::new(&fig3(100.0)).unwrap();
    let omega = m.rabi_omega();
    assert_eq!(omega, 2.0);
    // field peak N^2 at pi/Omega, exciton (1 - 2N)^2 at 2 pi/Omega
    let (pf, _) = probabilities_resonant(&m, 1, 1, PI / omega).unwrap();
    assert_abs_diff_eq!(pf, 0.4096, epsilon = 1e-12);
    let (pf, pa) = probabilities_resonant(&m, 1, 1, 2.0 * PI / omega).unwrap();
    assert_abs_diff_eq!(pf, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(pa, 0.0784, epsilon = 1e-12);
    // site 3 picks up N tau = -0.384: (N tau (cos - 1))^2 = 0.589824
    let (_, pa3) = probabilities_resonant(&m, 1, 3, 2.0 * PI / omega).unwrap();
    assert_abs_diff_eq!(pa3, 0.589824, epsilon = 1e-12);
}

#[test]
fn effective_trace_hits_landmarks() {
    let m = EffectiveModel::new(&fig3(100.0)).unwrap();
    let init = SingleExcitationState::atom(101, 1).unwrap();
    let times = [0.0, PI / 2.0, PI, 2.0 * PI];
    let tr = evolve_effective(&m, &init, &times).unwrap();
    assert_abs_diff_eq!(tr.total_field[1], 0.64, epsilon = 1e-12);
    assert_abs_diff_eq!(tr.total_field[2], 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(tr.p_atom[(2, 0)], 0.0784, epsilon = 1e-12);
    let end = m.propagate(&init, 2.0 * PI).unwrap();
    assert_abs_diff_eq!(end.fidelity(&init), 1.0, epsilon = 1e-12);
}

#[test]
fn single_cavity_rabi_cosine() {
    let p = ArrayParams::new(1, 0.0, 1.0, 5.0, 0.0, 0.8).unwrap();
    let init = SingleExcitationState::atom(1, 1).unwrap();
    let times = linspace(10.0, 101);
    let tr = exact_trace(&p, &init, &times).unwrap();
    for (i, t) in times.iter().enumerate() {
        assert_abs_diff_eq!(tr.p_atom[(i, 0)], (0.8 * t).cos().powi(2), epsilon = 1e-10);
    }
}

#[test]
fn exact_spectrum_of_single_cavity_matches_dressed_energies() {
    let p = ArrayParams::new(1, 0.0, 1.0, 4.0, 1.5, 0.5).unwrap();
    let d = dressed_coefficients(0.5, 1.5).unwrap();
    let (hi, lo) = d.energies(4.0);
    let w = build_full_matrix(&p).eigenvalues();
    assert_abs_diff_eq!(w[0], lo, epsilon = 1e-12);
    assert_abs_diff_eq!(w[1], hi, epsilon = 1e-12);
}

#[test]
fn frozen_even_site_under_effective_dynamics() {
    let m = EffectiveModel::new(&fig3(100.0)).unwrap();
    let times = linspace(2.0 * PI, 201);
    assert_eq!(freezing_check(&m, 2, &times).unwrap(), 0.0);
    assert!(freezing_check(&m, 3, &times).is_err());
}

#[test]
fn decoupled_traces_are_constant() {
    let p = ArrayParams::new(9, 0.3, 1.0, 0.0, 0.0, 0.0).unwrap();
    let init = SingleExcitationState::atom(9, 4).unwrap();
    let tr = exact_trace(&p, &init, &linspace(20.0, 41)).unwrap();
    assert!(tr.max_deviation_from_initial() <= 1e-15);
}

#[test]
fn uniform_limit_for_all_grid_lengths() {
    for n in [1, 3, 5, 15, 51, 101] {
        assert!(uniform_limit_check(n).unwrap() <= 1e-10, "N = {n}");
    }
}

#[test]
fn default_identity_grid_passes() {
    let report = verify_default_grid().unwrap();
    let bad: Vec<_> = report.failures().collect();
    assert!(bad.is_empty(), "{bad:#?}");
    assert!(report.entries.len() > 6 * 9 * 10);
}

#[test]
fn spectral_frequencies_match_dense_eigensolve() {
    for n in [1, 3, 5, 15, 51, 101] {
        for eta in [0.0, 0.05, -0.05, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9] {
            let p = ArrayParams::photonic(n, eta, 1.3, 0.7).unwrap();
            let mut w = full_spectrum(&p).unwrap().frequencies();
            w.sort_by(f64::total_cmp);
            let dense = build_hopping_matrix(&p).eigenvalues();
            for (a, b) in w.iter().zip(&dense) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn gap_shrinks_toward_thermodynamic_bound() {
    let mut prev = f64::INFINITY;
    for n in [3, 5, 15, 51, 101, 301] {
        let g = gap(&ArrayParams::photonic(n, 0.5, 1.0, 0.0).unwrap()).unwrap();
        assert!(g.width >= g.thermo_bound);
        assert!(g.width < prev);
        prev = g.width;
    }
    assert!(prev - 2.0 < 1e-3);
}

#[test]
fn bound_profile_shape_is_independent_of_length() {
    let short = bound_mode(&ArrayParams::photonic(21, -0.2, 1.0, 0.0).unwrap()).unwrap();
    let long = bound_mode(&ArrayParams::photonic(51, -0.2, 1.0, 0.0).unwrap()).unwrap();
    let ratio = |a: &[f64], x: usize| a[x] / a[0];
    for x in (0..21).step_by(2) {
        assert_abs_diff_eq!(
            ratio(&short.amplitudes, x),
            ratio(&long.amplitudes, x),
            epsilon = 1e-12
        );
    }
}
