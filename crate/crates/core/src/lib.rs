//! Single-excitation dynamics of coupled-cavity arrays with staggered
//! photon hopping.
//!
//! An array of `N` (odd) cavities, each holding one field mode coupled to a
//! two-level atom, with hopping rates alternating between `(1 + eta) kappa`
//! and `(1 - eta) kappa`. The crate provides
//!
//! * [`spectral`]: closed-form photonic normal modes (a midgap bound mode and
//!   two bands), band gap and bound-mode localization length;
//! * [`oracle`]: dense site-basis Hamiltonians and exact propagation, used as
//!   ground truth;
//! * [`effective`]: the reduced bound-pair Jaynes-Cummings dynamics and its
//!   closed-form site amplitudes;
//! * [`identities`]: numerical residuals of the identities the closed forms
//!   rest on.
//!
//! The basis of the one-excitation sector is ordered photons first
//! (cavities `1..=N`), atoms second.

pub mod effective;
pub mod error;
pub mod identities;
pub mod oracle;
pub mod params;
pub mod spectral;
pub mod state;
pub mod trace;

pub use effective::{
    amplitudes_closed_form, dressed_coefficients, evolve_effective, freezing_check,
    probabilities_resonant, rabi, regime_validity, DressedPair, EffectiveModel, RegimeCheck,
};
pub use error::{Error, Result};
pub use identities::{ResidualEntry, ResidualReport};
pub use oracle::{
    build_full_matrix, build_hopping_matrix, evolve_exact, exact_trace, reconstruct_from_modes,
    ExactPropagator, HamiltonianMatrix, MatrixKind, StaggeredCouplings,
};
pub use params::ArrayParams;
pub use spectral::{
    band_mode, bound_mode, epsilon_k, full_spectrum, gap, localization_length, mode_wavevectors,
    tau, theta_k, Branch, Gap, ModeLabel, ModeTable, NormalMode,
};
pub use state::{Excitation, SingleExcitationState};
pub use trace::{linspace, total_probabilities, EvolutionTrace};
