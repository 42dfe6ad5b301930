//! Ground states by VQE, excited states by quantum subspace expansion, and
//! absorption spectra.

mod qse;
mod spectrum;
mod vqe;

pub use qse::{
    complete_expansion, default_expansion, qse_solve, solve_generalized, transition_dipoles, QseEstimator, QseResult,
    DEFAULT_S_THRESHOLD, DEGENERACY_TOLERANCE,
};
pub use spectrum::{
    broaden, curve_csv, merge_degenerate, oscillator_strengths, peaks, sticks_csv, Grid, SpectrumPoint,
};
pub use vqe::{circuit_energy, parameter_shift_gradient, vqe_optimize, VqeConfig, VqeResult};
