//! Dense statevector simulation with shot sampling and trajectories.

mod sample;
mod state;

pub use sample::{
    exact_distribution, run_trajectory, run_trajectory_from, run_with_midcircuit, sample, sample_shots, shot_rng,
    NoiseSpec, SampleConfig, ShotTable,
};
pub use state::{run_statevector, run_statevector_with, StateVector, MAX_SIM_QUBITS};
