//! Chemically aware unitary coupled cluster circuit synthesis, statevector
//! simulation, symmetry-verified energy estimation and subspace-expansion
//! spectra.
//!
//! Conventions used throughout:
//! - qubits are little-endian: qubit 0 is the least significant bit of a
//!   basis-state index and the rightmost character of a printed bitstring;
//! - spin orbitals are alpha-beta interleaved, spatial orbital `p` owning
//!   qubits `2p` and `2p + 1`;
//! - `Rz(θ) = exp(−iθZ/2)`;
//! - energies are in hartree, dipoles in atomic units.

pub mod circuit;
pub mod clifford;
pub mod error;
pub mod estimation;
pub mod experiment;
pub mod fermion;
pub mod model;
pub mod oracle;
pub mod par;
pub mod pauli;
pub mod sim;
pub mod spectra;
pub mod symmetry;
pub mod synthesis;

pub use error::{Error, Result};
