//! Pauli strings, weighted Pauli sums and their dense realization.

mod dense;
mod operator;
mod string;
mod text;

pub use dense::{to_dense, MAX_DENSE_QUBITS};
pub use operator::{pauli_expectation, QubitOperator, PRUNE_THRESHOLD};
pub use string::{commutes, i_pow, multiply, Pauli, PauliString, PauliTerm, MAX_QUBITS};
pub use text::{format_complex, format_term, parse_complex, parse_term};
