use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::QubitOperator;
use crate::error::{Error, Result};

/// Policy cap for dense realizations.
pub const MAX_DENSE_QUBITS: usize = 14;

/// Dense `2^n × 2^n` matrix of `op`, little-endian (qubit 0 is the least
/// significant bit of the row/column index). Intended for reference checks.
pub fn to_dense(op: &QubitOperator, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { requested: n_qubits, max: MAX_DENSE_QUBITS });
    }
    if let Some(q) = op.max_qubit() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
    }
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::zeros(dim, dim);
    for t in op.terms() {
        for col in 0..dim {
            let (phase, row) = t.string.apply_to_basis(col as u64);
            m[(row as usize, col)] += t.coeff * phase;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Pauli, PauliTerm};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_qubit_matrices() {
        let z = to_dense(&PauliTerm::real(1.0, &[(0, Pauli::Z)]).into(), 1).unwrap();
        assert_eq!(z, DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]));
        let x = to_dense(&PauliTerm::real(1.0, &[(0, Pauli::X)]).into(), 1).unwrap();
        assert_eq!(x, DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
        let y = to_dense(&PauliTerm::real(1.0, &[(0, Pauli::Y)]).into(), 1).unwrap();
        assert_eq!(y[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn index_checks() {
        let op: QubitOperator = PauliTerm::real(1.0, &[(3, Pauli::X)]).into();
        assert!(matches!(to_dense(&op, 2), Err(Error::QubitOutOfRange { .. })));
        assert!(matches!(to_dense(&op, 15), Err(Error::TooManyQubits { .. })));
    }
}
