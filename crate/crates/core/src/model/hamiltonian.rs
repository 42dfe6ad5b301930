use nalgebra::DMatrix;
use num_complex::Complex64;

use super::MolecularModel;
use crate::error::{Error, Result};
use crate::fermion::{jw_ladder, Ladder};
use crate::pauli::QubitOperator;

const ZERO_INTEGRAL: f64 = 1e-15;

fn ladder_cache(n: usize) -> (Vec<QubitOperator>, Vec<QubitOperator>) {
    let create = (0..n).map(|i| jw_ladder(Ladder::create(i))).collect();
    let annihilate = (0..n).map(|i| jw_ladder(Ladder::annihilate(i))).collect();
    (create, annihilate)
}

/// Spin-summed one-body operator `Σ_pq m_pq Σ_σ a†_pσ a_qσ`.
pub fn one_body_operator(m: &DMatrix<f64>, n_spin_orbitals: usize) -> Result<QubitOperator> {
    let n = n_spin_orbitals / 2;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::InvalidModel(format!("one-body matrix is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
    }
    let (cr, an) = ladder_cache(n_spin_orbitals);
    let mut out = QubitOperator::zero();
    for p in 0..n {
        for q in 0..n {
            let v = m[(p, q)];
            if v.abs() < ZERO_INTEGRAL {
                continue;
            }
            for s in 0..2 {
                let term = &cr[2 * p + s] * &an[2 * q + s];
                out += &term.scale(Complex64::new(v, 0.0));
            }
        }
    }
    Ok(out)
}

/// Electronic Hamiltonian
/// `E_core + Σ h_pq a†_pσ a_qσ + ½ Σ (pq|rs) a†_pσ a†_rτ a_sτ a_qσ`
/// under Jordan–Wigner.
pub fn hamiltonian_from_model(model: &MolecularModel) -> Result<QubitOperator> {
    model.validate()?;
    let n = model.n_spatial();
    let ns = model.n_spin_orbitals;
    let (cr, an) = ladder_cache(ns);
    let mut out = QubitOperator::identity(model.core_energy);
    out += &one_body_operator(&model.h, ns)?;

    // a†_P a_Q for all spin-orbital pairs, reused in the two-body sum
    let hops: Vec<QubitOperator> = (0..ns * ns).map(|k| &cr[k / ns] * &an[k % ns]).collect();

    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = model.eri(p, q, r, s);
                    if v.abs() < ZERO_INTEGRAL {
                        continue;
                    }
                    for sig in 0..2 {
                        for tau in 0..2 {
                            let (pp, qq) = (2 * p + sig, 2 * q + sig);
                            let (rr, ss) = (2 * r + tau, 2 * s + tau);
                            if pp == rr || qq == ss {
                                continue;
                            }
                            // a†_P a†_R a_S a_Q = a†_P a_Q a†_R a_S − δ_QR a†_P a_S
                            let mut term = &hops[pp * ns + qq] * &hops[rr * ns + ss];
                            if qq == rr {
                                term = &term - &hops[pp * ns + ss];
                            }
                            out += &term.scale(Complex64::new(0.5 * v, 0.0));
                        }
                    }
                }
            }
        }
    }
    Ok(out.hermitian_part())
}

/// Dipole operator along `axis` (0, 1, 2 for x, y, z) built from the
/// model's dipole integrals.
pub fn dipole_operator(model: &MolecularModel, axis: usize) -> Result<QubitOperator> {
    let d = model.dipoles.as_ref().ok_or(Error::MissingDipoles)?;
    one_body_operator(&d[axis], model.n_spin_orbitals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::toy_model;
    use crate::pauli::to_dense;

    fn basis_energy(op: &QubitOperator, bits: u64, n: usize) -> f64 {
        let mut psi = vec![Complex64::new(0.0, 0.0); 1 << n];
        psi[bits as usize] = Complex64::new(1.0, 0.0);
        op.expectation(&psi).re
    }

    #[test]
    fn reference_expectation_matches_integral_energy() {
        let m = toy_model();
        let h = hamiltonian_from_model(&m).unwrap();
        assert!(h.is_hermitian(1e-14));
        assert!((basis_energy(&h, m.hf_bits(), 4) - m.hf_energy()).abs() < 1e-12);
        for occ in [0b0101u64, 0b1010, 0b0110, 0b1001, 0b1111, 0b0001] {
            let mut m2 = m.clone();
            m2.hf_occupation = (0..4).map(|i| occ >> i & 1 == 1).collect();
            assert!((basis_energy(&h, occ, 4) - m2.hf_energy()).abs() < 1e-12, "occ {occ:b}");
        }
    }

    #[test]
    fn one_electron_limit() {
        let mut m = toy_model();
        m.g.iter_mut().for_each(|v| *v = 0.0);
        let h = hamiltonian_from_model(&m).unwrap();
        assert!((basis_energy(&h, 0b01, 4) - (-1.25 + 0.71)).abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_commutes_with_number() {
        let m = toy_model();
        let h = to_dense(&hamiltonian_from_model(&m).unwrap(), 4).unwrap();
        let n_op = one_body_operator(&DMatrix::identity(2, 2), 4).unwrap();
        let n_op = to_dense(&n_op, 4).unwrap();
        assert!((&h * &n_op - &n_op * &h).norm() < 1e-12);
    }
}
