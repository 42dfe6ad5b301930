//! Dense reference computations: exact diagonalization in a symmetry sector
//! and ordered products of matrix exponentials. Used by tests and to tune
//! the bundled fixtures; practical up to about 12 qubits.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::circuit::ParamMap;
use crate::error::{Error, Result};
use crate::fermion::{jordan_wigner, Excitation, FermionOperator};
use crate::model::{hamiltonian_from_model, MolecularModel};
use crate::pauli::{to_dense, QubitOperator};
use crate::symmetry::point_group_z2_symmetries;

type C = Complex64;

/// Which conserved quantities define a sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    /// Alpha and beta electron numbers of the reference.
    Number,
    /// Electron numbers and every point-group Z₂ eigenvalue of the reference.
    Full,
}

/// Eigenpairs of `H` restricted to a set of basis states.
#[derive(Clone, Debug)]
pub struct SectorSpectrum {
    pub n_qubits: usize,
    pub basis: Vec<u64>,
    /// Ascending.
    pub energies: Vec<f64>,
    /// Column `v` holds eigenvector `v` over `basis`.
    pub vectors: DMatrix<f64>,
}

impl SectorSpectrum {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// Eigenvector `v` as a full statevector.
    pub fn state(&self, v: usize) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); 1 << self.n_qubits];
        for (k, &b) in self.basis.iter().enumerate() {
            out[b as usize] = C::new(self.vectors[(k, v)], 0.0);
        }
        out
    }
}

/// Basis states sharing the reference's conserved quantities.
pub fn sector_basis(model: &MolecularModel, sector: Sector) -> Vec<u64> {
    let n = model.n_spin_orbitals;
    let hf = model.hf_bits();
    let even = 0x5555_5555_5555_5555u64;
    let odd = even << 1;
    let syms = match sector {
        Sector::Number => Vec::new(),
        Sector::Full => point_group_z2_symmetries(model),
    };
    (0..1u64 << n)
        .filter(|b| (b & even).count_ones() == (hf & even).count_ones())
        .filter(|b| (b & odd).count_ones() == (hf & odd).count_ones())
        .filter(|b| syms.iter().all(|s| (s.pauli.z & b).count_ones() % 2 == s.parity() as u32))
        .collect()
}

/// Real matrix of `op` between the given basis states.
pub fn restricted_matrix(op: &QubitOperator, n_qubits: usize, basis: &[u64]) -> DMatrix<f64> {
    let dim = basis.len();
    let mut m = DMatrix::zeros(dim, dim);
    let mut e = vec![C::new(0.0, 0.0); 1 << n_qubits];
    for (col, &b) in basis.iter().enumerate() {
        e[b as usize] = C::new(1.0, 0.0);
        let image = op.apply(&e);
        e[b as usize] = C::new(0.0, 0.0);
        for (row, &r) in basis.iter().enumerate() {
            m[(row, col)] = image[r as usize].re;
        }
    }
    m
}

/// Exact spectrum of `op` on `basis`, ascending.
pub fn restricted_spectrum(op: &QubitOperator, n_qubits: usize, basis: Vec<u64>) -> Result<SectorSpectrum> {
    if n_qubits > 14 {
        return Err(Error::TooManyQubits { requested: n_qubits, max: 14 });
    }
    if basis.is_empty() {
        return Err(Error::InvalidArgument("empty sector".into()));
    }
    let m = restricted_matrix(op, n_qubits, &basis);
    let eig = SymmetricEigen::new((&m + m.transpose()) * 0.5);
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(basis.len(), basis.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SectorSpectrum { n_qubits, basis, energies, vectors })
}

/// Exact spectrum of the model Hamiltonian in the reference's sector.
pub fn sector_spectrum(model: &MolecularModel, sector: Sector) -> Result<SectorSpectrum> {
    let h = hamiltonian_from_model(model)?;
    restricted_spectrum(&h, model.n_spin_orbitals, sector_basis(model, sector))
}

/// Lowest eigenvalue of the model Hamiltonian in the reference's full
/// symmetry sector.
pub fn ground_energy(model: &MolecularModel) -> Result<f64> {
    Ok(sector_spectrum(model, Sector::Full)?.ground_energy())
}

/// `∏ exp(θ_k G_k) |reference⟩` with the first excitation applied first.
pub fn ucc_state(order: &[Excitation], values: &ParamMap, n_qubits: usize, reference: u64) -> Result<Vec<C>> {
    let mut psi = DVector::from_element(1 << n_qubits, C::new(0.0, 0.0));
    psi[reference as usize] = C::new(1.0, 0.0);
    for e in order {
        let theta = *values.get(&e.parameter).ok_or_else(|| Error::UnboundParameter(e.parameter.clone()))?;
        let g = e.jw_generator().scale(C::new(theta, 0.0));
        psi = to_dense(&g, n_qubits)?.exp() * psi;
    }
    Ok(psi.iter().copied().collect())
}

/// Total spin `S² = S₋S₊ + S_z(S_z + 1)` on `n_spatial` orbitals.
pub fn spin_squared(n_spatial: usize) -> QubitOperator {
    let mut plus = FermionOperator::zero();
    let mut minus = FermionOperator::zero();
    let mut sz = FermionOperator::zero();
    for p in 0..n_spatial {
        plus = plus.add(&FermionOperator::hop(2 * p, 2 * p + 1));
        minus = minus.add(&FermionOperator::hop(2 * p + 1, 2 * p));
        sz = sz.add(&FermionOperator::hop(2 * p, 2 * p).scale(C::new(0.5, 0.0)));
        sz = sz.add(&FermionOperator::hop(2 * p + 1, 2 * p + 1).scale(C::new(-0.5, 0.0)));
    }
    let sz_plus_one = sz.add(&FermionOperator::identity());
    let op = minus.mul(&plus).add(&sz.mul(&sz_plus_one));
    jordan_wigner(&op).hermitian_part()
}

/// Largest amplitude difference after removing a global phase.
pub fn state_distance(a: &[C], b: &[C]) -> f64 {
    let overlap: C = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C::new(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::toy_model;

    #[test]
    fn reference_energy_is_diagonal_element() {
        let m = toy_model();
        let s = sector_spectrum(&m, Sector::Full).unwrap();
        let h = hamiltonian_from_model(&m).unwrap();
        let mat = restricted_matrix(&h, m.n_spin_orbitals, &s.basis);
        let k = s.basis.iter().position(|&b| b == m.hf_bits()).unwrap();
        assert!((mat[(k, k)] - m.hf_energy()).abs() < 1e-12);
        assert!(s.ground_energy() <= m.hf_energy() + 1e-12);
    }

    #[test]
    fn eigenvectors_satisfy_eigen_equation() {
        let m = toy_model();
        let h = hamiltonian_from_model(&m).unwrap();
        let s = sector_spectrum(&m, Sector::Number).unwrap();
        for v in 0..s.energies.len() {
            let psi = s.state(v);
            let hpsi = h.apply(&psi);
            for (a, b) in hpsi.iter().zip(&psi) {
                assert!((a - b * s.energies[v]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn two_electron_spin_states() {
        let m = toy_model();
        let s2 = spin_squared(2);
        let s = sector_spectrum(&m, Sector::Number).unwrap();
        let mut spins: Vec<i64> =
            (0..s.energies.len()).map(|v| s2.expectation(&s.state(v)).re.round() as i64).collect();
        spins.sort_unstable();
        assert_eq!(spins, vec![0, 0, 0, 2]);
    }

    #[test]
    fn sectors_nest() {
        let m = toy_model();
        let full = sector_basis(&m, Sector::Full);
        let num = sector_basis(&m, Sector::Number);
        assert!(full.iter().all(|b| num.contains(b)));
        assert!(full.contains(&m.hf_bits()));
    }
}
