use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, ParamMap};
use crate::error::{Error, Result};
use crate::estimation::{estimate_sampled, EstimateOptions};
use crate::fermion::{generate_uccsd_pool, jordan_wigner, ExcitationKind, FermionOperator};
use crate::model::{dipole_operator, hamiltonian_from_model, MolecularModel};
use crate::par::Execution;
use crate::pauli::QubitOperator;
use crate::sim::run_statevector_with;
use crate::symmetry::{all_symmetries, filter_excitations, number_parity_symmetries};

type C = Complex64;

/// Discard threshold for overlap eigenvalues.
pub const DEFAULT_S_THRESHOLD: f64 = 1e-8;

/// States closer than this are reported as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-6;

/// How subspace matrix elements are evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum QseEstimator {
    /// Exact expectation values on the prepared state.
    Exact,
    /// One shot-sampled operator average per matrix element.
    Sampled(EstimateOptions),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QseResult {
    /// Hartree.
    pub subspace_h: DMatrix<f64>,
    pub subspace_s: DMatrix<f64>,
    /// Hartree, ascending.
    pub energies: Vec<f64>,
    /// Column `v` holds `w^v` over the expansion operators.
    pub vectors: DMatrix<f64>,
    pub expansion_ops: Vec<FermionOperator>,
    /// Number of overlap eigenvalues kept after conditioning.
    pub rank: usize,
}

impl QseResult {
    /// Index groups of states whose energies agree within `tol`.
    pub fn degenerate_groups(&self, tol: f64) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (v, e) in self.energies.iter().enumerate() {
            match groups.last_mut() {
                Some(g) if (self.energies[*g.last().unwrap()] - e).abs() < tol => g.push(v),
                _ => groups.push(vec![v]),
            }
        }
        groups
    }

    /// `Σ_k w_k^v F_k |ψ₀⟩`.
    pub fn state(&self, v: usize, psi0: &[C], n_qubits: usize) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); psi0.len()];
        for (k, f) in self.expansion_ops.iter().enumerate() {
            let w = self.vectors[(k, v)];
            if w == 0.0 {
                continue;
            }
            let phi = apply_fermion(f, psi0, n_qubits);
            out.iter_mut().zip(&phi).for_each(|(o, p)| *o += p * w);
        }
        out
    }
}

fn apply_fermion(f: &FermionOperator, psi: &[C], n_qubits: usize) -> Vec<C> {
    let op = jordan_wigner(f);
    debug_assert!(op.n_qubits() <= n_qubits);
    op.apply(psi)
}

/// `{I}` ∪ spin-conserving singles ∪ paired doubles. Singles may change
/// the irrep (that is what makes states bright); alpha and beta singles
/// between the same orbitals are combined into one spin-adapted operator.
/// Paired doubles must pass the full symmetry filter.
pub fn default_expansion(model: &MolecularModel) -> Vec<FermionOperator> {
    let full = generate_uccsd_pool(model);
    let pool = filter_excitations(&full, &number_parity_symmetries(model), model);
    let mut ops = vec![FermionOperator::identity()];
    let singles: Vec<_> = pool.iter().filter(|e| e.kind == ExcitationKind::Single).collect();
    let mut used = vec![false; singles.len()];
    for (k, e) in singles.iter().enumerate() {
        if used[k] {
            continue;
        }
        used[k] = true;
        let (a, i) = (e.indices[0], e.indices[1]);
        let mut op = e.operator();
        if a % 2 == 0 {
            if let Some(j) = singles.iter().position(|o| o.indices == [a + 1, i + 1]) {
                used[j] = true;
                op = op.add(&singles[j].operator());
            }
        }
        ops.push(op);
    }
    let doubles = filter_excitations(&full, &all_symmetries(model), model);
    ops.extend(doubles.iter().filter(|e| e.kind == ExcitationKind::PairedDouble).map(|e| e.operator()));
    ops
}

/// `{I}` plus every excitation operator of the unfiltered pool.
pub fn complete_expansion(model: &MolecularModel) -> Vec<FermionOperator> {
    let mut ops = vec![FermionOperator::identity()];
    ops.extend(generate_uccsd_pool(model).iter().map(|e| e.operator()));
    ops
}

/// Builds `H_kl = ⟨ψ₀|F_k† H F_l|ψ₀⟩` and `S_kl = ⟨ψ₀|F_k† F_l|ψ₀⟩`, then
/// solves `Hc = eSc` by canonical orthogonalization.
pub fn qse_solve(
    model: &MolecularModel,
    circuit: &Circuit,
    params: &ParamMap,
    expansion: &[FermionOperator],
    estimator: &QseEstimator,
    s_threshold: f64,
) -> Result<QseResult> {
    if expansion.is_empty() {
        return Err(Error::InvalidArgument("empty expansion".into()));
    }
    let n = model.n_spin_orbitals;
    if let Some(k) = expansion.iter().filter_map(FermionOperator::max_index).find(|&k| k >= n) {
        return Err(Error::QubitOutOfRange { index: k, n_qubits: n });
    }
    let h = hamiltonian_from_model(model)?;
    let bound = circuit.bind(params)?;
    let m = expansion.len();
    let (hm, sm) = match estimator {
        QseEstimator::Exact => {
            let psi0 = run_statevector_with(&bound, Execution::Sequential)?.amplitudes;
            let phis: Vec<Vec<C>> = expansion.iter().map(|f| apply_fermion(f, &psi0, n)).collect();
            let hphis: Vec<Vec<C>> = phis.iter().map(|p| h.apply(p)).collect();
            let dot = |a: &[C], b: &[C]| -> f64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C>().re };
            (
                DMatrix::from_fn(m, m, |k, l| dot(&phis[k], &hphis[l])),
                DMatrix::from_fn(m, m, |k, l| dot(&phis[k], &phis[l])),
            )
        }
        QseEstimator::Sampled(opts) => {
            // The constant part of H is added back as c0·S below; sampling it
            // would scale overlap noise by the (large) core energy.
            let c0 = h.identity_coefficient().re;
            let h = h.without_identity();
            let jw: Vec<QubitOperator> = expansion.iter().map(jordan_wigner).collect();
            let pairs: Vec<(usize, usize)> = (0..m).flat_map(|k| (k..m).map(move |l| (k, l))).collect();
            let values = opts.exec.map_slice(&pairs, |&(k, l)| -> Result<(f64, f64)> {
                let fk_dag = jw[k].dagger();
                let s_op = (&fk_dag * &jw[l]).hermitian_part();
                let h_op = (&(&fk_dag * &h) * &jw[l]).hermitian_part();
                let mut o = opts.clone();
                o.exec = Execution::Sequential;
                o.seed = opts.seed.wrapping_add((k * m + l) as u64 * 2);
                let hv = averaged(model, &bound, &h_op, &o)?;
                o.seed = o.seed.wrapping_add(1);
                let sv = averaged(model, &bound, &s_op, &o)?;
                Ok((hv, sv))
            });
            let mut hm = DMatrix::zeros(m, m);
            let mut sm = DMatrix::zeros(m, m);
            for (&(k, l), v) in pairs.iter().zip(values) {
                let (hv, sv) = v?;
                hm[(k, l)] = hv + c0 * sv;
                hm[(l, k)] = hv + c0 * sv;
                sm[(k, l)] = sv;
                sm[(l, k)] = sv;
            }
            (hm, sm)
        }
    };
    solve_generalized(hm, sm, expansion.to_vec(), s_threshold)
}

fn averaged(model: &MolecularModel, prep: &Circuit, op: &QubitOperator, opts: &EstimateOptions) -> Result<f64> {
    if op.without_identity().is_empty() {
        return Ok(op.identity_coefficient().re);
    }
    Ok(estimate_sampled(model, prep, op, opts)?.estimate.value)
}

/// Canonical orthogonalization: `X = U_kept Λ^{-1/2}`, diagonalize `XᵀHX`,
/// return `w = Xc` (S-normalized).
pub fn solve_generalized(
    hm: DMatrix<f64>,
    sm: DMatrix<f64>,
    expansion_ops: Vec<FermionOperator>,
    s_threshold: f64,
) -> Result<QseResult> {
    let hm = (&hm + hm.transpose()) * 0.5;
    let sm = (&sm + sm.transpose()) * 0.5;
    let se = SymmetricEigen::new(sm.clone());
    let kept: Vec<usize> = (0..se.eigenvalues.len()).filter(|&i| se.eigenvalues[i] > s_threshold).collect();
    if kept.is_empty() {
        return Err(Error::SingularOverlap { threshold: s_threshold });
    }
    let x =
        DMatrix::from_fn(sm.nrows(), kept.len(), |r, c| se.eigenvectors[(r, kept[c])] / se.eigenvalues[kept[c]].sqrt());
    let hp = x.transpose() * &hm * &x;
    let he = SymmetricEigen::new((&hp + hp.transpose()) * 0.5);
    let mut order: Vec<usize> = (0..kept.len()).collect();
    order.sort_by(|&a, &b| he.eigenvalues[a].total_cmp(&he.eigenvalues[b]));
    let energies = order.iter().map(|&i| he.eigenvalues[i]).collect();
    let c = DMatrix::from_fn(kept.len(), kept.len(), |r, col| he.eigenvectors[(r, order[col])]);
    let vectors = x * c;
    Ok(QseResult { subspace_h: hm, subspace_s: sm, energies, vectors, expansion_ops, rank: kept.len() })
}

/// `⟨ψ₀|μ_α|ψ_v⟩ = Σ_k w_k^v ⟨ψ₀|μ_α F_k|ψ₀⟩` for every state and axis.
pub fn transition_dipoles(
    result: &QseResult,
    model: &MolecularModel,
    circuit: &Circuit,
    params: &ParamMap,
) -> Result<Vec<[f64; 3]>> {
    let mu: Vec<QubitOperator> = (0..3).map(|a| dipole_operator(model, a)).collect::<Result<_>>()?;
    let n = model.n_spin_orbitals;
    let psi0 = run_statevector_with(&circuit.bind(params)?, Execution::Sequential)?.amplitudes;
    // elements[k][α] = ⟨ψ₀|μ_α F_k|ψ₀⟩
    let elements: Vec<[f64; 3]> = result
        .expansion_ops
        .iter()
        .map(|f| {
            let phi = apply_fermion(f, &psi0, n);
            let mut out = [0.0; 3];
            for (a, op) in mu.iter().enumerate() {
                let mphi = op.apply(&phi);
                out[a] = psi0.iter().zip(&mphi).map(|(x, y)| x.conj() * y).sum::<C>().re;
            }
            out
        })
        .collect();
    Ok((0..result.energies.len())
        .map(|v| {
            let mut d = [0.0; 3];
            for (k, e) in elements.iter().enumerate() {
                for a in 0..3 {
                    d[a] += result.vectors[(k, v)] * e[a];
                }
            }
            d
        })
        .collect())
}
