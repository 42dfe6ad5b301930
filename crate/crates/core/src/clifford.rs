//! Simultaneous diagonalization of commuting Pauli strings by symplectic
//! Gaussian elimination, and CX-ladder phase polynomials.

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Angle, Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// A signed Pauli string, `−P` when `negative`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedPauli {
    pub negative: bool,
    pub string: PauliString,
}

impl SignedPauli {
    pub fn new(string: PauliString) -> Self {
        SignedPauli { negative: false, string }
    }

    pub fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    /// `U P U†` for a Clifford gate `U`. Rotations must be ±π/2 about Z.
    pub fn conjugate(mut self, g: &Gate) -> Self {
        let s = &mut self.string;
        let bit = |v: u64, q: usize| v >> q & 1 == 1;
        match g {
            Gate::H { qubit: q } => {
                let (x, z) = (bit(s.x, *q), bit(s.z, *q));
                self.negative ^= x && z;
                s.x = (s.x & !(1 << q)) | (u64::from(z) << q);
                s.z = (s.z & !(1 << q)) | (u64::from(x) << q);
            }
            Gate::X { qubit: q } => self.negative ^= bit(s.z, *q),
            Gate::Rz { qubit: q, angle } => {
                let a = angle.literal().expect("literal Clifford angle");
                let (x, z) = (bit(s.x, *q), bit(s.z, *q));
                if (a - FRAC_PI_2).abs() < 1e-12 {
                    // S: X → Y, Y → −X
                    self.negative ^= x && z;
                } else if (a + FRAC_PI_2).abs() < 1e-12 {
                    // S†: X → −Y, Y → X
                    self.negative ^= x && !z;
                } else {
                    panic!("Rz({a}) is not a Clifford phase gate");
                }
                if x {
                    s.z ^= 1 << q;
                }
            }
            Gate::Cx { control: a, target: b } => {
                let (xa, za, xb, zb) = (bit(s.x, *a), bit(s.z, *a), bit(s.x, *b), bit(s.z, *b));
                self.negative ^= xa && zb && !(xb ^ za);
                if xa {
                    s.x ^= 1 << b;
                }
                if zb {
                    s.z ^= 1 << a;
                }
            }
            other => panic!("`{other}` is not a supported Clifford gate"),
        }
        self
    }
}

/// Clifford circuit `D` with `D P_k D† = ±Z_{mask_k}` for every input
/// string.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagonalizer {
    pub gates: Vec<Gate>,
    pub images: Vec<SignedPauli>,
}

impl Diagonalizer {
    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cx { .. })).count()
    }

    pub fn circuit(&self, n_qubits: usize) -> Circuit {
        let mut c = Circuit::new(n_qubits);
        self.gates.iter().cloned().for_each(|g| c.push(g));
        c
    }

    pub fn inverse_gates(&self) -> Vec<Gate> {
        self.gates.iter().rev().map(Gate::inverse).collect()
    }
}

fn cz(gates: &mut Vec<Gate>, a: usize, b: usize) {
    gates.push(Gate::H { qubit: b });
    gates.push(Gate::cx(a, b));
    gates.push(Gate::H { qubit: b });
}

/// Column operations on the working generator rows.
fn apply_to_rows(rows: &mut [SignedPauli], g: &Gate) {
    for r in rows.iter_mut() {
        *r = r.conjugate(g);
    }
}

/// Builds a diagonalizing Clifford for mutually commuting strings.
///
/// Pivot columns are chosen greedily by largest X-column weight, ties to
/// the lowest qubit. Non-pivot X entries of the pivot row are cleared with
/// `CX(pivot → t)`, the Z block on pivots with `S` and `CZ`, and a final
/// `H` on each pivot turns the pivot rows into Z.
pub fn diagonalize(strings: &[PauliString], n_qubits: usize) -> Result<Diagonalizer> {
    for (i, a) in strings.iter().enumerate() {
        if strings[i + 1..].iter().any(|b| !a.commutes(b)) {
            return Err(Error::NonCommuting);
        }
    }
    let mut rows: Vec<SignedPauli> = strings.iter().map(|&s| SignedPauli::new(s)).collect();
    let mut gates = Vec::new();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, column)

    loop {
        let free_rows: Vec<usize> = (0..rows.len()).filter(|r| !pivots.iter().any(|(pr, _)| pr == r)).collect();
        let pivot_cols: u64 = pivots.iter().fold(0, |m, (_, c)| m | 1 << c);
        let weight = |q: usize| free_rows.iter().filter(|&&r| rows[r].string.x >> q & 1 == 1).count();
        let best = (0..n_qubits)
            .filter(|q| pivot_cols >> q & 1 == 0)
            .map(|q| (weight(q), q))
            .filter(|(w, _)| *w > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let Some((_, col)) = best else { break };
        let prow = *free_rows.iter().find(|&&r| rows[r].string.x >> col & 1 == 1).expect("weight > 0");
        // row reduction (group multiplication; phases are irrelevant here)
        let p = rows[prow].string;
        for &r in &free_rows {
            if r != prow && rows[r].string.x >> col & 1 == 1 {
                rows[r].string = PauliString::new(rows[r].string.x ^ p.x, rows[r].string.z ^ p.z);
            }
        }
        for &(pr, _) in &pivots {
            if rows[pr].string.x >> col & 1 == 1 {
                rows[pr].string = PauliString::new(rows[pr].string.x ^ p.x, rows[pr].string.z ^ p.z);
            }
        }
        for t in 0..n_qubits {
            if t != col && pivot_cols >> t & 1 == 0 && rows[prow].string.x >> t & 1 == 1 {
                let g = Gate::cx(col, t);
                apply_to_rows(&mut rows, &g);
                gates.push(g);
            }
        }
        pivots.push((prow, col));
    }

    // Z block on pivot columns: symmetric by commutation.
    for (i, &(ri, ci)) in pivots.iter().enumerate() {
        if rows[ri].string.z >> ci & 1 == 1 {
            let g = Gate::rz(ci, Angle::Literal(FRAC_PI_2));
            apply_to_rows(&mut rows, &g);
            gates.push(g);
        }
        for &(_, cj) in &pivots[i + 1..] {
            if rows[ri].string.z >> cj & 1 == 1 {
                let mut cz_gates = Vec::new();
                cz(&mut cz_gates, ci, cj);
                for g in cz_gates {
                    apply_to_rows(&mut rows, &g);
                    gates.push(g);
                }
            }
        }
    }
    for &(_, c) in &pivots {
        gates.push(Gate::H { qubit: c });
    }

    let images: Vec<SignedPauli> =
        strings.iter().map(|&s| gates.iter().fold(SignedPauli::new(s), |acc, g| acc.conjugate(g))).collect();
    if images.iter().any(|im| !im.string.is_diagonal()) {
        return Err(Error::InvalidCircuit("diagonalization failed".into()));
    }
    Ok(Diagonalizer { gates, images })
}

/// Inverse Gray code.
fn gray_rank(mut g: u64) -> u64 {
    let mut r = g;
    while g > 0 {
        g >>= 1;
        r ^= g;
    }
    r
}

/// Emits `Π_k exp(−i angle_k Z_{mask_k} / 2)` as CX ladders onto a target
/// qubit per group, visiting each group's parities in Gray-code order.
///
/// The target of a mask is its lowest qubit among `preferred`, else its
/// lowest qubit.
pub fn phase_polynomial(terms: &[(u64, Angle)], preferred: u64, circuit: &mut Circuit) {
    let mut groups: Vec<(usize, Vec<(u64, Angle)>)> = Vec::new();
    for (mask, angle) in terms {
        if *mask == 0 {
            continue; // global phase
        }
        let pick = if mask & preferred != 0 { mask & preferred } else { *mask };
        let target = pick.trailing_zeros() as usize;
        match groups.iter_mut().find(|(t, _)| *t == target) {
            Some((_, v)) => v.push((*mask, angle.clone())),
            None => groups.push((target, vec![(*mask, angle.clone())])),
        }
    }
    groups.sort_by_key(|(t, _)| *t);
    for (target, mut items) in groups {
        let union = items.iter().fold(0u64, |u, (m, _)| u | m) & !(1 << target);
        items.sort_by_key(|(m, _)| gray_rank(compress(*m, union)));
        let mut current = 0u64;
        for (mask, angle) in items {
            let want = mask & !(1 << target);
            toggle(circuit, current ^ want, target);
            current = want;
            circuit.rz(target, angle);
        }
        toggle(circuit, current, target);
    }
}

/// Packs the bits of `m` selected by `support` into the low bits.
fn compress(m: u64, support: u64) -> u64 {
    let mut out = 0;
    let mut k = 0;
    for q in 0..64 {
        if support >> q & 1 == 1 {
            out |= (m >> q & 1) << k;
            k += 1;
        }
    }
    out
}

fn toggle(circuit: &mut Circuit, diff: u64, target: usize) {
    for q in 0..64 {
        if diff >> q & 1 == 1 {
            circuit.cx(q, target);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::Excitation;
    use crate::pauli::{to_dense, Pauli, PauliTerm, QubitOperator};
    use crate::sim::StateVector;
    use num_complex::Complex64;

    fn dense_of(gates: &[Gate], n: usize) -> nalgebra::DMatrix<Complex64> {
        let dim = 1 << n;
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut s = StateVector::basis(n, col as u64).unwrap();
            for g in gates {
                s.apply_gate(g).unwrap();
            }
            for row in 0..dim {
                m[(row, col)] = s.amplitudes[row];
            }
        }
        m
    }

    #[test]
    fn conjugation_rules_match_dense() {
        let gates = [
            Gate::H { qubit: 0 },
            Gate::rz(1, Angle::Literal(FRAC_PI_2)),
            Gate::rz(1, Angle::Literal(-FRAC_PI_2)),
            Gate::cx(0, 1),
            Gate::cx(1, 0),
            Gate::X { qubit: 1 },
        ];
        for g in &gates {
            let u = dense_of(std::slice::from_ref(g), 2);
            for x in 0..4u64 {
                for z in 0..4u64 {
                    let p = SignedPauli::new(PauliString::new(x, z));
                    let img = p.conjugate(g);
                    let lhs = &u
                        * to_dense(&PauliTerm::new(Complex64::new(1.0, 0.0), p.string).into(), 2).unwrap()
                        * u.adjoint();
                    let rhs = to_dense(&PauliTerm::new(Complex64::new(img.sign(), 0.0), img.string).into(), 2).unwrap();
                    assert!((lhs - rhs).norm() < 1e-12, "{g} on {}", p.string);
                }
            }
        }
    }

    #[test]
    fn paired_double_needs_three_cx() {
        let g = Excitation::paired(0, 1, "t").jw_generator();
        let strings: Vec<PauliString> = g.terms().map(|t| t.string).collect();
        let d = diagonalize(&strings, 4).unwrap();
        assert_eq!(d.two_qubit_count(), 3);
        let u = dense_of(&d.gates, 4);
        for (s, im) in strings.iter().zip(&d.images) {
            let p = to_dense(&PauliTerm::new(Complex64::new(1.0, 0.0), *s).into(), 4).unwrap();
            let q = to_dense(&PauliTerm::new(Complex64::new(im.sign(), 0.0), im.string).into(), 4).unwrap();
            assert!((&u * p * u.adjoint() - q).norm() < 1e-12);
        }
    }

    #[test]
    fn rank_two_sets_diagonalize() {
        let strings = [
            PauliString::from_letters(&[(0, Pauli::X), (1, Pauli::X)]),
            PauliString::from_letters(&[(0, Pauli::Y), (1, Pauli::Y)]),
            PauliString::from_letters(&[(0, Pauli::Z), (1, Pauli::Z)]),
            PauliString::from_letters(&[(2, Pauli::Y)]),
            PauliString::from_letters(&[(2, Pauli::Y), (3, Pauli::Z)]),
        ];
        let d = diagonalize(&strings, 4).unwrap();
        assert!(d.images.iter().all(|i| i.string.is_diagonal()));
        let bad = [PauliString::single(0, Pauli::X), PauliString::single(0, Pauli::Z)];
        assert!(matches!(diagonalize(&bad, 1), Err(Error::NonCommuting)));
    }

    #[test]
    fn gray_walk_over_three_controls_costs_eight() {
        let terms: Vec<(u64, Angle)> = (0..8u64).map(|s| (1 | s << 1, Angle::Literal(0.1))).collect();
        let mut c = Circuit::new(4);
        phase_polynomial(&terms, 1, &mut c);
        assert_eq!(c.two_qubit_gate_count(), 8);
        // the circuit equals the product of parity rotations
        let mut op = QubitOperator::zero();
        for (m, _) in &terms {
            op.add_term(PauliTerm::new(Complex64::new(0.0, -0.05), PauliString::z_string(*m)));
        }
        let expect = to_dense(&op, 4).unwrap().exp();
        assert!((dense_of(&c.gates, 4) - expect).norm() < 1e-12);
    }
}
