use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::pauli::{Pauli, QubitOperator};

/// Largest register the dense simulator accepts.
pub const MAX_SIM_QUBITS: usize = 20;

/// Below this many amplitudes gates always run sequentially.
#[cfg(feature = "parallel")]
const PAR_MIN_LEN: usize = 1 << 14;

type C = Complex64;

/// Dense little-endian statevector: bit `q` of an index is qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amplitudes: Vec<C>,
    pub exec: Execution,
}

/// Applies `f(index_of_low, lo, hi)` to every amplitude pair differing in
/// bit `q`.
fn for_each_pair<F>(exec: Execution, amps: &mut [C], q: usize, f: F)
where
    F: Fn(usize, &mut C, &mut C) + Sync + Send,
{
    let half = 1usize << q;
    let block = half << 1;
    let run_block = |b: usize, chunk: &mut [C]| {
        let (lo, hi) = chunk.split_at_mut(half);
        for (k, (a, c)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            f(b * block + k, a, c);
        }
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && amps.len() >= PAR_MIN_LEN {
        use rayon::prelude::*;
        if amps.len() / block >= rayon::current_num_threads() {
            amps.par_chunks_mut(block).enumerate().for_each(|(b, chunk)| run_block(b, chunk));
        } else {
            for (b, chunk) in amps.chunks_mut(block).enumerate() {
                let (lo, hi) = chunk.split_at_mut(half);
                lo.par_iter_mut().zip(hi.par_iter_mut()).enumerate().for_each(|(k, (a, c))| f(b * block + k, a, c));
            }
        }
        return;
    }
    let _ = exec;
    for (b, chunk) in amps.chunks_mut(block).enumerate() {
        run_block(b, chunk);
    }
}

fn apply_matrix(exec: Execution, amps: &mut [C], q: usize, m: [[C; 2]; 2]) {
    for_each_pair(exec, amps, q, |_, a, b| {
        let (x, y) = (*a, *b);
        *a = m[0][0] * x + m[0][1] * y;
        *b = m[1][0] * x + m[1][1] * y;
    });
}

fn rotation(kind: Pauli, theta: f64) -> [[C; 2]; 2] {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let z = C::new(0.0, 0.0);
    match kind {
        Pauli::X => [[C::new(c, 0.0), C::new(0.0, -s)], [C::new(0.0, -s), C::new(c, 0.0)]],
        Pauli::Y => [[C::new(c, 0.0), C::new(-s, 0.0)], [C::new(s, 0.0), C::new(c, 0.0)]],
        Pauli::Z => [[C::new(c, -s), z], [z, C::new(c, s)]],
    }
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: u64) -> Result<Self> {
        if n_qubits > MAX_SIM_QUBITS {
            return Err(Error::TooManyQubits { requested: n_qubits, max: MAX_SIM_QUBITS });
        }
        let mut amplitudes = vec![C::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index as usize] = C::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amplitudes, exec: Execution::default() })
    }

    pub fn from_amplitudes(amplitudes: Vec<C>) -> Result<Self> {
        let n = amplitudes.len().trailing_zeros() as usize;
        if amplitudes.len() != 1 << n {
            return Err(Error::InvalidArgument("amplitude count is not a power of two".into()));
        }
        Ok(StateVector { n_qubits: n, amplitudes, exec: Execution::default() })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.iter_mut().for_each(|a| *a /= n);
        }
    }

    pub fn inner(&self, other: &StateVector) -> C {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn expectation(&self, op: &QubitOperator) -> C {
        op.expectation(&self.amplitudes)
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        let m = match p {
            Pauli::X => [[C::new(0.0, 0.0), C::new(1.0, 0.0)], [C::new(1.0, 0.0), C::new(0.0, 0.0)]],
            Pauli::Y => [[C::new(0.0, 0.0), C::new(0.0, -1.0)], [C::new(0.0, 1.0), C::new(0.0, 0.0)]],
            Pauli::Z => [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(-1.0, 0.0)]],
        };
        apply_matrix(self.exec, &mut self.amplitudes, q, m);
    }

    pub fn apply_h(&mut self, q: usize) {
        let r = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        apply_matrix(self.exec, &mut self.amplitudes, q, [[r, r], [r, -r]]);
    }

    pub fn apply_rotation(&mut self, q: usize, axis: Pauli, theta: f64) {
        apply_matrix(self.exec, &mut self.amplitudes, q, rotation(axis, theta));
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        for_each_pair(self.exec, &mut self.amplitudes, target, |i, a, b| {
            if i >> control & 1 == 1 {
                std::mem::swap(a, b);
            }
        });
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        self.amplitudes.iter().enumerate().filter(|(i, _)| i >> q & 1 == 1).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Projects qubit `q` onto `outcome` and renormalizes.
    pub fn collapse(&mut self, q: usize, outcome: bool) {
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if (i >> q & 1 == 1) != outcome {
                *a = C::new(0.0, 0.0);
            }
        }
        self.normalize();
    }

    /// Applies a unitary gate with a literal angle.
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        let lit = |g: &Gate| {
            let a = g.angle().expect("rotation");
            a.literal().ok_or_else(|| Error::UnboundParameter(a.symbol_name().unwrap_or("").to_string()))
        };
        match g {
            Gate::H { qubit } => self.apply_h(*qubit),
            Gate::X { qubit } => self.apply_pauli(*qubit, Pauli::X),
            Gate::Rx { qubit, .. } => self.apply_rotation(*qubit, Pauli::X, lit(g)?),
            Gate::Ry { qubit, .. } => self.apply_rotation(*qubit, Pauli::Y, lit(g)?),
            Gate::Rz { qubit, .. } => self.apply_rotation(*qubit, Pauli::Z, lit(g)?),
            Gate::Cx { control, target } => self.apply_cx(*control, *target),
            other => {
                return Err(Error::InvalidCircuit(format!("`{other}` needs trajectory execution")));
            }
        }
        Ok(())
    }

    /// Applies every gate of a bound, measurement-free circuit.
    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.n_qubits > self.n_qubits {
            return Err(Error::InvalidCircuit(format!(
                "circuit needs {} qubits, state has {}",
                c.n_qubits, self.n_qubits
            )));
        }
        for g in &c.gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }
}

/// Final state of a bound circuit without measurements, from `|0…0⟩`.
pub fn run_statevector(c: &Circuit) -> Result<StateVector> {
    run_statevector_with(c, Execution::default())
}

pub fn run_statevector_with(c: &Circuit, exec: Execution) -> Result<StateVector> {
    let mut s = StateVector::zero(c.n_qubits)?.with_execution(exec);
    s.apply_circuit(c)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Angle;
    use crate::pauli::{to_dense, PauliString, PauliTerm};
    use nalgebra::DVector;

    #[test]
    fn x_sets_low_bit() {
        let mut c = Circuit::new(2);
        c.x(0);
        let s = run_statevector(&c).unwrap();
        assert_eq!(s.amplitudes[1], C::new(1.0, 0.0));
    }

    #[test]
    fn rotations_match_pauli_exponentials() {
        for (axis, pauli) in [(0, Pauli::X), (1, Pauli::Y), (2, Pauli::Z)] {
            let theta = 0.731;
            let mut c = Circuit::new(3);
            c.h(0);
            c.h(1);
            c.cx(0, 2);
            let g = match axis {
                0 => Gate::Rx { qubit: 1, angle: Angle::Literal(theta) },
                1 => Gate::Ry { qubit: 1, angle: Angle::Literal(theta) },
                _ => Gate::Rz { qubit: 1, angle: Angle::Literal(theta) },
            };
            let prefix = run_statevector(&c).unwrap();
            c.push(g);
            let s = run_statevector(&c).unwrap();
            // exp(−iθP/2)
            let p = QubitOperator::from_term(PauliTerm::new(C::new(0.0, -theta / 2.0), PauliString::single(1, pauli)));
            let u = to_dense(&p, 3).unwrap().exp();
            let expect = u * DVector::from_vec(prefix.amplitudes.clone());
            for (a, b) in s.amplitudes.iter().zip(expect.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut c = Circuit::new(15);
        for q in 0..15 {
            c.h(q);
            c.rz(q, Angle::Literal(0.1 * q as f64));
        }
        for q in 0..14 {
            c.cx(q, q + 1);
            c.ry(q + 1, Angle::Literal(0.3));
        }
        c.cx(14, 0);
        let a = run_statevector_with(&c, Execution::Sequential).unwrap();
        let b = run_statevector_with(&c, Execution::Parallel).unwrap();
        assert_eq!(a.amplitudes, b.amplitudes);
        assert!((a.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbound_symbol_is_an_error() {
        let mut c = Circuit::new(1);
        c.rz(0, Angle::symbol("t", 1.0));
        assert!(matches!(run_statevector(&c), Err(Error::UnboundParameter(_))));
    }
}
