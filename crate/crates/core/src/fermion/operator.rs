use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pauli::{Pauli, PauliString, PauliTerm, QubitOperator};

/// One creation (`dagger = true`) or annihilation operator on a spin orbital.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ladder {
    pub index: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(index: usize) -> Self {
        Ladder { index, dagger: true }
    }

    pub fn annihilate(index: usize) -> Self {
        Ladder { index, dagger: false }
    }
}

/// Linear combination of products of ladder operators.
///
/// Products are stored as written (no normal ordering is imposed).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FermionOperator {
    pub terms: Vec<(Vec<Ladder>, Complex64)>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        FermionOperator { terms: vec![(Vec::new(), Complex64::new(1.0, 0.0))] }
    }

    pub fn term(coeff: Complex64, ops: Vec<Ladder>) -> Self {
        FermionOperator { terms: vec![(ops, coeff)] }
    }

    /// `a†_p a_q`.
    pub fn hop(p: usize, q: usize) -> Self {
        Self::term(Complex64::new(1.0, 0.0), vec![Ladder::create(p), Ladder::annihilate(q)])
    }

    pub fn push(&mut self, coeff: Complex64, ops: Vec<Ladder>) {
        self.terms.push((ops, coeff));
    }

    pub fn add(&self, other: &FermionOperator) -> FermionOperator {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FermionOperator { terms }
    }

    pub fn scale(&self, s: Complex64) -> FermionOperator {
        FermionOperator { terms: self.terms.iter().map(|(o, c)| (o.clone(), c * s)).collect() }
    }

    /// Hermitian adjoint: reverse each product, flip daggers, conjugate.
    pub fn dagger(&self) -> FermionOperator {
        FermionOperator {
            terms: self
                .terms
                .iter()
                .map(|(ops, c)| {
                    let ops = ops.iter().rev().map(|l| Ladder { index: l.index, dagger: !l.dagger }).collect();
                    (ops, c.conj())
                })
                .collect(),
        }
    }

    /// `A - A†`.
    pub fn anti_hermitian_part(&self) -> FermionOperator {
        self.add(&self.dagger().scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &FermionOperator) -> FermionOperator {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut ops = a.clone();
                ops.extend_from_slice(b);
                terms.push((ops, ca * cb));
            }
        }
        FermionOperator { terms }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.iter().flat_map(|(o, _)| o.iter().map(|l| l.index)).max()
    }
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (ops, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", crate::pauli::format_complex(*c))?;
            for l in ops {
                write!(f, " a{}{}", l.index, if l.dagger { "^" } else { "" })?;
            }
        }
        Ok(())
    }
}

/// Jordan–Wigner image of one ladder operator:
/// `a_j = Z_0…Z_{j-1} (X_j + iY_j)/2`, `a†_j = Z_0…Z_{j-1} (X_j − iY_j)/2`.
pub fn jw_ladder(l: Ladder) -> QubitOperator {
    let chain = (1u64 << l.index) - 1;
    let x = PauliString::from_letters(&[(l.index, Pauli::X)]);
    let y = PauliString::from_letters(&[(l.index, Pauli::Y)]);
    let sign = if l.dagger { -1.0 } else { 1.0 };
    QubitOperator::from_terms([
        PauliTerm::new(Complex64::new(0.5, 0.0), PauliString::new(x.x, x.z | chain)),
        PauliTerm::new(Complex64::new(0.0, 0.5 * sign), PauliString::new(y.x, y.z | chain)),
    ])
}

/// Jordan–Wigner encoding of a fermionic operator.
pub fn jordan_wigner(op: &FermionOperator) -> QubitOperator {
    let mut out = QubitOperator::zero();
    for (ops, coeff) in &op.terms {
        let mut prod = QubitOperator::identity(1.0);
        for &l in ops {
            prod = &prod * &jw_ladder(l);
            if prod.is_zero() {
                break;
            }
        }
        out += &prod.scale(*coeff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::to_dense;
    use nalgebra::DMatrix;

    fn dense(op: &QubitOperator, n: usize) -> DMatrix<Complex64> {
        to_dense(op, n).unwrap()
    }

    #[test]
    fn number_operator() {
        let n0 = jordan_wigner(&FermionOperator::hop(0, 0));
        let expect = QubitOperator::from_terms([PauliTerm::real(0.5, &[]), PauliTerm::real(-0.5, &[(0, Pauli::Z)])]);
        assert!(n0.max_difference(&expect) < 1e-15);
    }

    #[test]
    fn single_hop_generator() {
        // a†0 a1 − h.c. → (i/2)(X0 Y1 − Y0 X1)
        let g = jordan_wigner(&FermionOperator::hop(0, 1).anti_hermitian_part());
        let expect = QubitOperator::from_terms([
            PauliTerm::new(Complex64::new(0.0, 0.5), PauliString::from_letters(&[(0, Pauli::X), (1, Pauli::Y)])),
            PauliTerm::new(Complex64::new(0.0, -0.5), PauliString::from_letters(&[(0, Pauli::Y), (1, Pauli::X)])),
        ]);
        assert!(g.max_difference(&expect) < 1e-15, "{}", g.to_text());
        // and as matrices
        assert!((dense(&g, 2) - dense(&expect, 2)).norm() < 1e-12);
    }

    #[test]
    fn canonical_anticommutation() {
        let n = 4;
        let id = DMatrix::<Complex64>::identity(1 << n, 1 << n);
        for i in 0..n {
            for j in 0..n {
                let a = dense(&jw_ladder(Ladder::annihilate(i)), n);
                let ad = dense(&jw_ladder(Ladder::create(j)), n);
                let anti = &a * &ad + &ad * &a;
                let expect = if i == j { id.clone() } else { DMatrix::zeros(1 << n, 1 << n) };
                assert!((anti - expect).norm() < 1e-12, "i={i} j={j}");
                let aj = dense(&jw_ladder(Ladder::annihilate(j)), n);
                assert!((&a * &aj + &aj * &a).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dagger_reverses_products() {
        let op = FermionOperator::term(Complex64::new(0.0, 2.0), vec![Ladder::create(3), Ladder::annihilate(1)]);
        let d = op.dagger();
        assert_eq!(d.terms[0].0, vec![Ladder::create(1), Ladder::annihilate(3)]);
        assert_eq!(d.terms[0].1, Complex64::new(0.0, -2.0));
    }
}
