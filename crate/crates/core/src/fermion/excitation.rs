use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::{jordan_wigner, FermionOperator, Ladder};
use crate::error::{Error, Result};
use crate::model::MolecularModel;
use crate::pauli::{Pauli, PauliString, PauliTerm, QubitOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExcitationKind {
    Single,
    GenericDouble,
    PairedDouble,
}

/// A UCC excitation `τ − τ†` with its variational parameter.
///
/// `indices` lists the spin orbitals in operator order:
/// `[a, i]` is `a†_a a_i`, and `[a, i, b, j]` is `a†_a a_i a†_b a_j`.
/// Spin orbitals are alpha-beta interleaved: spatial orbital `p` owns
/// `2p` (alpha) and `2p + 1` (beta).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Excitation {
    pub kind: ExcitationKind,
    pub indices: Vec<usize>,
    pub parameter: String,
    /// `(from, to)` spatial orbitals of a paired double.
    pub spatial_pair: Option<(usize, usize)>,
}

impl Excitation {
    pub fn single(create: usize, annihilate: usize, parameter: impl Into<String>) -> Self {
        Excitation {
            kind: ExcitationKind::Single,
            indices: vec![create, annihilate],
            parameter: parameter.into(),
            spatial_pair: None,
        }
    }

    /// `a†_a a_i a†_b a_j − h.c.`; classified as paired when the indices
    /// follow `(2p, 2q, 2p+1, 2q+1)`.
    pub fn double(a: usize, i: usize, b: usize, j: usize, parameter: impl Into<String>) -> Self {
        let paired = a.is_multiple_of(2) && i.is_multiple_of(2) && b == a + 1 && j == i + 1 && a != i;
        Excitation {
            kind: if paired { ExcitationKind::PairedDouble } else { ExcitationKind::GenericDouble },
            indices: vec![a, i, b, j],
            parameter: parameter.into(),
            spatial_pair: paired.then_some((i / 2, a / 2)),
        }
    }

    /// The paired double moving an electron pair from spatial `q` to `p`.
    pub fn paired(q: usize, p: usize, parameter: impl Into<String>) -> Self {
        Self::double(2 * p, 2 * q, 2 * p + 1, 2 * q + 1, parameter)
    }

    pub fn is_paired(&self) -> bool {
        self.kind == ExcitationKind::PairedDouble
    }

    pub fn creation(&self) -> Vec<usize> {
        self.indices.iter().step_by(2).copied().collect()
    }

    pub fn annihilation(&self) -> Vec<usize> {
        self.indices.iter().skip(1).step_by(2).copied().collect()
    }

    /// The excitation operator `τ`.
    pub fn operator(&self) -> FermionOperator {
        let ops = self.indices.iter().enumerate().map(|(k, &idx)| Ladder { index: idx, dagger: k % 2 == 0 }).collect();
        FermionOperator::term(Complex64::new(1.0, 0.0), ops)
    }

    /// Anti-Hermitian generator `τ − τ†`.
    pub fn generator(&self) -> FermionOperator {
        self.operator().anti_hermitian_part()
    }

    /// Jordan–Wigner image of the generator.
    pub fn jw_generator(&self) -> QubitOperator {
        jordan_wigner(&self.generator())
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, idx) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "a{}{}", idx, if k % 2 == 0 { "^" } else { "" })?;
        }
        write!(f, " - h.c.")
    }
}

/// All spin-conserving occupied→virtual singles and doubles of the model's
/// reference, singles first, each group in ascending index order.
pub fn generate_uccsd_pool(model: &MolecularModel) -> Vec<Excitation> {
    let n = model.n_spin_orbitals;
    let occ: Vec<usize> = (0..n).filter(|&i| model.is_occupied(i)).collect();
    let virt: Vec<usize> = (0..n).filter(|&i| !model.is_occupied(i)).collect();
    let mut pool = Vec::new();
    let mut next = 0usize;
    let mut label = || {
        let s = format!("t{next}");
        next += 1;
        s
    };

    for &i in &occ {
        for &a in &virt {
            if i % 2 == a % 2 {
                pool.push(Excitation::single(a, i, label()));
            }
        }
    }

    for (x, &i) in occ.iter().enumerate() {
        for &j in &occ[x + 1..] {
            for (y, &a) in virt.iter().enumerate() {
                for &b in &virt[y + 1..] {
                    let sz_in = (i % 2) + (j % 2);
                    let sz_out = (a % 2) + (b % 2);
                    if sz_in != sz_out {
                        continue;
                    }
                    let (ca, ai, cb, bj) = if i % 2 == j % 2 {
                        (a, i, b, j)
                    } else {
                        // alpha pair first, beta pair second
                        let (ia, ib) = if i % 2 == 0 { (i, j) } else { (j, i) };
                        let (aa, ab) = if a % 2 == 0 { (a, b) } else { (b, a) };
                        (aa, ia, ab, ib)
                    };
                    pool.push(Excitation::double(ca, ai, cb, bj, label()));
                }
            }
        }
    }
    pool
}

/// Hard-core boson form of a paired double from spatial `q` to `p`:
/// `(i/2)(Y_{2q} X_{2p} − X_{2q} Y_{2p})`.
pub fn hardcore_boson_image(exc: &Excitation) -> Result<QubitOperator> {
    let (q, p) = match (exc.kind, exc.spatial_pair) {
        (ExcitationKind::PairedDouble, Some(pair)) => pair,
        _ => return Err(Error::NotPairedDouble(exc.to_string())),
    };
    let (qa, pa) = (2 * q, 2 * p);
    Ok(QubitOperator::from_terms([
        PauliTerm::new(Complex64::new(0.0, 0.5), PauliString::from_letters(&[(qa, Pauli::Y), (pa, Pauli::X)])),
        PauliTerm::new(Complex64::new(0.0, -0.5), PauliString::from_letters(&[(qa, Pauli::X), (pa, Pauli::Y)])),
    ]))
}
