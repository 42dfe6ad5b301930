//! State-preparation compilers for UCC excitation products.
//!
//! Every strategy fixes its Trotter order: individual and commuting-sets
//! follow the pool order; the chemically aware compiler emits paired
//! doubles first and the remaining excitations in pool order. Each circuit
//! starts with X gates preparing the reference determinant.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Angle, Circuit, Gate};
use crate::clifford::{diagonalize, phase_polynomial};
use crate::error::{Error, Result};
use crate::fermion::Excitation;
use crate::model::MolecularModel;
use crate::par::Execution;
use crate::pauli::{Pauli, PauliString};
use crate::symmetry::{all_symmetries, filter_excitations};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Individual,
    Commuting,
    Chemaware,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Individual, Strategy::Commuting, Strategy::Chemaware];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Individual => "individual",
            Strategy::Commuting => "commuting",
            Strategy::Chemaware => "chemaware",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "individual" => Ok(Strategy::Individual),
            "commuting" | "commuting-sets" => Ok(Strategy::Commuting),
            "chemaware" | "chemically-aware" => Ok(Strategy::Chemaware),
            _ => Err(Error::InvalidArgument(format!("unknown strategy `{s}`"))),
        }
    }
}

fn reference_layer(c: &mut Circuit, reference: u64) {
    for q in 0..c.n_qubits {
        if reference >> q & 1 == 1 {
            c.x(q);
        }
    }
}

/// `(string, scale)` pairs with `exp(θ G) = Π exp(−i (scale·θ) P / 2)`.
///
/// A generator term `i·c·P` contributes scale `−2c`.
fn rotation_terms(exc: &Excitation) -> Vec<(PauliString, f64)> {
    exc.jw_generator()
        .terms()
        .map(|t| {
            debug_assert!(t.coeff.re.abs() < 1e-14, "generator must be anti-Hermitian");
            (t.string, -2.0 * t.coeff.im)
        })
        .collect()
}

/// Basis change, CX ladder onto the last qubit, `Rz`, and the mirror.
fn pauli_gadget(c: &mut Circuit, p: &PauliString, angle: Angle) {
    let letters: Vec<(usize, Pauli)> = p.letters().collect();
    for &(q, l) in &letters {
        match l {
            Pauli::X => c.h(q),
            Pauli::Y => c.rx(q, Angle::Literal(FRAC_PI_2)),
            Pauli::Z => {}
        }
    }
    for w in letters.windows(2) {
        c.cx(w[0].0, w[1].0);
    }
    if let Some(&(last, _)) = letters.last() {
        c.rz(last, angle);
    }
    for w in letters.windows(2).rev() {
        c.cx(w[0].0, w[1].0);
    }
    for &(q, l) in &letters {
        match l {
            Pauli::X => c.h(q),
            Pauli::Y => c.rx(q, Angle::Literal(-FRAC_PI_2)),
            Pauli::Z => {}
        }
    }
}

fn individual_block(exc: &Excitation, n_qubits: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    for (p, scale) in rotation_terms(exc) {
        pauli_gadget(&mut c, &p, Angle::symbol(exc.parameter.clone(), scale));
    }
    c
}

fn commuting_block(exc: &Excitation, n_qubits: usize) -> Result<Circuit> {
    let terms = rotation_terms(exc);
    let strings: Vec<PauliString> = terms.iter().map(|(s, _)| *s).collect();
    let d = diagonalize(&strings, n_qubits)?;
    let mut c = Circuit::new(n_qubits);
    for g in &d.gates {
        c.push(g.clone());
    }
    let pivots = d
        .gates
        .iter()
        .filter_map(|g| match g {
            Gate::Cx { control, .. } => Some(1u64 << control),
            _ => None,
        })
        .fold(0u64, |m, b| m | b);
    let diag: Vec<(u64, Angle)> = terms
        .iter()
        .zip(&d.images)
        .map(|((_, scale), im)| (im.string.z, Angle::symbol(exc.parameter.clone(), scale * im.sign())))
        .collect();
    phase_polynomial(&diag, pivots, &mut c);
    for g in d.inverse_gates() {
        c.push(g);
    }
    Ok(c)
}

fn concat(n_qubits: usize, reference: u64, blocks: Vec<Circuit>) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    reference_layer(&mut c, reference);
    for b in &blocks {
        c.extend(b);
    }
    c
}

/// One Pauli gadget per Jordan–Wigner term, pool order.
pub fn synth_individual(pool: &[Excitation], n_qubits: usize, reference: u64) -> Circuit {
    synth_individual_with(pool, n_qubits, reference, Execution::default())
}

pub fn synth_individual_with(pool: &[Excitation], n_qubits: usize, reference: u64, exec: Execution) -> Circuit {
    let blocks = exec.map_slice(pool, |e| individual_block(e, n_qubits));
    concat(n_qubits, reference, blocks)
}

/// Each excitation as one commuting set: Clifford diagonalization, a Gray
/// ordered phase polynomial, and the inverse Clifford. Pool order.
pub fn synth_commuting_sets(pool: &[Excitation], n_qubits: usize, reference: u64) -> Result<Circuit> {
    synth_commuting_sets_with(pool, n_qubits, reference, Execution::default())
}

pub fn synth_commuting_sets_with(
    pool: &[Excitation],
    n_qubits: usize,
    reference: u64,
    exec: Execution,
) -> Result<Circuit> {
    let blocks = exec.map_slice(pool, |e| commuting_block(e, n_qubits)).into_iter().collect::<Result<_>>()?;
    Ok(concat(n_qubits, reference, blocks))
}

/// `exp(θ (i/2)(Y_q X_p − X_q Y_p))` with two CX: conjugating by
/// `CX(q→p)·H(q)` maps the generator to `−(i/2)(Y_q + Y_p)`.
pub fn paired_double_gadget(c: &mut Circuit, q: usize, p: usize, parameter: &str) {
    c.h(q);
    c.cx(q, p);
    c.ry(q, Angle::symbol(parameter, 1.0));
    c.ry(p, Angle::symbol(parameter, 1.0));
    c.cx(q, p);
    c.h(q);
}

/// Survivors of symmetry filtering, paired doubles first, then the rest in
/// pool order: the Trotter order of the chemically aware circuit.
pub fn chemaware_order(model: &MolecularModel, pool: &[Excitation]) -> Vec<Excitation> {
    let kept = filter_excitations(pool, &all_symmetries(model), model);
    let (mut paired, rest): (Vec<_>, Vec<_>) = kept.into_iter().partition(|e| e.is_paired() && pair_space_ok(model, e));
    paired.extend(rest);
    paired
}

/// A paired double can be compacted when both of its spatial orbitals are
/// closed (doubly occupied or empty) in the reference.
fn pair_space_ok(model: &MolecularModel, e: &Excitation) -> bool {
    e.spatial_pair
        .is_some_and(|(q, p)| [q, p].iter().all(|&s| model.is_occupied(2 * s) == model.is_occupied(2 * s + 1)))
}

/// Three-stage compiler: symmetry filtering, paired doubles as two-CX
/// gadgets on even qubits followed by one copy CX per spatial orbital they
/// touch, then the remaining excitations as commuting sets.
pub fn synth_chemically_aware(model: &MolecularModel, pool: &[Excitation]) -> Result<Circuit> {
    let n = model.n_spin_orbitals;
    let order = chemaware_order(model, pool);
    let n_paired = order.iter().take_while(|e| e.is_paired() && pair_space_ok(model, e)).count();
    let (paired, rest) = order.split_at(n_paired);

    let pair_space: Vec<usize> = {
        let mut v: Vec<usize> = paired
            .iter()
            .flat_map(|e| {
                let (q, p) = e.spatial_pair.expect("paired");
                [q, p]
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };

    let mut c = Circuit::new(n);
    for s in 0..model.n_spatial() {
        let (a, b) = (model.is_occupied(2 * s), model.is_occupied(2 * s + 1));
        if pair_space.contains(&s) {
            if a {
                c.x(2 * s);
            }
        } else {
            if a {
                c.x(2 * s);
            }
            if b {
                c.x(2 * s + 1);
            }
        }
    }
    for e in paired {
        let (q, p) = e.spatial_pair.expect("paired");
        paired_double_gadget(&mut c, 2 * q, 2 * p, &e.parameter);
    }
    for &s in &pair_space {
        c.cx(2 * s, 2 * s + 1);
    }
    let blocks =
        Execution::default().map_slice(rest, |e| commuting_block(e, n)).into_iter().collect::<Result<Vec<_>>>()?;
    for b in &blocks {
        c.extend(b);
    }
    Ok(c)
}

/// Compiles `pool` for `model` with the given strategy.
pub fn synthesize(model: &MolecularModel, pool: &[Excitation], strategy: Strategy) -> Result<Circuit> {
    let n = model.n_spin_orbitals;
    let hf = model.hf_bits();
    match strategy {
        Strategy::Individual => Ok(synth_individual(pool, n, hf)),
        Strategy::Commuting => synth_commuting_sets(pool, n, hf),
        Strategy::Chemaware => synth_chemically_aware(model, pool),
    }
}

/// The excitation order realised by `strategy`.
pub fn trotter_order(model: &MolecularModel, pool: &[Excitation], strategy: Strategy) -> Vec<Excitation> {
    match strategy {
        Strategy::Individual | Strategy::Commuting => pool.to_vec(),
        Strategy::Chemaware => chemaware_order(model, pool),
    }
}
