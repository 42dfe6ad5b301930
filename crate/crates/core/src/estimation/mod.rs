//! Measurement circuits for commuting term sets, Hamiltonian averaging,
//! symmetry verification by post-selection (PMSV) and by mid-circuit
//! measurement (MMSV), and Jensen–Shannon divergence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::clifford::{diagonalize, SignedPauli};
use crate::error::{Error, Result};
use crate::model::MolecularModel;
use crate::par::Execution;
use crate::pauli::{PauliString, PauliTerm, QubitOperator};
use crate::sim::{exact_distribution, run_with_midcircuit, sample, NoiseSpec, SampleConfig, ShotTable};
use crate::symmetry::{number_parity_symmetries, point_group_z2_symmetries, SymmetryOperator};

/// How a term or verifier is read from the final measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Readout {
    /// Qubits whose outcome parity gives the eigenvalue.
    pub mask: u64,
    /// `+1` or `−1`: the diagonalized image is `sign · Z_mask`.
    pub sign: i8,
}

impl Readout {
    fn from_image(img: &SignedPauli) -> Self {
        debug_assert_eq!(img.string.x, 0);
        Readout { mask: img.string.z, sign: if img.negative { -1 } else { 1 } }
    }

    /// Eigenvalue for a measured register.
    pub fn value(&self, bits: u64) -> f64 {
        let parity = if (bits & self.mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        f64::from(self.sign) * parity
    }
}

/// Mutually commuting terms measured by one circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSet {
    pub terms: Vec<PauliTerm>,
    pub verifiers: Vec<SymmetryOperator>,
    /// Clifford gates mapping every term and verifier to a Z-string.
    pub diagonalizer: Vec<Gate>,
    /// One entry per term.
    pub readout: Vec<Readout>,
    /// One entry per verifier.
    pub verifier_readout: Vec<Readout>,
}

impl MeasurementSet {
    fn build(terms: Vec<PauliTerm>, verifiers: Vec<SymmetryOperator>, n_qubits: usize) -> Result<Self> {
        let strings: Vec<PauliString> =
            terms.iter().map(|t| t.string).chain(verifiers.iter().map(|v| v.pauli)).collect();
        let d = diagonalize(&strings, n_qubits)?;
        let mut readout: Vec<Readout> = d.images.iter().map(Readout::from_image).collect();
        let verifier_readout = readout.split_off(terms.len());
        Ok(MeasurementSet { terms, verifiers, diagonalizer: d.gates, readout, verifier_readout })
    }

    pub fn is_verified(&self) -> bool {
        !self.verifiers.is_empty()
    }

    /// Parity bit a verifier must read for a shot to be kept.
    pub fn expected_parity(&self, k: usize) -> u8 {
        let s = self.verifiers[k].sector * self.verifier_readout[k].sign;
        u8::from(s < 0)
    }

    /// Appends the diagonalizer and terminal measurements (qubit `q` to bit
    /// `offset + q`) to a bound state-preparation circuit.
    pub fn measurement_circuit(&self, prep: &Circuit) -> Circuit {
        let mut c = prep.clone();
        for g in &self.diagonalizer {
            c.push(g.clone());
        }
        for q in 0..c.n_qubits {
            c.measure(q);
        }
        c
    }
}

/// Greedy colouring of the non-identity terms under term-wise commutation.
/// Terms are visited by descending coefficient magnitude, ties in
/// canonical order, and each joins the first set it commutes with.
pub fn partition_terms(op: &QubitOperator) -> Result<Vec<MeasurementSet>> {
    let n = op.n_qubits();
    let mut terms: Vec<PauliTerm> = op.without_identity().terms().collect();
    terms.sort_by(|a, b| b.coeff.norm().total_cmp(&a.coeff.norm()).then(a.string.cmp(&b.string)));
    let mut groups: Vec<Vec<PauliTerm>> = Vec::new();
    for t in terms {
        match groups.iter_mut().find(|g| g.iter().all(|u| u.string.commutes(&t.string))) {
            Some(g) => g.push(t),
            None => groups.push(vec![t]),
        }
    }
    groups.into_iter().map(|g| MeasurementSet::build(g, Vec::new(), n)).collect()
}

/// Adds each symmetry to every set whose terms all commute with it and
/// rebuilds the diagonalizers so the verifiers are read out as well.
pub fn attach_verifiers(sets: &[MeasurementSet], syms: &[SymmetryOperator]) -> Result<Vec<MeasurementSet>> {
    let n = sets
        .iter()
        .flat_map(|s| s.terms.iter().map(|t| t.string).chain(s.verifiers.iter().map(|v| v.pauli)))
        .chain(syms.iter().map(|s| s.pauli))
        .filter_map(|p| p.max_qubit())
        .max()
        .map_or(0, |q| q + 1);
    sets.iter()
        .map(|s| {
            let mut verifiers = s.verifiers.clone();
            for sym in syms {
                if s.terms.iter().all(|t| t.string.commutes(&sym.pauli)) && !verifiers.contains(sym) {
                    verifiers.push(sym.clone());
                }
            }
            MeasurementSet::build(s.terms.clone(), verifiers, n)
        })
        .collect()
}

/// Keeps the shots whose verifier parities all match the expected sector.
pub fn pmsv_postselect(table: &ShotTable, set: &MeasurementSet) -> Result<ShotTable> {
    postselect_on(table, set, |_| true)
}

/// As [`pmsv_postselect`], restricted to the verifiers accepted by `use_it`.
pub fn postselect_on(
    table: &ShotTable,
    set: &MeasurementSet,
    use_it: impl Fn(&SymmetryOperator) -> bool,
) -> Result<ShotTable> {
    let covered = if table.n_bits >= 64 { u64::MAX } else { (1u64 << table.n_bits) - 1 };
    let checks: Vec<(u64, u8)> = (0..set.verifiers.len())
        .filter(|&k| use_it(&set.verifiers[k]))
        .map(|k| (set.verifier_readout[k].mask, set.expected_parity(k)))
        .collect();
    if let Some((mask, _)) = checks.iter().find(|(m, _)| m & !covered != 0) {
        return Err(Error::InvalidArgument(format!("verifier support {mask:#b} is not covered by measured bits")));
    }
    Ok(table.filter(|bits| checks.iter().all(|&(m, x)| (bits & m).count_ones() % 2 == x as u32)))
}

/// Mid-circuit verification of a Z-type symmetry, in place: a CX cascade
/// from the support onto its highest qubit, a measurement of that qubit
/// into a fresh bit, a reset followed by a conditional X that restores the
/// measured parity, and the mirrored cascade. Costs `2(w − 1)` CX gates
/// for a weight-`w` symmetry. Returns the circuit and the new bit, which
/// reads the symmetry's parity `x` (eigenvalue `(−1)^x`).
pub fn mmsv_instrument(c: &Circuit, sym: &SymmetryOperator) -> Result<(Circuit, usize)> {
    if sym.pauli.x != 0 {
        return Err(Error::NonDiagonalSymmetry(sym.label.clone()));
    }
    let support: Vec<usize> = (0..64).filter(|q| sym.pauli.z >> q & 1 == 1).collect();
    let Some((&target, rest)) = support.split_last() else {
        return Err(Error::InvalidArgument(format!("symmetry `{}` is the identity", sym.label)));
    };
    let mut out = c.clone();
    out.n_qubits = out.n_qubits.max(target + 1);
    for &q in rest {
        out.cx(q, target);
    }
    let bit = out.measure(target);
    out.push(Gate::Reset { qubit: target });
    out.push(Gate::ConditionalX { bit, qubit: target });
    for &q in rest.iter().rev() {
        out.cx(q, target);
    }
    Ok((out, bit))
}

/// Energy and its standard error, in hartree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Assembles `⟨op⟩` from one table per set. Each set contributes the sample
/// mean of `Σ c_t v_t` over its shots, and its variance divided by the
/// shot count; sets are independent.
pub fn estimate_energy(op: &QubitOperator, sets: &[MeasurementSet], tables: &[ShotTable]) -> Result<Estimate> {
    if sets.len() != tables.len() {
        return Err(Error::InvalidArgument(format!("{} sets but {} tables", sets.len(), tables.len())));
    }
    let mut value = op.identity_coefficient().re;
    let mut var = 0.0;
    for (set, table) in sets.iter().zip(tables) {
        let n = table.shots;
        if n == 0 {
            return Err(Error::EmptyPostSelection);
        }
        let (mut s1, mut s2) = (0.0, 0.0);
        for (&bits, &count) in &table.counts {
            let x: f64 = set.terms.iter().zip(&set.readout).map(|(t, r)| t.coeff.re * r.value(bits)).sum();
            s1 += x * count as f64;
            s2 += x * x * count as f64;
        }
        let mean = s1 / n as f64;
        value += mean;
        if n > 1 {
            let sample_var = ((s2 - n as f64 * mean * mean) / (n - 1) as f64).max(0.0);
            var += sample_var / n as f64;
        }
    }
    Ok(Estimate { value, stderr: var.sqrt() })
}

/// `⟨op⟩` from exact outcome probabilities of each measurement circuit.
pub fn estimate_from_distributions(op: &QubitOperator, sets: &[MeasurementSet], dists: &[BTreeMap<u64, f64>]) -> f64 {
    op.identity_coefficient().re
        + sets
            .iter()
            .zip(dists)
            .map(|(set, d)| {
                d.iter()
                    .map(|(&bits, &p)| {
                        p * set.terms.iter().zip(&set.readout).map(|(t, r)| t.coeff.re * r.value(bits)).sum::<f64>()
                    })
                    .sum::<f64>()
            })
            .sum::<f64>()
}

fn normalized(d: &BTreeMap<u64, f64>) -> Result<BTreeMap<u64, f64>> {
    let total: f64 = d.values().sum();
    if total <= 0.0 {
        return Err(Error::EmptyDistributions);
    }
    Ok(d.iter().map(|(&k, &v)| (k, v / total)).collect())
}

/// Jensen–Shannon divergence with base-2 logarithms, in `[0, 1]`.
/// Inputs are normalized first.
pub fn jsd(p: &BTreeMap<u64, f64>, q: &BTreeMap<u64, f64>) -> Result<f64> {
    let (p, q) = (normalized(p)?, normalized(q)?);
    let mut keys: Vec<u64> = p.keys().chain(q.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let mut d = 0.0;
    for k in keys {
        let (a, b) = (p.get(&k).copied().unwrap_or(0.0), q.get(&k).copied().unwrap_or(0.0));
        let m = 0.5 * (a + b);
        if a > 0.0 {
            d += 0.5 * a * (a / m).log2();
        }
        if b > 0.0 {
            d += 0.5 * b * (b / m).log2();
        }
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Error-mitigation choice for sampled estimates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mitigation {
    #[default]
    None,
    /// Total electron-number parity.
    Pmsv1,
    /// Alpha and beta parities plus the point-group Z₂ strings.
    Pmsv2,
    /// Total parity checked by a mid-circuit measurement.
    Mmsv,
}

impl Mitigation {
    pub const ALL: [Mitigation; 4] = [Mitigation::None, Mitigation::Pmsv1, Mitigation::Pmsv2, Mitigation::Mmsv];

    pub fn name(self) -> &'static str {
        match self {
            Mitigation::None => "none",
            Mitigation::Pmsv1 => "pmsv1",
            Mitigation::Pmsv2 => "pmsv2",
            Mitigation::Mmsv => "mmsv",
        }
    }

    /// Symmetries verified by post-selection.
    pub fn verifiers(self, model: &MolecularModel) -> Vec<SymmetryOperator> {
        let parities = number_parity_symmetries(model);
        match self {
            Mitigation::None | Mitigation::Mmsv => Vec::new(),
            Mitigation::Pmsv1 => vec![parities[2].clone()],
            Mitigation::Pmsv2 => {
                let mut v = parities[..2].to_vec();
                v.extend(point_group_z2_symmetries(model));
                v
            }
        }
    }
}

impl fmt::Display for Mitigation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mitigation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mitigation::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown mitigation `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseSpec>,
    pub mitigation: Mitigation,
    #[serde(skip)]
    pub exec: Execution,
}

impl EstimateOptions {
    pub fn new(shots: u64, seed: u64) -> Self {
        EstimateOptions { shots, seed, noise: None, mitigation: Mitigation::None, exec: Execution::default() }
    }
}

/// Result of a sampled estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledEnergy {
    pub estimate: Estimate,
    pub circuits: usize,
    pub shots_taken: u64,
    pub shots_kept: u64,
    /// Extra two-qubit gates added by mid-circuit verification, per circuit.
    pub verification_two_qubit_gates: usize,
    /// Post-selected tables, one per measurement circuit.
    #[serde(skip)]
    pub tables: Vec<ShotTable>,
}

/// Seed of the `k`-th measurement circuit.
pub fn circuit_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Samples the measurement circuit of every set on `prep` (no
/// post-selection). Circuit `k` uses seed [`circuit_seed`]`(seed, k)`.
pub fn sample_sets(
    prep: &Circuit,
    sets: &[MeasurementSet],
    shots: u64,
    seed: u64,
    noise: Option<NoiseSpec>,
    exec: Execution,
) -> Result<Vec<ShotTable>> {
    exec.map(sets.len(), |k| {
        let mut cfg = SampleConfig::new(shots, circuit_seed(seed, k));
        cfg.noise = noise;
        cfg.exec = Execution::Sequential;
        let c = sets[k].measurement_circuit(prep);
        if c.gates.iter().any(|g| matches!(g, Gate::Reset { .. } | Gate::ConditionalX { .. })) {
            run_with_midcircuit(&c, &cfg).map(|r| r.1)
        } else {
            sample(&c, &cfg)
        }
    })
    .into_iter()
    .collect()
}

/// Estimates `⟨prep|op|prep⟩` by sampling one measurement circuit per
/// commuting set and applying the chosen mitigation.
pub fn estimate_sampled(
    model: &MolecularModel,
    prep: &Circuit,
    op: &QubitOperator,
    opts: &EstimateOptions,
) -> Result<SampledEnergy> {
    let sets = attach_verifiers(&partition_terms(op)?, &opts.mitigation.verifiers(model))?;
    let total = &number_parity_symmetries(model)[2];
    let (prep, mmsv_bit) = if opts.mitigation == Mitigation::Mmsv {
        let (c, bit) = mmsv_instrument(prep, total)?;
        (c, Some(bit))
    } else {
        (prep.clone(), None)
    };
    let verification_two_qubit_gates = if mmsv_bit.is_some() { 2 * (total.pauli.weight() - 1) } else { 0 };
    let raw = sample_sets(&prep, &sets, opts.shots, opts.seed, opts.noise, opts.exec)?;
    let shots_taken = raw.iter().map(|t| t.shots).sum();
    let tables = raw
        .iter()
        .zip(&sets)
        .map(|(t, set)| match mmsv_bit {
            Some(b) => {
                let x = total.parity() as u64;
                Ok(shift_table(&t.filter(|bits| bits >> b & 1 == x), b + 1, prep.n_qubits))
            }
            None => pmsv_postselect(t, set),
        })
        .collect::<Result<Vec<_>>>()?;
    let shots_kept = tables.iter().map(|t| t.shots).sum();
    let estimate = estimate_energy(op, &sets, &tables)?;
    Ok(SampledEnergy { estimate, circuits: sets.len(), shots_taken, shots_kept, verification_two_qubit_gates, tables })
}

/// Drops the first `offset` bits of every register.
fn shift_table(t: &ShotTable, offset: usize, n_bits: usize) -> ShotTable {
    let mut out = ShotTable::new(n_bits);
    for (&bits, &count) in &t.counts {
        out.record(bits >> offset, count);
    }
    out
}

/// Exact expectation through the measurement-circuit pipeline
/// (infinite-shot limit).
pub fn estimate_exact(prep: &Circuit, op: &QubitOperator) -> Result<f64> {
    let sets = partition_terms(op)?;
    let dists = sets.iter().map(|s| exact_distribution(&s.measurement_circuit(prep))).collect::<Result<Vec<_>>>()?;
    Ok(estimate_from_distributions(op, &sets, &dists))
}
