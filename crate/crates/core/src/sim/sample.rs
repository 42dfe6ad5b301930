//! Shot sampling, stochastic Pauli noise and per-shot trajectories.
//!
//! Randomness: every shot owns a ChaCha20 stream keyed by the master seed
//! (`ChaCha20Rng::seed_from_u64(seed)`) with the stream number set to the
//! shot index, so results do not depend on how shots are scheduled.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::pauli::Pauli;

/// Counts keyed by classical register value (bit 0 is the least
/// significant bit and the rightmost printed character).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotTable {
    pub n_bits: usize,
    pub shots: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl ShotTable {
    pub fn new(n_bits: usize) -> Self {
        ShotTable { n_bits, ..Default::default() }
    }

    pub fn record(&mut self, bits: u64, count: u64) {
        if count > 0 {
            *self.counts.entry(bits).or_insert(0) += count;
            self.shots += count;
        }
    }

    pub fn format_bits(&self, bits: u64) -> String {
        (0..self.n_bits).rev().map(|b| if bits >> b & 1 == 1 { '1' } else { '0' }).collect()
    }

    pub fn count(&self, bitstring: &str) -> u64 {
        u64::from_str_radix(bitstring, 2).ok().and_then(|b| self.counts.get(&b).copied()).unwrap_or(0)
    }

    /// Keeps shots satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(u64) -> bool) -> ShotTable {
        let mut t = ShotTable::new(self.n_bits);
        for (&b, &c) in &self.counts {
            if keep(b) {
                t.record(b, c);
            }
        }
        t
    }

    /// Normalized distribution.
    pub fn distribution(&self) -> BTreeMap<u64, f64> {
        let total = self.shots.max(1) as f64;
        self.counts.iter().map(|(&b, &c)| (b, c as f64 / total)).collect()
    }

    /// `bitstring,count` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("# little-endian: bit 0 is the rightmost character\nbitstring,count\n");
        for (&b, &c) in &self.counts {
            let _ = writeln!(s, "{},{c}", self.format_bits(b));
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        let counts: BTreeMap<String, u64> = self.counts.iter().map(|(&b, &c)| (self.format_bits(b), c)).collect();
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "bit_order": "little-endian (bit 0 rightmost)",
            "n_bits": self.n_bits,
            "shots": self.shots,
            "counts": counts,
        }))?)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Probability of a uniformly random non-identity two-qubit Pauli after
    /// each CX.
    pub two_qubit_depolarizing_p: f64,
    /// Independent flip probability of each measured bit.
    pub measurement_flip_p: f64,
}

impl NoiseSpec {
    pub fn depolarizing(p: f64) -> Self {
        NoiseSpec { two_qubit_depolarizing_p: p, measurement_flip_p: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.two_qubit_depolarizing_p, self.measurement_flip_p] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseSpec>,
    pub exec: Execution,
}

impl SampleConfig {
    pub fn new(shots: u64, seed: u64) -> Self {
        SampleConfig { shots, seed, noise: None, exec: Execution::default() }
    }

    pub fn with_noise(mut self, noise: NoiseSpec) -> Self {
        self.noise = Some(noise);
        self
    }
}

pub fn shot_rng(seed: u64, shot: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

const PAULIS: [Option<Pauli>; 4] = [None, Some(Pauli::X), Some(Pauli::Y), Some(Pauli::Z)];

/// One of the 15 non-identity two-qubit Paulis.
fn random_two_qubit_pauli(rng: &mut ChaCha20Rng) -> (Option<Pauli>, Option<Pauli>) {
    let k = rng.random_range(1..16usize);
    (PAULIS[k & 3], PAULIS[k >> 2])
}

/// Pre-drawn error events for one shot: CX index → Pauli pair.
type Faults = Vec<(usize, (Option<Pauli>, Option<Pauli>))>;

fn draw_faults(c: &Circuit, p: f64, rng: &mut ChaCha20Rng) -> Faults {
    let mut faults = Vec::new();
    if p <= 0.0 {
        return faults;
    }
    for (k, g) in c.gates.iter().enumerate() {
        if matches!(g, Gate::Cx { .. }) && rng.random::<f64>() < p {
            faults.push((k, random_two_qubit_pauli(rng)));
        }
    }
    faults
}

/// Runs one trajectory from `|0…0⟩`, returning the classical register and
/// the final state.
pub fn run_trajectory(c: &Circuit, noise: Option<&NoiseSpec>, rng: &mut ChaCha20Rng) -> Result<(u64, StateVector)> {
    run_trajectory_from(StateVector::zero(c.n_qubits)?, c, noise, rng)
}

/// Like [`run_trajectory`] but starting from an arbitrary state.
pub fn run_trajectory_from(
    initial: StateVector,
    c: &Circuit,
    noise: Option<&NoiseSpec>,
    rng: &mut ChaCha20Rng,
) -> Result<(u64, StateVector)> {
    if initial.n_qubits != c.n_qubits {
        return Err(Error::InvalidArgument(format!("state has {} qubits, circuit {}", initial.n_qubits, c.n_qubits)));
    }
    let faults = draw_faults(c, noise.map_or(0.0, |n| n.two_qubit_depolarizing_p), rng);
    run_faulted(initial, c, noise, &faults, rng)
}

fn trajectory_with_faults(
    c: &Circuit,
    noise: Option<&NoiseSpec>,
    faults: &Faults,
    rng: &mut ChaCha20Rng,
    exec: Execution,
) -> Result<(u64, StateVector)> {
    run_faulted(StateVector::zero(c.n_qubits)?.with_execution(exec), c, noise, faults, rng)
}

fn run_faulted(
    mut state: StateVector,
    c: &Circuit,
    noise: Option<&NoiseSpec>,
    faults: &Faults,
    rng: &mut ChaCha20Rng,
) -> Result<(u64, StateVector)> {
    let flip_p = noise.map_or(0.0, |n| n.measurement_flip_p);
    let mut bits = 0u64;
    let mut written = 0u64;
    let mut next_fault = faults.iter().peekable();
    for (k, g) in c.gates.iter().enumerate() {
        match g {
            Gate::Measure { qubit, bit } => {
                let one = rng.random::<f64>() < state.prob_one(*qubit);
                state.collapse(*qubit, one);
                let flipped = flip_p > 0.0 && rng.random::<f64>() < flip_p;
                let value = one ^ flipped;
                bits = (bits & !(1 << bit)) | (u64::from(value) << bit);
                written |= 1 << bit;
            }
            Gate::Reset { qubit } => {
                let one = rng.random::<f64>() < state.prob_one(*qubit);
                state.collapse(*qubit, one);
                if one {
                    state.apply_pauli(*qubit, Pauli::X);
                }
            }
            Gate::ConditionalX { bit, qubit } => {
                if written >> bit & 1 == 0 {
                    return Err(Error::UnwrittenBit(*bit));
                }
                if bits >> bit & 1 == 1 {
                    state.apply_pauli(*qubit, Pauli::X);
                }
            }
            _ => state.apply_gate(g)?,
        }
        if let Some((_, (pa, pb))) = next_fault.next_if(|(idx, _)| *idx == k) {
            if let Gate::Cx { control, target } = g {
                if let Some(p) = pa {
                    state.apply_pauli(*control, *p);
                }
                if let Some(p) = pb {
                    state.apply_pauli(*target, *p);
                }
            }
        }
    }
    Ok((bits, state))
}

/// True when measurements are the last operation on their qubits and
/// nothing reads a classical bit, so outcomes can be drawn from the final
/// state.
fn terminal_measurements(c: &Circuit) -> bool {
    let mut measured = vec![false; c.n_qubits];
    for g in &c.gates {
        match g {
            Gate::Measure { qubit, .. } => {
                if measured[*qubit] {
                    return false;
                }
                measured[*qubit] = true;
            }
            Gate::Reset { .. } | Gate::ConditionalX { .. } => return false,
            _ => {
                if g.qubits().iter().any(|&q| measured[q]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Classical-register distribution of the noiseless circuit (terminal
/// measurements only), as a cumulative table for inverse-CDF draws.
struct Sampler {
    outcomes: Vec<u64>,
    cdf: Vec<f64>,
}

impl Sampler {
    fn new(c: &Circuit, exec: Execution) -> Result<Self> {
        let measures: Vec<(usize, usize)> = c
            .gates
            .iter()
            .filter_map(|g| match g {
                Gate::Measure { qubit, bit } => Some((*qubit, *bit)),
                _ => None,
            })
            .collect();
        let mut unitary = Circuit::new(c.n_qubits);
        unitary.gates = c.gates.iter().filter(|g| g.is_unitary()).cloned().collect();
        let mut state = StateVector::zero(c.n_qubits)?.with_execution(exec);
        state.apply_circuit(&unitary)?;
        let mut dist: BTreeMap<u64, f64> = BTreeMap::new();
        for (i, p) in state.probabilities().into_iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let reg = measures.iter().fold(0u64, |acc, &(q, b)| acc | (((i >> q) & 1) as u64) << b);
            *dist.entry(reg).or_insert(0.0) += p;
        }
        let mut acc = 0.0;
        let (outcomes, cdf) = dist
            .into_iter()
            .map(|(r, p)| {
                acc += p;
                (r, acc)
            })
            .unzip();
        Ok(Sampler { outcomes, cdf })
    }

    fn draw(&self, rng: &mut ChaCha20Rng) -> u64 {
        let total = *self.cdf.last().unwrap_or(&1.0);
        let u = rng.random::<f64>() * total;
        let k = self.cdf.partition_point(|&c| c <= u).min(self.outcomes.len() - 1);
        self.outcomes[k]
    }
}

/// Exact distribution of the classical register for a noiseless circuit
/// with terminal measurements.
pub fn exact_distribution(c: &Circuit) -> Result<BTreeMap<u64, f64>> {
    if !terminal_measurements(c) {
        return Err(Error::InvalidCircuit("exact distribution needs terminal measurements".into()));
    }
    let s = Sampler::new(c, Execution::default())?;
    let mut prev = 0.0;
    Ok(s.outcomes
        .iter()
        .zip(&s.cdf)
        .map(|(&o, &c)| {
            let p = c - prev;
            prev = c;
            (o, p)
        })
        .collect())
}

fn flip_bits(reg: u64, n_bits: usize, p: f64, rng: &mut ChaCha20Rng) -> u64 {
    if p <= 0.0 {
        return reg;
    }
    (0..n_bits).fold(reg, |r, b| if rng.random::<f64>() < p { r ^ 1 << b } else { r })
}

/// Samples a bound circuit `cfg.shots` times.
///
/// Shots without a fault are drawn from the cached noiseless distribution;
/// faulty shots and circuits with mid-circuit operations are simulated as
/// individual trajectories.
pub fn sample(c: &Circuit, cfg: &SampleConfig) -> Result<ShotTable> {
    Ok(tally(c.n_bits, &sample_shots(c, cfg)?))
}

/// Per-shot classical registers in shot order.
pub fn sample_shots(c: &Circuit, cfg: &SampleConfig) -> Result<Vec<u64>> {
    if cfg.shots == 0 {
        return Err(Error::ZeroShots);
    }
    if let Some(n) = &cfg.noise {
        n.validate()?;
    }
    c.validate()?;
    if !c.is_bound() {
        let name = c.gates.iter().find_map(|g| g.angle().and_then(|a| a.symbol_name())).unwrap_or("");
        return Err(Error::UnboundParameter(name.to_string()));
    }
    let noise = cfg.noise.as_ref();
    let p2 = noise.map_or(0.0, |n| n.two_qubit_depolarizing_p);
    let flip = noise.map_or(0.0, |n| n.measurement_flip_p);
    let sampler = if terminal_measurements(c) { Some(Sampler::new(c, cfg.exec)?) } else { None };
    let results = cfg.exec.map(cfg.shots as usize, |shot| -> Result<u64> {
        let mut rng = shot_rng(cfg.seed, shot as u64);
        let faults = draw_faults(c, p2, &mut rng);
        match &sampler {
            Some(s) if faults.is_empty() => {
                let reg = s.draw(&mut rng);
                Ok(flip_bits(reg, c.n_bits, flip, &mut rng))
            }
            _ => trajectory_with_faults(c, noise, &faults, &mut rng, Execution::Sequential).map(|(b, _)| b),
        }
    });
    results.into_iter().collect()
}

fn tally(n_bits: usize, shots: &[u64]) -> ShotTable {
    let mut t = ShotTable::new(n_bits);
    for &b in shots {
        t.record(b, 1);
    }
    t
}

/// Per-shot trajectory execution for circuits with mid-circuit
/// measurement, reset and classically conditioned gates. Returns the
/// register of every shot and their tally.
pub fn run_with_midcircuit(c: &Circuit, cfg: &SampleConfig) -> Result<(Vec<u64>, ShotTable)> {
    if cfg.shots == 0 {
        return Err(Error::ZeroShots);
    }
    c.validate()?;
    let noise = cfg.noise.as_ref();
    let p2 = noise.map_or(0.0, |n| n.two_qubit_depolarizing_p);
    let regs: Vec<u64> = cfg
        .exec
        .map(cfg.shots as usize, |shot| -> Result<u64> {
            let mut rng = shot_rng(cfg.seed, shot as u64);
            let faults = draw_faults(c, p2, &mut rng);
            trajectory_with_faults(c, noise, &faults, &mut rng, Execution::Sequential).map(|(b, _)| b)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let table = tally(c.n_bits, &regs);
    Ok((regs, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> Circuit {
        let mut c = Circuit::new(2);
        c.h(0);
        c.cx(0, 1);
        c.measure(0);
        c.measure(1);
        c
    }

    #[test]
    fn zero_state_always_reads_zero() {
        let mut c = Circuit::new(1);
        c.measure(0);
        let t = sample(&c, &SampleConfig::new(100, 7)).unwrap();
        assert_eq!(t.count("0"), 100);
        assert!(matches!(sample(&c, &SampleConfig::new(0, 7)), Err(Error::ZeroShots)));
    }

    #[test]
    fn bell_pair_statistics() {
        let n = 100_000u64;
        let t = sample(&bell(), &SampleConfig::new(n, 11)).unwrap();
        assert_eq!(t.count("00") + t.count("11"), n);
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((t.count("00") as f64 - n as f64 / 2.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn seeded_sampling_is_reproducible_across_execution_modes() {
        let noise = NoiseSpec { two_qubit_depolarizing_p: 0.2, measurement_flip_p: 0.05 };
        let mut cfg = SampleConfig::new(5000, 3).with_noise(noise);
        cfg.exec = Execution::Sequential;
        let a = sample(&bell(), &cfg).unwrap();
        cfg.exec = Execution::Parallel;
        let b = sample(&bell(), &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.count("01") + a.count("10") > 0);
    }

    #[test]
    fn zero_noise_equals_noiseless() {
        let cfg = SampleConfig::new(2000, 5);
        let a = sample(&bell(), &cfg).unwrap();
        let b = sample(&bell(), &cfg.with_noise(NoiseSpec::default())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn measure_then_reset_leaves_zero() {
        let mut c = Circuit::new(1);
        c.h(0);
        c.measure(0);
        c.push(Gate::Reset { qubit: 0 });
        for shot in 0..20 {
            let mut rng = shot_rng(1, shot);
            let (_, s) = run_trajectory(&c, None, &mut rng).unwrap();
            assert!((s.amplitudes[0].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn conditional_on_unwritten_bit_fails() {
        let mut c = Circuit::new(1);
        c.n_bits = 1;
        c.push(Gate::ConditionalX { bit: 0, qubit: 0 });
        assert!(matches!(run_with_midcircuit(&c, &SampleConfig::new(1, 0)), Err(Error::UnwrittenBit(0))));
    }

    #[test]
    fn csv_has_rightmost_bit_zero() {
        let mut c = Circuit::new(2);
        c.x(0);
        c.measure(0);
        c.measure(1);
        let t = sample(&c, &SampleConfig::new(3, 0)).unwrap();
        assert!(t.to_csv().contains("01,3"));
    }
}
