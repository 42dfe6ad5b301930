//! Experiment descriptors, reaction-energy differencing and JSON reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuit::{prune, Circuit, ParamMap};
use crate::error::{Error, Result};
use crate::estimation::{estimate_sampled, jsd, EstimateOptions, Mitigation};
use crate::fermion::{generate_uccsd_pool, FermionOperator};
use crate::model::{hamiltonian_from_model, MolecularModel};
use crate::oracle::ground_energy;
use crate::sim::{exact_distribution, NoiseSpec};
use crate::spectra::{
    broaden, circuit_energy, complete_expansion, curve_csv, default_expansion, merge_degenerate, oscillator_strengths,
    qse_solve, transition_dipoles, vqe_optimize, Grid, QseEstimator, VqeConfig, DEFAULT_S_THRESHOLD,
    DEGENERACY_TOLERANCE,
};
use crate::synthesis::{synthesize, Strategy};

/// One participant of a reaction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReactionEntry {
    pub label: String,
    pub energy_hartree: f64,
    /// Negative for reactants, positive for products or transition states.
    pub stoichiometry: f64,
}

/// `Σ ν_i E_i` in hartree.
pub fn reaction_energy(entries: &[ReactionEntry]) -> Result<f64> {
    if entries.len() < 2 {
        return Err(Error::InvalidArgument("a reaction needs at least two entries".into()));
    }
    Ok(entries.iter().map(|e| e.stoichiometry * e.energy_hartree).sum())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Synth,
    #[default]
    Vqe,
    Estimate,
    Qse,
    CompareStrategies,
    React,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSection {
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub mitigation: Mitigation,
    /// Two-qubit depolarizing probability per CX.
    #[serde(default)]
    pub noise_p2: f64,
}

impl Default for EstimateSection {
    fn default() -> Self {
        EstimateSection { shots: default_shots(), mitigation: Mitigation::None, noise_p2: 0.0 }
    }
}

fn default_shots() -> u64 {
    10_000
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpansionChoice {
    #[default]
    Default,
    Complete,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorChoice {
    #[default]
    Exact,
    Shots,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QseSection {
    #[serde(default)]
    pub expansion: ExpansionChoice,
    /// Overrides `expansion` with operators listed in a file, see
    /// [`expansion_from_labels`].
    #[serde(default)]
    pub expansion_file: Option<PathBuf>,
    #[serde(default)]
    pub estimator: EstimatorChoice,
    /// Lorentzian half-width, hartree.
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub spectrum_out: Option<PathBuf>,
    #[serde(default = "default_s_threshold")]
    pub s_threshold: f64,
}

impl Default for QseSection {
    fn default() -> Self {
        QseSection {
            expansion: ExpansionChoice::Default,
            expansion_file: None,
            estimator: EstimatorChoice::Exact,
            gamma: default_gamma(),
            spectrum_out: None,
            s_threshold: DEFAULT_S_THRESHOLD,
        }
    }
}

fn default_gamma() -> f64 {
    0.01
}

fn default_s_threshold() -> f64 {
    DEFAULT_S_THRESHOLD
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointGroupChoice {
    #[default]
    Auto,
    C1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionSpecies {
    pub label: String,
    pub model: PathBuf,
    pub stoichiometry: f64,
}

/// TOML experiment descriptor. Relative paths are resolved against the
/// config file's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub task: Task,
    #[serde(default)]
    pub model: Option<PathBuf>,
    /// `auto` keeps the model's point group; `c1` drops it.
    #[serde(default)]
    pub point_group: PointGroupChoice,
    /// Pre-built circuit (text or JSON) used instead of synthesizing one.
    #[serde(default)]
    pub circuit: Option<PathBuf>,
    /// JSON object of parameter values for `circuit`; optimized when absent.
    #[serde(default)]
    pub parameters: Option<PathBuf>,
    #[serde(default = "default_strategy")]
    pub strategy: Strategy,
    #[serde(default)]
    pub seed: u64,
    /// Parameters below this magnitude are pruned after VQE.
    #[serde(default)]
    pub prune_tolerance: f64,
    #[serde(default)]
    pub estimate: EstimateSection,
    #[serde(default)]
    pub qse: QseSection,
    #[serde(default)]
    pub reaction: Vec<ReactionSpecies>,
}

fn default_strategy() -> Strategy {
    Strategy::Chemaware
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config and resolves its paths.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::from_toml(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve(base);
        Ok(cfg)
    }

    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [&mut self.model, &mut self.circuit, &mut self.parameters, &mut self.qse.expansion_file] {
            if let Some(p) = p.as_mut() {
                fix(p);
            }
        }
        if let Some(s) = self.qse.spectrum_out.as_mut() {
            fix(s);
        }
        for r in &mut self.reaction {
            fix(&mut r.model);
        }
    }

    fn model(&self) -> Result<MolecularModel> {
        let path = self.model.as_ref().ok_or_else(|| Error::Config("`model` is required for this task".into()))?;
        let m = load_model(path)?;
        Ok(match self.point_group {
            PointGroupChoice::Auto => m,
            PointGroupChoice::C1 => m.without_point_group(),
        })
    }
}

fn load_model(path: &Path) -> Result<MolecularModel> {
    let mut m = MolecularModel::load(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if m.name.is_empty() {
        m.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(m)
}

/// Reads a circuit as JSON when the extension is `.json`, text otherwise.
pub fn load_circuit(path: impl AsRef<Path>) -> Result<Circuit> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        Circuit::from_json(&text)
    } else {
        Circuit::from_text(&text)
    }
}

pub fn load_parameters(path: impl AsRef<Path>) -> Result<ParamMap> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Expansion operators from text: one operator per line, `I` for the
/// identity, otherwise pool labels joined by `+` (summed). `#` starts a
/// comment.
pub fn expansion_from_labels(model: &MolecularModel, text: &str) -> Result<Vec<FermionOperator>> {
    let pool = generate_uccsd_pool(model);
    let mut ops = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let t = raw.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        let mut op = FermionOperator::zero();
        for label in t.split('+').map(str::trim) {
            let term = if label == "I" {
                FermionOperator::identity()
            } else {
                pool.iter().find(|e| e.parameter == label).map(|e| e.operator()).ok_or_else(|| Error::Parse {
                    line: k + 1,
                    message: format!("unknown expansion operator `{label}`"),
                })?
            };
            op = op.add(&term);
        }
        ops.push(op);
    }
    if ops.is_empty() {
        return Err(Error::InvalidArgument("expansion file lists no operators".into()));
    }
    Ok(ops)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeSummary {
    pub energy_hartree: f64,
    pub exact_energy_hartree: f64,
    pub iterations: usize,
    pub parameters_rad: ParamMap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub energy_hartree: f64,
    pub stderr_hartree: f64,
    pub mitigation: Mitigation,
    pub circuits: usize,
    pub shots_taken: u64,
    pub shots_kept: u64,
    pub verification_two_qubit_gates: usize,
    /// Mean over measurement circuits of the divergence between the kept
    /// shots and the noiseless distribution (bits, base 2).
    pub jsd_mean: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QseState {
    pub energy_hartree: f64,
    pub excitation_hartree: f64,
    pub dipole_au: Option<[f64; 3]>,
    pub oscillator_strength: Option<f64>,
    /// Index of the degenerate group this state belongs to.
    pub group: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub energy_hartree: f64,
    pub oscillator_strength: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QseSummary {
    pub states: Vec<QseState>,
    /// Sticks with degenerate states merged.
    pub peaks: Vec<Peak>,
    pub spectrum_csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReactionSummary {
    pub entries: Vec<ReactionEntry>,
    pub energy_hartree: f64,
}

/// JSON report of one experiment. Field suffixes give units; counts and
/// probabilities are dimensionless.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: Task,
    pub model: Option<String>,
    pub strategy: Strategy,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_qubit_gates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_counts: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit: Option<Circuit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vqe: Option<VqeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qse: Option<QseSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reaction: Option<ReactionSummary>,
    pub units: BTreeMap<String, String>,
    pub config: ExperimentConfig,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

fn units() -> BTreeMap<String, String> {
    [
        ("*_hartree", "hartree"),
        ("*_rad", "radian"),
        ("*_au", "atomic units (e·bohr)"),
        ("oscillator_strength", "dimensionless"),
        ("jsd_mean", "bit"),
        ("two_qubit_gates", "count"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Optimized ground-state preparation.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub circuit: Circuit,
    pub parameters: ParamMap,
    pub energy: f64,
    pub iterations: usize,
}

/// Synthesizes the ansatz and optimizes it. With a positive tolerance,
/// rotations whose optimized angle is below it are pruned and the rest
/// re-optimized.
pub fn prepare_ground_state(model: &MolecularModel, strategy: Strategy, prune_tolerance: f64) -> Result<GroundState> {
    let h = hamiltonian_from_model(model)?;
    let circuit = synthesize(model, &generate_uccsd_pool(model), strategy)?;
    let r = vqe_optimize(&h, &circuit, &VqeConfig::default())?;
    if prune_tolerance <= 0.0 {
        return Ok(GroundState { circuit, parameters: r.parameters, energy: r.energy, iterations: r.iterations });
    }
    let (pruned, _) = prune(&circuit, &r.parameters, prune_tolerance);
    let r2 = vqe_optimize(&h, &pruned, &VqeConfig::default())?;
    Ok(GroundState {
        circuit: pruned,
        parameters: r2.parameters,
        energy: r2.energy,
        iterations: r.iterations + r2.iterations,
    })
}

/// Runs the experiment a config describes.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report {
        task: cfg.task,
        model: None,
        strategy: cfg.strategy,
        seed: cfg.seed,
        two_qubit_gates: None,
        gate_counts: None,
        circuit: None,
        vqe: None,
        estimate: None,
        qse: None,
        reaction: None,
        units: units(),
        config: cfg.clone(),
    };
    if cfg.task == Task::React {
        let entries = cfg
            .reaction
            .iter()
            .map(|s| -> Result<ReactionEntry> {
                let m = load_model(&s.model)?;
                let g = prepare_ground_state(&m, cfg.strategy, cfg.prune_tolerance)?;
                Ok(ReactionEntry { label: s.label.clone(), energy_hartree: g.energy, stoichiometry: s.stoichiometry })
            })
            .collect::<Result<Vec<_>>>()?;
        let energy_hartree = reaction_energy(&entries)?;
        report.reaction = Some(ReactionSummary { entries, energy_hartree });
        return Ok(report);
    }

    let model = cfg.model()?;
    report.model = Some(model.name.clone());
    let pool = generate_uccsd_pool(&model);
    match cfg.task {
        Task::Synth => {
            let c = synthesize(&model, &pool, cfg.strategy)?;
            report.two_qubit_gates = Some(c.two_qubit_gate_count());
            report.circuit = Some(c);
            return Ok(report);
        }
        Task::CompareStrategies => {
            let counts = Strategy::ALL
                .iter()
                .map(|&s| Ok((s.name().to_string(), synthesize(&model, &pool, s)?.two_qubit_gate_count())))
                .collect::<Result<BTreeMap<_, _>>>()?;
            report.two_qubit_gates = counts.get(cfg.strategy.name()).copied();
            report.gate_counts = Some(counts);
            return Ok(report);
        }
        _ => {}
    }

    let GroundState { circuit, parameters: params, energy, iterations } = match &cfg.circuit {
        None => prepare_ground_state(&model, cfg.strategy, cfg.prune_tolerance)?,
        Some(path) => {
            let circuit = load_circuit(path)?;
            let h = hamiltonian_from_model(&model)?;
            match &cfg.parameters {
                Some(p) => {
                    let parameters = load_parameters(p)?;
                    let energy = circuit_energy(&circuit, &h, &parameters)?;
                    GroundState { circuit, parameters, energy, iterations: 0 }
                }
                None => {
                    let r = vqe_optimize(&h, &circuit, &VqeConfig::default())?;
                    GroundState { circuit, parameters: r.parameters, energy: r.energy, iterations: r.iterations }
                }
            }
        }
    };
    report.two_qubit_gates = Some(circuit.two_qubit_gate_count());
    report.vqe = Some(VqeSummary {
        energy_hartree: energy,
        exact_energy_hartree: ground_energy(&model)?,
        iterations,
        parameters_rad: params.clone(),
    });
    let noise = (cfg.estimate.noise_p2 > 0.0).then(|| NoiseSpec::depolarizing(cfg.estimate.noise_p2));
    let opts = EstimateOptions {
        shots: cfg.estimate.shots,
        seed: cfg.seed,
        noise,
        mitigation: cfg.estimate.mitigation,
        exec: Default::default(),
    };

    match cfg.task {
        Task::Estimate => {
            let h = hamiltonian_from_model(&model)?;
            let prep = circuit.bind(&params)?;
            let r = estimate_sampled(&model, &prep, &h, &opts)?;
            let sets = crate::estimation::attach_verifiers(
                &crate::estimation::partition_terms(&h)?,
                &opts.mitigation.verifiers(&model),
            )?;
            let mut divergences = Vec::new();
            for (set, table) in sets.iter().zip(&r.tables) {
                let exact = exact_distribution(&set.measurement_circuit(&prep))?;
                let sampled: BTreeMap<u64, f64> = table.counts.iter().map(|(&k, &v)| (k, v as f64)).collect();
                divergences.push(jsd(&exact, &sampled)?);
            }
            report.estimate = Some(EstimateSummary {
                energy_hartree: r.estimate.value,
                stderr_hartree: r.estimate.stderr,
                mitigation: opts.mitigation,
                circuits: r.circuits,
                shots_taken: r.shots_taken,
                shots_kept: r.shots_kept,
                verification_two_qubit_gates: r.verification_two_qubit_gates,
                jsd_mean: (!divergences.is_empty()).then(|| divergences.iter().sum::<f64>() / divergences.len() as f64),
            });
        }
        Task::Qse => {
            report.qse = Some(run_qse(&model, &circuit, &params, &cfg.qse, &opts)?);
        }
        _ => {}
    }
    Ok(report)
}

fn run_qse(
    model: &MolecularModel,
    circuit: &Circuit,
    params: &ParamMap,
    section: &QseSection,
    opts: &EstimateOptions,
) -> Result<QseSummary> {
    let expansion = match (&section.expansion_file, section.expansion) {
        (Some(path), _) => expansion_from_labels(model, &std::fs::read_to_string(path)?)?,
        (None, ExpansionChoice::Default) => default_expansion(model),
        (None, ExpansionChoice::Complete) => complete_expansion(model),
    };
    let estimator = match section.estimator {
        EstimatorChoice::Exact => QseEstimator::Exact,
        EstimatorChoice::Shots => QseEstimator::Sampled(opts.clone()),
    };
    let r = qse_solve(model, circuit, params, &expansion, &estimator, section.s_threshold)?;
    let e0 = r.energies[0];
    let excitations: Vec<f64> = r.energies.iter().map(|e| e - e0).collect();
    let dipoles = match model.dipoles {
        Some(_) => Some(transition_dipoles(&r, model, circuit, params)?),
        None => None,
    };
    let groups = r.degenerate_groups(DEGENERACY_TOLERANCE);
    let group_of = |v: usize| groups.iter().position(|g| g.contains(&v)).unwrap_or(0);
    let states = (0..r.energies.len())
        .map(|v| {
            let d = dipoles.as_ref().map(|d| d[v]);
            QseState {
                energy_hartree: r.energies[v],
                excitation_hartree: excitations[v],
                dipole_au: d,
                oscillator_strength: d.map(|d| 2.0 * excitations[v] / 3.0 * d.iter().map(|x| x * x).sum::<f64>()),
                group: group_of(v),
            }
        })
        .collect();
    let mut peaks = Vec::new();
    let mut spectrum_csv = None;
    if let Some(d) = &dipoles {
        let sticks = merge_degenerate(&oscillator_strengths(&d[1..], &excitations[1..]), DEGENERACY_TOLERANCE);
        peaks = sticks
            .iter()
            .map(|p| Peak { energy_hartree: p.energy, oscillator_strength: p.oscillator_strength })
            .collect();
        if let Some(path) = &section.spectrum_out {
            let top = sticks.iter().map(|p| p.energy).fold(0.0, f64::max) + 0.5;
            let curve = broaden(&sticks, section.gamma, &Grid { start: 0.0, stop: top, step: 0.001 })?;
            std::fs::write(path, curve_csv(&curve))?;
            spectrum_csv = Some(path.clone());
        }
    }
    Ok(QseSummary { states, peaks, spectrum_csv })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reaction_arithmetic() {
        let e = |l: &str, v: f64, s: f64| ReactionEntry { label: l.into(), energy_hartree: v, stoichiometry: s };
        assert_eq!(reaction_energy(&[e("a", -1.0, -1.0), e("b", -1.0, 1.0)]).unwrap(), 0.0);
        assert!(
            (reaction_energy(&[e("a", -1.0, -1.0), e("b", -2.0, -1.0), e("ts", -2.9, 1.0)]).unwrap() - 0.1).abs()
                < 1e-12
        );
        assert!(reaction_energy(&[e("a", -1.0, 1.0)]).is_err());
    }

    #[test]
    fn config_round_trip_and_defaults() {
        let cfg = ExperimentConfig::from_toml("task = \"synth\"\nmodel = \"m.json\"\n").unwrap();
        assert_eq!(cfg.strategy, Strategy::Chemaware);
        assert_eq!(cfg.estimate.shots, 10_000);
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
    }
}
