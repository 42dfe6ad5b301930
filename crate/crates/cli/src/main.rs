use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use uccc_core::estimation::Mitigation;
use uccc_core::experiment::{
    load_circuit, reaction_energy, run_experiment, EstimatorChoice, ExpansionChoice, ExperimentConfig,
    PointGroupChoice, ReactionEntry, ReactionSpecies, Report, Task,
};
use uccc_core::sim::{sample, NoiseSpec, SampleConfig};
use uccc_core::spectra::{broaden, curve_csv, Grid, SpectrumPoint};
use uccc_core::synthesis::Strategy;
use uccc_core::{Error, Result};

#[derive(Parser)]
#[command(name = "uccc", version, about = "UCC circuit synthesis, symmetry-verified estimation and QSE spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize an ansatz circuit.
    Synth(SynthArgs),
    /// Optimize the ansatz parameters on the noiseless simulator.
    Vqe(VqeArgs),
    /// Estimate the energy from sampled measurement circuits.
    Estimate(EstimateArgs),
    /// Excited states by quantum subspace expansion.
    Qse(QseArgs),
    /// Broaden a stick spectrum into a curve.
    Spectrum(SpectrumArgs),
    /// Reaction energy from species energies or models.
    React(ReactArgs),
    /// Two-qubit gate counts for every synthesis strategy.
    CompareStrategies(ModelArgs),
    /// Sample a bound circuit and print the shot table. Circuits without
    /// measurements get every qubit measured.
    Run(RunArgs),
    /// Run a TOML experiment descriptor.
    Experiment(ExperimentArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value = "chemaware")]
    strategy: Strategy,
    #[arg(long, value_enum, default_value = "auto")]
    point_group: PgArg,
    #[arg(long = "prune-tol", default_value_t = 0.0)]
    prune_tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PgArg {
    Auto,
    C1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "text")]
    emit: Emit,
    /// Print gate, qubit and parameter counts instead of the circuit.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct CircuitArgs {
    /// Use this circuit instead of synthesizing one.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Parameter values (JSON object) for `--circuit`.
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct VqeArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    circuit: CircuitArgs,
    /// Also write the optimized parameters as JSON.
    #[arg(long)]
    params_out: Option<PathBuf>,
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, default_value = "none")]
    mitigation: Mitigation,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "noise-p2", default_value_t = 0.0)]
    noise_p2: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    circuit: CircuitArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_enum, default_value = "json")]
    report: ReportFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Exact,
    Shots,
}

#[derive(Args)]
struct QseArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    circuit: CircuitArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// `default`, `complete`, or a file of operator labels.
    #[arg(long, default_value = "default")]
    expansion: String,
    #[arg(long, value_enum, default_value = "exact")]
    estimator: EstimatorArg,
    #[arg(long)]
    spectrum_out: Option<PathBuf>,
    /// Lorentzian half-width, hartree.
    #[arg(long, default_value_t = 0.01)]
    gamma: f64,
}

#[derive(Args)]
struct SpectrumArgs {
    /// CSV with header `energy_hartree,oscillator_strength`.
    #[arg(long)]
    sticks: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long, default_value_t = 0.001)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReactArgs {
    /// `label:energy:stoichiometry`, energy in hartree.
    #[arg(long = "energy")]
    energies: Vec<String>,
    /// `label:model-path:stoichiometry`; the energy comes from VQE.
    #[arg(long = "species")]
    species: Vec<String>,
    #[arg(long, default_value = "chemaware")]
    strategy: Strategy,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long = "noise-p2", default_value_t = 0.0)]
    noise_p2: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    emit: Emit,
}

#[derive(Args)]
struct ExperimentArgs {
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    strategy: Option<Strategy>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    mitigation: Option<Mitigation>,
    #[arg(long = "noise-p2")]
    noise_p2: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn base_config(task: Task, m: &ModelArgs) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::from_toml("").expect("empty config is valid");
    cfg.task = task;
    cfg.model = Some(m.model.clone());
    cfg.strategy = m.strategy;
    cfg.prune_tolerance = m.prune_tol;
    cfg.point_group = match m.point_group {
        PgArg::Auto => PointGroupChoice::Auto,
        PgArg::C1 => PointGroupChoice::C1,
    };
    cfg
}

fn apply_circuit(cfg: &mut ExperimentConfig, c: &CircuitArgs) {
    cfg.circuit = c.circuit.clone();
    cfg.parameters = c.params.clone();
}

fn apply_sampling(cfg: &mut ExperimentConfig, s: &SamplingArgs) {
    cfg.seed = s.seed;
    cfg.estimate.shots = s.shots;
    cfg.estimate.mitigation = s.mitigation;
    cfg.estimate.noise_p2 = s.noise_p2;
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(r: &Report, out: Option<&Path>) -> Result<()> {
    write_out(out, &r.to_json()?)
}

fn report_text(r: &Report) -> String {
    let mut s = String::new();
    if let Some(e) = &r.estimate {
        s += &format!(
            "energy_hartree {:.8}\nstderr_hartree {:.8}\nmitigation {}\ncircuits {}\nshots_kept {}/{}\n",
            e.energy_hartree, e.stderr_hartree, e.mitigation, e.circuits, e.shots_kept, e.shots_taken
        );
    }
    if let Some(v) = &r.vqe {
        s += &format!("vqe_energy_hartree {:.8}\n", v.energy_hartree);
    }
    s
}

fn split3(s: &str) -> Result<(&str, &str, f64)> {
    let bad = || Error::InvalidArgument(format!("expected `label:value:stoichiometry`, got `{s}`"));
    let (rest, nu) = s.rsplit_once(':').ok_or_else(bad)?;
    let (label, value) = rest.split_once(':').ok_or_else(bad)?;
    Ok((label, value, nu.parse().map_err(|_| bad())?))
}

fn read_sticks(path: &Path) -> Result<Vec<SpectrumPoint>> {
    let text = std::fs::read_to_string(path)?;
    let mut pts = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("energy") || line.starts_with('#') {
            continue;
        }
        let parse_err = || Error::Parse { line: k + 1, message: format!("bad stick row `{line}`") };
        let (e, f) = line.split_once(',').ok_or_else(parse_err)?;
        pts.push(SpectrumPoint {
            energy: e.trim().parse().map_err(|_| parse_err())?,
            oscillator_strength: f.trim().parse().map_err(|_| parse_err())?,
        });
    }
    Ok(pts)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(a) => {
            let r = run_experiment(&base_config(Task::Synth, &a.model))?;
            let c = r.circuit.expect("synth report carries the circuit");
            let text = if a.stats {
                serde_json::to_string_pretty(&json!({
                    "two_qubit_gates": c.two_qubit_gate_count(),
                    "qubits": c.n_qubits,
                    "parameters": c.parameters.len(),
                }))? + "\n"
            } else {
                match a.emit {
                    Emit::Text => c.to_text(),
                    Emit::Json => c.to_json()? + "\n",
                }
            };
            write_out(a.model.out.as_deref(), &text)
        }
        Command::Vqe(a) => {
            let mut cfg = base_config(Task::Vqe, &a.model);
            apply_circuit(&mut cfg, &a.circuit);
            let r = run_experiment(&cfg)?;
            if let (Some(p), Some(v)) = (&a.params_out, &r.vqe) {
                std::fs::write(p, serde_json::to_string_pretty(&v.parameters_rad)? + "\n")?;
            }
            emit_report(&r, a.model.out.as_deref())
        }
        Command::Estimate(a) => {
            let mut cfg = base_config(Task::Estimate, &a.model);
            apply_circuit(&mut cfg, &a.circuit);
            apply_sampling(&mut cfg, &a.sampling);
            let r = run_experiment(&cfg)?;
            match a.report {
                ReportFormat::Json => emit_report(&r, a.model.out.as_deref()),
                ReportFormat::Text => write_out(a.model.out.as_deref(), &report_text(&r)),
            }
        }
        Command::Qse(a) => {
            let mut cfg = base_config(Task::Qse, &a.model);
            apply_circuit(&mut cfg, &a.circuit);
            apply_sampling(&mut cfg, &a.sampling);
            match a.expansion.as_str() {
                "default" => cfg.qse.expansion = ExpansionChoice::Default,
                "complete" => cfg.qse.expansion = ExpansionChoice::Complete,
                path => cfg.qse.expansion_file = Some(PathBuf::from(path)),
            }
            cfg.qse.estimator = match a.estimator {
                EstimatorArg::Exact => EstimatorChoice::Exact,
                EstimatorArg::Shots => EstimatorChoice::Shots,
            };
            cfg.qse.gamma = a.gamma;
            cfg.qse.spectrum_out = a.spectrum_out;
            emit_report(&run_experiment(&cfg)?, a.model.out.as_deref())
        }
        Command::Spectrum(a) => {
            let sticks = read_sticks(&a.sticks)?;
            let stop = a.stop.unwrap_or_else(|| sticks.iter().map(|p| p.energy).fold(a.start, f64::max) + 0.5);
            let curve = broaden(&sticks, a.gamma, &Grid { start: a.start, stop, step: a.step })?;
            write_out(a.out.as_deref(), &curve_csv(&curve))
        }
        Command::React(a) => {
            let mut entries = Vec::new();
            for s in &a.energies {
                let (label, e, nu) = split3(s)?;
                let energy_hartree =
                    e.parse().map_err(|_| Error::InvalidArgument(format!("bad energy `{e}` in `{s}`")))?;
                entries.push(ReactionEntry { label: label.into(), energy_hartree, stoichiometry: nu });
            }
            if !a.species.is_empty() {
                let mut cfg = ExperimentConfig::from_toml("task = \"react\"").expect("valid");
                cfg.strategy = a.strategy;
                for s in &a.species {
                    let (label, model, nu) = split3(s)?;
                    cfg.reaction.push(ReactionSpecies { label: label.into(), model: model.into(), stoichiometry: nu });
                }
                entries.extend(run_experiment(&cfg)?.reaction.expect("react report").entries);
            }
            let energy = reaction_energy(&entries)?;
            let text = serde_json::to_string_pretty(&json!({
                "entries": entries,
                "energy_hartree": energy,
            }))? + "\n";
            write_out(a.out.as_deref(), &text)
        }
        Command::CompareStrategies(m) => {
            emit_report(&run_experiment(&base_config(Task::CompareStrategies, &m))?, m.out.as_deref())
        }
        Command::Run(a) => {
            let path = a.circuit.circuit.ok_or_else(|| Error::InvalidArgument("`run` needs --circuit".into()))?;
            let mut c = load_circuit(&path)?;
            if let Some(p) = &a.circuit.params {
                c = c.bind(&uccc_core::experiment::load_parameters(p)?)?;
            }
            if c.n_bits == 0 {
                for q in 0..c.n_qubits {
                    c.measure(q);
                }
            }
            let mut cfg = SampleConfig::new(a.shots, a.seed);
            if a.noise_p2 > 0.0 {
                cfg = cfg.with_noise(NoiseSpec::depolarizing(a.noise_p2));
            }
            let table = sample(&c, &cfg)?;
            let text = match a.emit {
                Emit::Text => table.to_csv(),
                Emit::Json => table.to_json()? + "\n",
            };
            print!("{text}");
            Ok(())
        }
        Command::Experiment(a) => {
            let mut cfg = ExperimentConfig::load(&a.config)?;
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            if let Some(s) = a.strategy {
                cfg.strategy = s;
            }
            if let Some(s) = a.shots {
                cfg.estimate.shots = s;
            }
            if let Some(m) = a.mitigation {
                cfg.estimate.mitigation = m;
            }
            if let Some(p) = a.noise_p2 {
                cfg.estimate.noise_p2 = p;
            }
            emit_report(&run_experiment(&cfg)?, a.out.as_deref())
        }
    }
}

fn fail(kind: &str, message: String) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("Usage", e.render().to_string().trim_end().to_string()),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = format!("{e:?}");
            fail(kind.split(['(', ' ', '{']).next().unwrap_or("Error"), e.to_string())
        }
    }
}
