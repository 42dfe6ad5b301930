mod common;

use common::*;
use uccc_core::experiment::{run_experiment, ExperimentConfig, Task};

fn config(name: &str) -> ExperimentConfig {
    ExperimentConfig::load(fixture_dir().join(name)).unwrap()
}

#[test]
fn methane_report_carries_gate_count() {
    let mut cfg = config("ch4_qse.toml");
    cfg.task = Task::Vqe;
    let json = run_experiment(&cfg).unwrap().to_json().unwrap();
    assert!(json.contains("\"two_qubit_gates\": 7"), "{json}");
    assert!(json.contains("\"energy_hartree\": -39.731"));
}

#[test]
fn reports_are_reproducible() {
    let mut cfg = config("ch4_estimate.toml");
    cfg.estimate.shots = 2000;
    let a = run_experiment(&cfg).unwrap().to_json().unwrap();
    let b = run_experiment(&cfg).unwrap().to_json().unwrap();
    assert_eq!(a, b);
    cfg.seed += 1;
    assert_ne!(a, run_experiment(&cfg).unwrap().to_json().unwrap());
}

#[test]
fn strategy_comparison_is_ordered() {
    let mut cfg = config("ch4_qse.toml");
    cfg.task = Task::CompareStrategies;
    let r = run_experiment(&cfg).unwrap();
    let counts = r.gate_counts.unwrap();
    assert!(counts["chemaware"] <= counts["commuting"] && counts["commuting"] <= counts["individual"]);
}

#[test]
fn forward_and_reverse_barriers() {
    for file in ["reaction.toml", "reverse_reaction.toml"] {
        let r = run_experiment(&config(file)).unwrap().reaction.unwrap();
        assert_eq!(format!("{:+.2}", r.energy_hartree), "+0.12", "{file}");
    }
}

#[test]
fn qse_report_lists_one_bright_peak_and_writes_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("ch4_qse.toml");
    cfg.qse.spectrum_out = Some(dir.path().join("spectrum.csv"));
    let q = run_experiment(&cfg).unwrap().qse.unwrap();
    let bright: Vec<_> = q.peaks.iter().filter(|p| p.oscillator_strength > 1e-6).collect();
    assert_eq!(bright.len(), 1);
    assert_eq!(format!("{:.2}", bright[0].energy_hartree), "0.86");
    assert_eq!(format!("{:.2}", bright[0].oscillator_strength), "0.59");
    let csv = std::fs::read_to_string(q.spectrum_csv.unwrap()).unwrap();
    assert!(csv.starts_with("energy_hartree,intensity\n"));
}

#[test]
fn sampled_qse_stays_near_exact() {
    let mut cfg = config("ch4_qse.toml");
    cfg.qse.estimator = uccc_core::experiment::EstimatorChoice::Shots;
    cfg.estimate.shots = 20_000;
    let q = run_experiment(&cfg).unwrap().qse.unwrap();
    let pair = &q.states[1];
    assert!((pair.excitation_hartree - 0.862).abs() < 5e-3, "{}", pair.excitation_hartree);
}

#[test]
fn missing_model_is_a_config_error() {
    let cfg = ExperimentConfig::from_toml("task = \"vqe\"\nmodel = \"/nonexistent.json\"").unwrap();
    let e = run_experiment(&cfg).unwrap_err();
    assert!(e.to_string().contains("nonexistent"));
}
