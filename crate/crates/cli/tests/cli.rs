use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn uccc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uccc")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn synth_stats() {
    let v = json(&uccc(&["synth", "--model", &fixture("ch4_6q_d2.json"), "--stats"]));
    assert_eq!(v["two_qubit_gates"], 7);
    assert_eq!(v["qubits"], 6);
    let c1 = json(&uccc(&["synth", "--model", &fixture("ch4_6q_d2.json"), "--point-group", "c1", "--stats"]));
    assert!(c1["two_qubit_gates"].as_u64().unwrap() > 7);
}

#[test]
fn synth_vqe_run_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("c.json");
    let params = dir.path().join("p.json");
    let model = fixture("h2_4q.FCIDUMP");
    let s = uccc(&["synth", "--model", &model, "--emit", "json", "--out", circuit.to_str().unwrap()]);
    assert!(s.status.success());
    let v = json(&uccc(&[
        "vqe",
        "--model",
        &model,
        "--circuit",
        circuit.to_str().unwrap(),
        "--params-out",
        params.to_str().unwrap(),
    ]));
    let (e, exact) = (v["vqe"]["energy_hartree"].as_f64().unwrap(), v["vqe"]["exact_energy_hartree"].as_f64().unwrap());
    assert!((e - exact).abs() < 1e-6);
    let out =
        uccc(&["run", "--circuit", circuit.to_str().unwrap(), "--params", params.to_str().unwrap(), "--seed", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bitstring,count\n"));
    assert!(text.contains("0011,"));
}

#[test]
fn estimate_report_has_units_and_is_deterministic() {
    let args = [
        "estimate",
        "--model",
        &fixture("ch4_6q_d2.json"),
        "--shots",
        "2000",
        "--mitigation",
        "pmsv2",
        "--noise-p2",
        "0.01",
        "--seed",
        "4",
    ];
    let a = uccc(&args);
    let b = uccc(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["estimate"]["mitigation"], "pmsv2");
    assert!(v["estimate"]["stderr_hartree"].as_f64().unwrap() > 0.0);
    assert_eq!(v["units"]["*_hartree"], "hartree");
    assert_eq!(v["config"]["seed"], 4);
}

#[test]
fn qse_writes_spectrum_and_spectrum_rebroadens() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("spectrum.csv");
    let v = json(&uccc(&["qse", "--model", &fixture("ch4_6q_d2.json"), "--spectrum-out", curve.to_str().unwrap()]));
    let peaks = v["qse"]["peaks"].as_array().unwrap();
    let bright: Vec<_> = peaks.iter().filter(|p| p["oscillator_strength"].as_f64().unwrap() > 1e-6).collect();
    assert_eq!(bright.len(), 1);
    assert!(std::fs::read_to_string(&curve).unwrap().starts_with("energy_hartree,intensity\n"));

    let sticks = dir.path().join("sticks.csv");
    std::fs::write(&sticks, "energy_hartree,oscillator_strength\n0.8676,0.601\n0.8684,0.565\n").unwrap();
    let out = uccc(&["spectrum", "--sticks", sticks.to_str().unwrap(), "--stop", "1.2"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().lines().count() > 1000);
}

#[test]
fn react_from_energies_and_models() {
    let v = json(&uccc(&["react", "--energy", "a:-1.0:-1", "--energy", "b:-1.0:1"]));
    assert_eq!(v["energy_hartree"].as_f64().unwrap(), 0.0);
    let v = json(&uccc(&[
        "react",
        "--species",
        &format!("CH4:{}:-1", fixture("ch4_6q_d2.json")),
        "--species",
        &format!("OH:{}:-1", fixture("oh_6q.json")),
        "--species",
        &format!("TS:{}:1", fixture("ts_6q.json")),
    ]));
    assert_eq!(format!("{:+.2}", v["energy_hartree"].as_f64().unwrap()), "+0.12");
}

#[test]
fn compare_strategies_and_experiment() {
    let v = json(&uccc(&["compare-strategies", "--model", &fixture("oh_6q.json")]));
    let c = &v["gate_counts"];
    assert!(c["chemaware"].as_u64() <= c["commuting"].as_u64());
    assert!(c["commuting"].as_u64() <= c["individual"].as_u64());
    let v = json(&uccc(&["experiment", &fixture("reverse_reaction.toml")]));
    assert_eq!(format!("{:+.2}", v["reaction"]["energy_hartree"].as_f64().unwrap()), "+0.12");
}

#[test]
fn errors_are_json_on_stderr() {
    let out = uccc(&["vqe", "--model", "/no/such/model.json"]);
    assert!(!out.status.success());
    let e: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "Config");
    let out = uccc(&["react", "--energy", "only:-1:1"]);
    assert!(!out.status.success());
    let e: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "InvalidArgument");
    let out = uccc(&["synth", "--model", "m.json", "--strategy", "bogus"]);
    assert!(!out.status.success());
    let e: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "Usage");
}
