#![allow(dead_code)]

use std::path::PathBuf;

use uccc_core::circuit::{Circuit, ParamMap};
use uccc_core::fermion::generate_uccsd_pool;
use uccc_core::model::{hamiltonian_from_model, MolecularModel};
use uccc_core::spectra::{vqe_optimize, VqeConfig};
use uccc_core::synthesis::{synthesize, Strategy};

pub const FIXTURES: [&str; 7] = ["h2_4q", "ch4_6q_d2", "ch4_6q_c1", "ch3_6q", "oh_6q", "h2o_6q", "ts_6q"];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> MolecularModel {
    MolecularModel::load(fixture_dir().join(format!("{name}.json"))).unwrap()
}

/// Chemically aware circuit and its optimized parameters.
pub fn ground_state(m: &MolecularModel) -> (Circuit, ParamMap, f64) {
    let pool = generate_uccsd_pool(m);
    let c = synthesize(m, &pool, Strategy::Chemaware).unwrap();
    let r = vqe_optimize(&hamiltonian_from_model(m).unwrap(), &c, &VqeConfig::default()).unwrap();
    (c, r.parameters, r.energy)
}
