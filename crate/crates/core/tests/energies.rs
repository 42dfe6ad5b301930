mod common;

use common::*;
use uccc_core::fermion::generate_uccsd_pool;
use uccc_core::model::{hamiltonian_from_model, parse_fcidump, write_fcidump, MolecularModel};
use uccc_core::oracle::{ground_energy, restricted_spectrum, sector_basis, Sector};
use uccc_core::spectra::{vqe_optimize, VqeConfig};
use uccc_core::synthesis::{synthesize, Strategy};

#[test]
fn vqe_matches_dense_ground_state() {
    for name in FIXTURES {
        let m = fixture(name);
        let exact = ground_energy(&m).unwrap();
        let (_, _, e) = ground_state(&m);
        assert!((e - exact).abs() < 1e-6, "{name}: vqe {e} exact {exact}");
        assert!(e >= exact - 1e-9, "{name}: variational bound violated");
    }
}

#[test]
fn variational_bound_for_every_strategy() {
    for name in ["h2_4q", "ch4_6q_d2", "oh_6q"] {
        let m = fixture(name);
        let h = hamiltonian_from_model(&m).unwrap();
        let exact = ground_energy(&m).unwrap();
        for s in Strategy::ALL {
            let c = synthesize(&m, &generate_uccsd_pool(&m), s).unwrap();
            let r = vqe_optimize(&h, &c, &VqeConfig::default()).unwrap();
            assert!(r.energy >= exact - 1e-9, "{name} {s}");
            assert!(r.energy <= m.hf_energy() + 1e-12, "{name} {s}");
        }
    }
}

#[test]
fn methane_energy_at_displayed_precision() {
    let (_, _, e) = ground_state(&fixture("ch4_6q_d2"));
    assert_eq!(format!("{e:.2}"), "-39.73");
}

#[test]
fn dense_sector_matches_full_space_minimum() {
    // The full-sector ground state is also the lowest state with the same
    // electron numbers for these fixtures.
    let m = fixture("h2_4q");
    let h = hamiltonian_from_model(&m).unwrap();
    let num = restricted_spectrum(&h, 4, sector_basis(&m, Sector::Number)).unwrap();
    assert!((num.ground_energy() - ground_energy(&m).unwrap()).abs() < 1e-12);
}

#[test]
fn fcidump_fixtures_agree_with_json() {
    for name in ["h2_4q", "ch4_6q_d2"] {
        let json = fixture(name);
        let dump = MolecularModel::load(fixture_dir().join(format!("{name}.FCIDUMP"))).unwrap();
        assert_eq!(dump.n_spin_orbitals, json.n_spin_orbitals);
        assert_eq!(dump.irreps, json.irreps);
        let exact = ground_energy(&json).unwrap();
        let (_, _, e) = ground_state(&dump);
        assert!((e - exact).abs() < 1e-6, "{name}: {e} vs {exact}");
    }
}

#[test]
fn fcidump_round_trip_is_bit_exact() {
    for name in ["h2_4q", "ch4_6q_d2"] {
        let text = std::fs::read_to_string(fixture_dir().join(format!("{name}.FCIDUMP"))).unwrap();
        let a = parse_fcidump(&text).unwrap();
        let b = parse_fcidump(&write_fcidump(&a)).unwrap();
        assert_eq!(a.h, b.h);
        assert_eq!(a.g, b.g);
        assert_eq!(a.core_energy.to_bits(), b.core_energy.to_bits());
    }
}
