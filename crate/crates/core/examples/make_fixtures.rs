//! Regenerates the bundled model fixtures.
//!
//! Integrals are synthetic: each model is built from a few free parameters
//! and a seeded, symmetry-adapted random two-electron tensor, then tuned
//! with the dense oracle so that its ground energy and (for methane) its
//! excitation spectrum land on fixed target values.
//!
//! ```text
//! cargo run -p uccc-core --example make_fixtures -- fixtures
//! ```

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use uccc_core::fermion::generate_uccsd_pool;
use uccc_core::model::{dipole_operator, hamiltonian_from_model, write_fcidump, MolecularModel, PointGroup};
use uccc_core::oracle::{sector_spectrum, spin_squared, Sector};
use uccc_core::spectra::{vqe_optimize, VqeConfig};
use uccc_core::synthesis::{synthesize, Strategy};

fn idx(n: usize, p: usize, q: usize, r: usize, s: usize) -> usize {
    ((p * n + q) * n + r) * n + s
}

/// Sets all eight permutations of `(pq|rs)`.
fn set_eri(g: &mut [f64], n: usize, p: usize, q: usize, r: usize, s: usize, v: f64) {
    for (a, b, c, d) in [(p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r)] {
        g[idx(n, a, b, c, d)] = v;
        g[idx(n, c, d, a, b)] = v;
    }
}

fn blank(name: &str, pg: PointGroup, irreps: &[&str], occ: &str) -> MolecularModel {
    let n = irreps.len();
    MolecularModel {
        name: name.into(),
        n_spin_orbitals: 2 * n,
        hf_occupation: occ.chars().map(|c| c == '1').collect(),
        point_group: pg,
        irreps: irreps.iter().map(|l| pg.irrep_index(l).unwrap()).collect(),
        core_energy: 0.0,
        h: DMatrix::zeros(n, n),
        g: vec![0.0; n.pow(4)],
        dipoles: None,
    }
}

/// Positive semidefinite, symmetry-adapted `(pq|rs) = Σ_P L^P_pq L^P_rs`,
/// where each auxiliary `P` carries one irrep and only couples orbital
/// pairs of that irrep.
fn random_eri(m: &mut MolecularModel, seed: u64, diagonal: &[f64], scale: f64) {
    let n = m.n_spatial();
    let pg = m.point_group;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut g = vec![0.0; n.pow(4)];
    let mut add = |l: &DMatrix<f64>| {
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        g[idx(n, p, q, r, s)] += l[(p, q)] * l[(r, s)];
                    }
                }
            }
        }
    };
    // Dominant totally symmetric density: Coulomb-like diagonal.
    add(&DMatrix::from_fn(n, n, |p, q| if p == q { diagonal[p].sqrt() } else { 0.0 }));
    for irrep in 0..pg.irrep_names().len() {
        for _ in 0..n {
            let mut l = DMatrix::zeros(n, n);
            for p in 0..n {
                for q in 0..=p {
                    if pg.product(m.irreps[p], m.irreps[q]) == irrep {
                        let v = scale * (rng.random::<f64>() - 0.5);
                        l[(p, q)] = v;
                        l[(q, p)] = v;
                    }
                }
            }
            add(&l);
        }
    }
    m.g = g;
}

/// Symmetry-adapted symmetric one-body matrix with the given diagonal.
fn random_h(m: &mut MolecularModel, seed: u64, diagonal: &[f64], scale: f64) {
    let n = m.n_spatial();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    m.h = DMatrix::from_fn(n, n, |p, q| if p == q { diagonal[p] } else { 0.0 });
    for p in 0..n {
        for q in 0..p {
            if m.irreps[p] == m.irreps[q] {
                let v = scale * (rng.random::<f64>() - 0.5);
                m.h[(p, q)] = v;
                m.h[(q, p)] = v;
            }
        }
    }
}

fn ground(m: &MolecularModel) -> f64 {
    sector_spectrum(m, Sector::Full).unwrap().ground_energy()
}

/// Shifts the core energy so the sector ground state sits at `target`.
fn pin_ground(m: &mut MolecularModel, target: f64) {
    m.core_energy = 0.0;
    m.core_energy = target - ground(m);
}

fn h2() -> MolecularModel {
    let mut m = blank("h2_4q", PointGroup::D2h, &["ag", "b1u"], "1100");
    m.h = DMatrix::from_row_slice(2, 2, &[-1.252477495, 0.0, 0.0, -0.475934275]);
    set_eri(&mut m.g, 2, 0, 0, 0, 0, 0.674493166);
    set_eri(&mut m.g, 2, 1, 1, 1, 1, 0.697397504);
    set_eri(&mut m.g, 2, 0, 0, 1, 1, 0.663472101);
    set_eri(&mut m.g, 2, 0, 1, 0, 1, 0.181287518);
    m.core_energy = 0.713753990;
    m
}

/// Methane in a (2e, 3o) space with a degenerate pair of virtual orbitals.
/// `x = [h11, K01, K12, J11]`.
fn ch4(x: &[f64], pg: PointGroup, irreps: &[&str], dipole: f64) -> MolecularModel {
    let mut m = blank("ch4_6q", pg, irreps, "110000");
    let (h11, k01, k12, j11) = (x[0], x[1], x[2], x[3]);
    m.h = DMatrix::from_diagonal(&DVector::from_vec(vec![-2.45, h11, h11]));
    let n = 3;
    set_eri(&mut m.g, n, 0, 0, 0, 0, 0.72);
    set_eri(&mut m.g, n, 1, 1, 1, 1, j11);
    set_eri(&mut m.g, n, 2, 2, 2, 2, j11);
    set_eri(&mut m.g, n, 0, 0, 1, 1, 0.61);
    set_eri(&mut m.g, n, 0, 0, 2, 2, 0.61);
    set_eri(&mut m.g, n, 1, 1, 2, 2, 0.58);
    set_eri(&mut m.g, n, 0, 1, 0, 1, k01);
    set_eri(&mut m.g, n, 0, 2, 0, 2, k01);
    set_eri(&mut m.g, n, 1, 2, 1, 2, k12);
    let mut dy = DMatrix::zeros(3, 3);
    dy[(0, 1)] = dipole;
    dy[(1, 0)] = dipole;
    let mut dz = DMatrix::zeros(3, 3);
    dz[(0, 2)] = dipole;
    dz[(2, 0)] = dipole;
    m.dipoles = Some([DMatrix::zeros(3, 3), dy, dz]);
    m
}

/// Singlet excitation energies from the number sector and the two excited
/// totally symmetric states, plus the correlation energy.
struct Ch4Observables {
    correlation: f64,
    singlet_pair: f64,
    a_states: [f64; 2],
    pair_strength: f64,
}

fn ch4_observables(m: &MolecularModel) -> Ch4Observables {
    let full = sector_spectrum(m, Sector::Full).unwrap();
    let num = sector_spectrum(m, Sector::Number).unwrap();
    let s2 = spin_squared(m.n_spatial());
    let e0 = full.ground_energy();
    let psi0 = full.state(0);
    let mu: Vec<_> = (0..3).map(|a| dipole_operator(m, a).unwrap()).collect();
    let mut singlets: Vec<(f64, f64)> = (0..num.energies.len())
        .filter(|&v| s2.expectation(&num.state(v)).re.abs() < 0.5)
        .map(|v| {
            let psi = num.state(v);
            let d2: f64 = mu
                .iter()
                .map(|op| {
                    let mpsi = op.apply(&psi);
                    psi0.iter().zip(&mpsi).map(|(a, b)| (a.conj() * b).re).sum::<f64>().powi(2)
                })
                .sum();
            (num.energies[v] - e0, d2)
        })
        .filter(|(de, _)| *de > 1e-9)
        .collect();
    singlets.sort_by(|a, b| a.0.total_cmp(&b.0));
    let pair = &singlets[..2];
    let pair_strength = pair.iter().map(|(de, d2)| 2.0 * de / 3.0 * d2).sum();
    Ch4Observables {
        correlation: e0 - m.hf_energy(),
        singlet_pair: pair[0].0,
        a_states: [full.energies[1] - e0, full.energies[2] - e0],
        pair_strength,
    }
}

fn solve<F: Fn(&[f64]) -> Vec<f64>>(f: F, mut x: Vec<f64>, targets: &[f64]) -> Vec<f64> {
    let n = x.len();
    for _ in 0..50 {
        let fx = f(&x);
        let r: Vec<f64> = fx.iter().zip(targets).map(|(a, b)| a - b).collect();
        if r.iter().all(|v| v.abs() < 1e-12) {
            break;
        }
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut xp = x.clone();
            let h = 1e-6 * x[j].abs().max(1e-3);
            xp[j] += h;
            let fp = f(&xp);
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fx[i]) / h;
            }
        }
        let step = jac.lu().solve(&DVector::from_vec(r)).expect("singular Jacobian");
        for j in 0..n {
            x[j] -= step[j];
        }
    }
    x
}

fn write(dir: &Path, m: &MolecularModel, fcidump: bool) {
    std::fs::write(dir.join(format!("{}.json", m.name)), m.to_json().unwrap() + "\n").unwrap();
    if fcidump {
        std::fs::write(dir.join(format!("{}.FCIDUMP", m.name)), write_fcidump(m)).unwrap();
    }
}

fn report(m: &MolecularModel) {
    let h = hamiltonian_from_model(m).unwrap();
    let pool = generate_uccsd_pool(m);
    let exact = ground(m);
    let counts: Vec<usize> =
        Strategy::ALL.iter().map(|&s| synthesize(m, &pool, s).unwrap().two_qubit_gate_count()).collect();
    let c = synthesize(m, &pool, Strategy::Chemaware).unwrap();
    let vqe = vqe_optimize(&h, &c, &VqeConfig::default()).unwrap();
    println!(
        "{:12} hf {:.6} exact {:.8} vqe {:.8} (diff {:.1e}) cx {:?} params {:?}",
        m.name,
        m.hf_energy(),
        exact,
        vqe.energy,
        vqe.energy - exact,
        counts,
        vqe.parameters
    );
}

type Species = (&'static str, PointGroup, [&'static str; 3], &'static str, u64, f64);

fn main() {
    let dir: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()).into();
    std::fs::create_dir_all(&dir).unwrap();

    let h2 = h2();
    report(&h2);
    write(&dir, &h2, true);

    // Methane: tune the free integrals against the spectrum, then the
    // dipole against the oscillator strength, then the core energy.
    let d2 = (PointGroup::D2, ["b3", "b1", "b2"]);
    let observe = |x: &[f64]| {
        let o = ch4_observables(&ch4(x, d2.0, &d2.1, 1.0));
        vec![o.correlation, o.singlet_pair, o.a_states[0], o.a_states[1]]
    };
    let x = solve(observe, vec![-1.2, 0.04, 0.04, 0.66], &[-0.0026, 0.862, 1.634, 1.715]);
    let unit = ch4_observables(&ch4(&x, d2.0, &d2.1, 1.0));
    let dipole = (0.59 / unit.pair_strength).sqrt();
    let mut methane = ch4(&x, d2.0, &d2.1, dipole);
    pin_ground(&mut methane, -39.7312);
    let o = ch4_observables(&methane);
    println!(
        "ch4 x {x:?} dipole {dipole:.6} corr {:.6} pair {:.6} a {:?} f {:.6}",
        o.correlation, o.singlet_pair, o.a_states, o.pair_strength
    );
    methane.name = "ch4_6q_d2".into();
    report(&methane);
    write(&dir, &methane, true);
    let mut c1 = methane.without_point_group();
    c1.name = "ch4_6q_c1".into();
    report(&c1);
    write(&dir, &c1, false);

    // Open-shell and remaining species: seeded random integrals, ground
    // energy pinned.
    // name, group, irreps, occupation, seed, target energy
    let species: [Species; 4] = [
        ("ch3_6q", PointGroup::C2v, ["a1", "b1", "a1"], "111000", 11, -39.0806),
        ("oh_6q", PointGroup::C2v, ["a1", "b1", "b2"], "111000", 12, -74.3611),
        ("h2o_6q", PointGroup::C2v, ["a1", "a1", "b2"], "110000", 13, -75.0117),
        ("ts_6q", PointGroup::Cs, ["A'", "A''", "A'"], "111000", 14, -113.9723),
    ];
    for (name, pg, irreps, occ, seed, target) in species {
        let mut m = blank(name, pg, &irreps, occ);
        random_h(&mut m, seed, &[-2.3, -1.7, -0.9], 0.2);
        random_eri(&mut m, seed + 100, &[0.70, 0.64, 0.60], 0.25);
        pin_ground(&mut m, target);
        report(&m);
        write(&dir, &m, false);
    }
}
