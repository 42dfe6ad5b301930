mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use uccc_core::fermion::FermionOperator;
use uccc_core::model::dipole_operator;
use uccc_core::oracle::{sector_spectrum, Sector};
use uccc_core::spectra::{
    broaden, complete_expansion, default_expansion, merge_degenerate, oscillator_strengths, qse_solve,
    transition_dipoles, Grid, QseEstimator, QseResult, DEFAULT_S_THRESHOLD, DEGENERACY_TOLERANCE,
};

fn excitations(r: &QseResult) -> Vec<f64> {
    r.energies.iter().map(|e| e - r.energies[0]).collect()
}

fn summed_f(r: &QseResult, d: &[[f64; 3]], states: &[usize]) -> f64 {
    let ex = excitations(r);
    states.iter().map(|&v| 2.0 * ex[v] / 3.0 * d[v].iter().map(|x| x * x).sum::<f64>()).sum()
}

#[test]
fn complete_basis_reproduces_dense_sector() {
    for name in FIXTURES {
        let m = fixture(name);
        let (c, p, _) = ground_state(&m);
        let r = qse_solve(&m, &c, &p, &complete_expansion(&m), &QseEstimator::Exact, DEFAULT_S_THRESHOLD).unwrap();
        let dense = sector_spectrum(&m, Sector::Number).unwrap();
        assert_eq!(r.energies.len(), dense.energies.len(), "{name}");
        for (a, b) in r.energies.iter().zip(&dense.energies) {
            assert!((a - b).abs() < 1e-6, "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn methane_reduced_basis_has_a_degenerate_bright_pair() {
    let m = fixture("ch4_6q_d2");
    let (c, p, _) = ground_state(&m);
    let r = qse_solve(&m, &c, &p, &default_expansion(&m), &QseEstimator::Exact, DEFAULT_S_THRESHOLD).unwrap();
    let groups = r.degenerate_groups(DEGENERACY_TOLERANCE);
    let pair = groups.iter().find(|g| g.len() == 2).expect("a degenerate pair");
    assert_eq!(pair, &vec![1, 2]);
    assert!((r.energies[2] - r.energies[1]).abs() < 1e-6);

    // Dense oracle: the same eigenstates, dipoles taken against the exact ground state.
    let dense = sector_spectrum(&m, Sector::Number).unwrap();
    let psi0 = dense.state(0);
    let mu: Vec<_> = (0..3).map(|a| dipole_operator(&m, a).unwrap()).collect();
    let target = r.energies[1];
    let oracle_f: f64 = (0..dense.energies.len())
        .filter(|&v| (dense.energies[v] - target).abs() < 1e-6)
        .map(|v| {
            let psi = dense.state(v);
            let ex = dense.energies[v] - dense.energies[0];
            let d2: f64 = mu
                .iter()
                .map(|op| {
                    let x: Complex64 = psi0.iter().zip(op.apply(&psi)).map(|(a, b)| a.conj() * b).sum();
                    x.norm_sqr()
                })
                .sum();
            2.0 * ex / 3.0 * d2
        })
        .sum();

    let d = transition_dipoles(&r, &m, &c, &p).unwrap();
    let ex = excitations(&r);
    let sticks = merge_degenerate(&oscillator_strengths(&d[1..], &ex[1..]), DEGENERACY_TOLERANCE);
    let bright: Vec<_> = sticks.iter().filter(|s| s.oscillator_strength > 1e-6).collect();
    assert_eq!(bright.len(), 1);
    assert!((bright[0].energy - (target - dense.energies[0])).abs() < 1e-6);
    assert!((bright[0].oscillator_strength - oracle_f).abs() < 1e-6, "{} vs {oracle_f}", bright[0].oscillator_strength);

    let grid = Grid { start: -30.0, stop: 32.0, step: 0.0005 };
    let curve = broaden(&sticks, 0.01, &grid).unwrap();
    let area: f64 = curve.iter().map(|(_, y)| y * grid.step).sum();
    let total: f64 = sticks.iter().map(|s| s.oscillator_strength).sum();
    assert!((area - total).abs() / total < 0.01);
}

#[test]
fn strengths_are_non_negative() {
    for name in ["ch4_6q_d2", "ch4_6q_c1"] {
        let m = fixture(name);
        let (c, p, _) = ground_state(&m);
        let r = qse_solve(&m, &c, &p, &complete_expansion(&m), &QseEstimator::Exact, DEFAULT_S_THRESHOLD).unwrap();
        let d = transition_dipoles(&r, &m, &c, &p).unwrap();
        assert!(oscillator_strengths(&d, &excitations(&r)).iter().all(|s| s.oscillator_strength >= 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energies_ignore_recombination_of_operators(
        entries in prop::collection::vec(-0.3f64..0.3, 36)
    ) {
        let m = fixture("ch4_6q_d2");
        let (c, p, _) = ground_state(&m);
        let ops = default_expansion(&m);
        let k = ops.len();
        prop_assume!(k * k <= entries.len());
        let mix = DMatrix::from_fn(k, k, |i, j| if i == j { 1.0 } else { 0.0 } + entries[i * k + j]);
        prop_assume!(mix.clone().svd(false, false).singular_values.min() > 0.2);
        let mixed: Vec<FermionOperator> = (0..k)
            .map(|i| {
                (0..k).fold(FermionOperator::zero(), |acc, j| {
                    acc.add(&ops[j].scale(Complex64::new(mix[(i, j)], 0.0)))
                })
            })
            .collect();
        let a = qse_solve(&m, &c, &p, &ops, &QseEstimator::Exact, DEFAULT_S_THRESHOLD).unwrap();
        let b = qse_solve(&m, &c, &p, &mixed, &QseEstimator::Exact, DEFAULT_S_THRESHOLD).unwrap();
        prop_assert_eq!(a.energies.len(), b.energies.len());
        for (x, y) in a.energies.iter().zip(&b.energies) {
            prop_assert!((x - y).abs() < 1e-8, "{} vs {}", x, y);
        }
    }

    #[test]
    fn degenerate_strength_is_rotation_invariant(phi in 0.0f64..std::f64::consts::TAU) {
        let m = fixture("ch4_6q_d2");
        let (c, p, _) = ground_state(&m);
        let r = qse_solve(&m, &c, &p, &default_expansion(&m), &QseEstimator::Exact, DEFAULT_S_THRESHOLD).unwrap();
        let before = summed_f(&r, &transition_dipoles(&r, &m, &c, &p).unwrap(), &[1, 2]);
        let mut rotated = r.clone();
        let (s, co) = phi.sin_cos();
        for k in 0..r.vectors.nrows() {
            let (u, v) = (r.vectors[(k, 1)], r.vectors[(k, 2)]);
            rotated.vectors[(k, 1)] = co * u - s * v;
            rotated.vectors[(k, 2)] = s * u + co * v;
        }
        let after = summed_f(&rotated, &transition_dipoles(&rotated, &m, &c, &p).unwrap(), &[1, 2]);
        prop_assert!((before - after).abs() < 1e-8);
    }
}
