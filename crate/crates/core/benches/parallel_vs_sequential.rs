use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use uccc_core::circuit::{Angle, Circuit};
use uccc_core::estimation::{attach_verifiers, partition_terms, sample_sets, Mitigation};
use uccc_core::model::{hamiltonian_from_model, MolecularModel};
use uccc_core::par::Execution;
use uccc_core::sim::{run_statevector_with, sample, NoiseSpec, SampleConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

/// Layers of single-qubit rotations and a CX ladder.
fn brickwork(n: usize, layers: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for l in 0..layers {
        for q in 0..n {
            c.ry(q, Angle::Literal(0.1 + 0.01 * (q + l) as f64));
            c.rz(q, Angle::Literal(0.2 - 0.01 * q as f64));
        }
        for q in (l % 2..n - 1).step_by(2) {
            c.cx(q, q + 1);
        }
    }
    c
}

fn statevector(cr: &mut Criterion) {
    let mut g = cr.benchmark_group("statevector");
    g.sample_size(10);
    for n in [14, 18] {
        let c = brickwork(n, 4);
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &c, |b, c| {
                b.iter(|| run_statevector_with(black_box(c), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn noisy_shots(cr: &mut Criterion) {
    let mut g = cr.benchmark_group("noisy_shots");
    g.sample_size(10);
    let mut c = brickwork(10, 6);
    for q in 0..10 {
        c.measure(q);
    }
    for (name, exec) in MODES {
        let mut cfg = SampleConfig::new(4000, 1).with_noise(NoiseSpec::depolarizing(0.01));
        cfg.exec = exec;
        g.bench_function(name, |b| b.iter(|| sample(black_box(&c), &cfg).unwrap()));
    }
    g.finish();
}

fn methane_measurement_sets(cr: &mut Criterion) {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/ch4_6q_d2.json");
    let m = MolecularModel::load(path).unwrap();
    let h = hamiltonian_from_model(&m).unwrap();
    let sets = attach_verifiers(&partition_terms(&h).unwrap(), &Mitigation::Pmsv2.verifiers(&m)).unwrap();
    let mut prep = Circuit::new(m.n_spin_orbitals);
    prep.x(0);
    prep.x(1);
    let mut g = cr.benchmark_group("measurement_sets");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| sample_sets(&prep, &sets, 20_000, 3, Some(NoiseSpec::depolarizing(0.01)), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, statevector, noisy_shots, methane_measurement_sets);
criterion_main!(benches);
