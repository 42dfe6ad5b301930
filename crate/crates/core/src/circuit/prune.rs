use super::{Angle, Circuit, Gate, ParamMap};

/// Rotations whose merged literal angle falls below this are dropped by the
/// peephole pass.
const MERGE_TOLERANCE: f64 = 1e-12;

/// Drops parameters with `|θ| < tol` together with every rotation that
/// references them, drops literal rotations below `tol`, then runs
/// [`peephole`] if anything was removed. Returns the reduced circuit and the
/// surviving parameter values.
pub fn prune(c: &Circuit, values: &ParamMap, tol: f64) -> (Circuit, ParamMap) {
    let survivors: ParamMap = values.iter().filter(|(_, v)| v.abs() >= tol).map(|(k, v)| (k.clone(), *v)).collect();
    let mut out = Circuit { n_qubits: c.n_qubits, n_bits: c.n_bits, ..Default::default() };
    let mut removed = false;
    for g in &c.gates {
        let drop = match g.angle() {
            Some(Angle::Literal(v)) => v.abs() < tol,
            Some(Angle::Symbol { name, scale }) => match values.get(name) {
                Some(v) => !survivors.contains_key(name) || (scale * v).abs() < tol,
                None => false,
            },
            None => false,
        };
        if drop {
            removed = true;
        } else {
            out.push(g.clone());
        }
    }
    if removed {
        out = peephole(&out);
    }
    let kept: ParamMap = survivors.into_iter().filter(|(k, _)| out.parameters.contains(k)).collect();
    (out, kept)
}

/// For each gate and each of its qubits, the index of the next gate on that
/// wire.
fn wire_successors(gates: &[Gate]) -> Vec<Vec<Option<usize>>> {
    let n = gates.iter().flat_map(|g| g.qubits()).max().map_or(0, |q| q + 1);
    let mut last: Vec<Option<usize>> = vec![None; n];
    let mut out = vec![Vec::new(); gates.len()];
    for i in (0..gates.len()).rev() {
        let qs = gates[i].qubits();
        out[i] = qs.iter().map(|&q| last[q]).collect();
        for &q in &qs {
            last[q] = Some(i);
        }
    }
    out
}

fn same_axis(a: &Gate, b: &Gate) -> bool {
    matches!(
        (a, b),
        (Gate::Rx { .. }, Gate::Rx { .. }) | (Gate::Ry { .. }, Gate::Ry { .. }) | (Gate::Rz { .. }, Gate::Rz { .. })
    )
}

fn merge_angles(a: &Angle, b: &Angle) -> Option<Angle> {
    match (a, b) {
        (Angle::Literal(x), Angle::Literal(y)) => Some(Angle::Literal(x + y)),
        (Angle::Symbol { name: n1, scale: s1 }, Angle::Symbol { name: n2, scale: s2 }) if n1 == n2 => {
            Some(Angle::Symbol { name: n1.clone(), scale: s1 + s2 })
        }
        _ => None,
    }
}

fn is_negligible(a: &Angle) -> bool {
    match a {
        Angle::Literal(v) => v.abs() < MERGE_TOLERANCE,
        Angle::Symbol { scale, .. } => scale.abs() < MERGE_TOLERANCE,
    }
}

/// Fixed-point cancellation of wire-adjacent pairs: `CX·CX`, `H·H`,
/// `X·X` and merging of same-axis rotations.
pub fn peephole(c: &Circuit) -> Circuit {
    let mut gates: Vec<Option<Gate>> = c.gates.iter().cloned().map(Some).collect();
    loop {
        let live: Vec<Gate> = gates.iter().flatten().cloned().collect();
        let mut changed = false;
        let mut next: Vec<Option<Gate>> = live.iter().cloned().map(Some).collect();
        let succ = wire_successors(&live);
        let untouched = |next: &[Option<Gate>], k: usize| next[k].as_ref() == Some(&live[k]);
        let mut i = 0;
        while i < live.len() {
            if !untouched(&next, i) || !live[i].is_unitary() {
                i += 1;
                continue;
            }
            let partner = succ[i][0];
            let aligned = partner.filter(|&j| untouched(&next, j) && succ[i].iter().all(|&s| s == Some(j)));
            if let Some(j) = aligned {
                let (a, b) = (&live[i], &live[j]);
                match (a, b) {
                    (Gate::Cx { .. }, Gate::Cx { .. })
                    | (Gate::H { .. }, Gate::H { .. })
                    | (Gate::X { .. }, Gate::X { .. })
                        if a == b =>
                    {
                        next[i] = None;
                        next[j] = None;
                        changed = true;
                    }
                    _ if same_axis(a, b) => {
                        if let Some(m) = merge_angles(a.angle().unwrap(), b.angle().unwrap()) {
                            next[i] = None;
                            next[j] = if is_negligible(&m) {
                                None
                            } else {
                                let mut g = b.clone();
                                match &mut g {
                                    Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => {
                                        *angle = m
                                    }
                                    _ => unreachable!(),
                                }
                                Some(g)
                            };
                            changed = true;
                        }
                    }
                    _ => {}
                }
            }
            i += 1;
        }
        gates = next;
        if !changed {
            break;
        }
    }
    let mut out = Circuit { n_qubits: c.n_qubits, n_bits: c.n_bits, ..Default::default() };
    for g in gates.into_iter().flatten() {
        out.push(g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_tolerance_keeps_circuit() {
        let mut c = Circuit::new(2);
        c.h(0);
        c.h(0);
        c.rz(1, Angle::symbol("t0", 1.0));
        let v: ParamMap = [("t0".to_string(), 0.0)].into();
        let (p, kept) = prune(&c, &v, 0.0);
        assert_eq!(p, c);
        assert_eq!(kept, v);
    }

    #[test]
    fn dropping_a_rotation_collapses_its_frame() {
        let mut c = Circuit::new(3);
        c.x(0);
        c.h(0);
        c.cx(0, 1);
        c.cx(1, 2);
        c.rz(2, Angle::symbol("small", -2.0));
        c.cx(1, 2);
        c.cx(0, 1);
        c.h(0);
        c.ry(1, Angle::symbol("big", 1.0));
        let v: ParamMap = [("small".to_string(), 1e-5), ("big".to_string(), 0.3)].into();
        let (p, kept) = prune(&c, &v, 1e-4);
        assert_eq!(p.gates.len(), 2);
        assert_eq!(p.two_qubit_gate_count(), 0);
        assert_eq!(kept.keys().collect::<Vec<_>>(), vec!["big"]);
    }

    #[test]
    fn rotations_merge_and_vanish() {
        let mut c = Circuit::new(1);
        c.rz(0, Angle::Literal(std::f64::consts::FRAC_PI_2));
        c.rz(0, Angle::Literal(-std::f64::consts::FRAC_PI_2));
        assert!(peephole(&c).gates.is_empty());
        let mut c = Circuit::new(2);
        c.rz(0, Angle::Literal(0.1));
        c.cx(0, 1);
        c.rz(0, Angle::Literal(0.2));
        assert_eq!(peephole(&c), c);
    }

    #[test]
    fn cx_pairs_only_cancel_when_adjacent_on_both_wires() {
        let mut c = Circuit::new(3);
        c.cx(0, 1);
        c.h(1);
        c.cx(0, 1);
        assert_eq!(peephole(&c).gates.len(), 3);
        let mut c = Circuit::new(3);
        c.cx(0, 1);
        c.h(2);
        c.cx(0, 1);
        assert_eq!(peephole(&c).gates.len(), 1);
    }
}
