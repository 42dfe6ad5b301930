use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::circuit::{Angle, Circuit, Gate, ParamMap};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::pauli::QubitOperator;
use crate::sim::run_statevector_with;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    pub max_iterations: usize,
    /// Convergence threshold on the gradient ∞-norm.
    pub gradient_tolerance: f64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for VqeConfig {
    fn default() -> Self {
        VqeConfig { max_iterations: 500, gradient_tolerance: 1e-7, exec: Execution::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub parameters: ParamMap,
    /// Hartree.
    pub energy: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
}

/// Exact `⟨ψ(θ)|H|ψ(θ)⟩` of a symbolic circuit.
pub fn circuit_energy(c: &Circuit, h: &QubitOperator, values: &ParamMap) -> Result<f64> {
    let s = run_statevector_with(&c.bind(values)?, Execution::Sequential)?;
    Ok(s.expectation(h).re)
}

fn set_literal(g: &mut Gate, v: f64) {
    match g {
        Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => *angle = Angle::Literal(v),
        _ => unreachable!("only rotations are shifted"),
    }
}

/// Analytic gradient by the two-term parameter-shift rule applied to every
/// symbolic rotation, chained through each rotation's scale factor.
pub fn parameter_shift_gradient(
    c: &Circuit,
    h: &QubitOperator,
    values: &ParamMap,
    exec: Execution,
) -> Result<ParamMap> {
    let bound = c.bind(values)?;
    let sites: Vec<(usize, String, f64)> = c
        .gates
        .iter()
        .enumerate()
        .filter_map(|(k, g)| match g.angle() {
            Some(Angle::Symbol { name, scale }) => Some((k, name.clone(), *scale)),
            _ => None,
        })
        .collect();
    let terms = exec.map_slice(&sites, |(k, name, scale)| -> Result<(String, f64)> {
        let base = bound.gates[*k].angle().and_then(Angle::literal).expect("bound");
        let eval = |shift: f64| -> Result<f64> {
            let mut shifted = bound.clone();
            set_literal(&mut shifted.gates[*k], base + shift);
            Ok(run_statevector_with(&shifted, Execution::Sequential)?.expectation(h).re)
        };
        let d = (eval(FRAC_PI_2)? - eval(-FRAC_PI_2)?) / 2.0;
        Ok((name.clone(), scale * d))
    });
    let mut grad: ParamMap = c.parameters.iter().map(|p| (p.clone(), 0.0)).collect();
    for t in terms {
        let (name, d) = t?;
        *grad.entry(name).or_default() += d;
    }
    Ok(grad)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Minimizes the exact energy from the all-zero point with BFGS and a
/// backtracking line search.
pub fn vqe_optimize(h: &QubitOperator, c: &Circuit, cfg: &VqeConfig) -> Result<VqeResult> {
    let names: Vec<String> = c.parameters.to_vec();
    let n = names.len();
    let constant = h.identity_coefficient().re;
    let h = h.without_identity();
    let to_map = |x: &[f64]| -> ParamMap { names.iter().cloned().zip(x.iter().copied()).collect() };
    let f = |x: &[f64]| circuit_energy(c, &h, &to_map(x));
    let grad = |x: &[f64]| -> Result<Vec<f64>> {
        let g = parameter_shift_gradient(c, &h, &to_map(x), cfg.exec)?;
        Ok(names.iter().map(|k| g[k]).collect())
    };

    let mut x = vec![0.0; n];
    let mut fx = f(&x)?;
    let mut g = grad(&x)?;
    let mut hinv = identity(n);
    let mut iterations = 0;
    while inf_norm(&g) >= cfg.gradient_tolerance {
        if iterations >= cfg.max_iterations {
            return Err(Error::NotConverged { iterations, gradient_norm: inf_norm(&g) });
        }
        iterations += 1;
        let mut d: Vec<f64> = (0..n).map(|i| -dot(&hinv[i], &g)).collect();
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            hinv = identity(n);
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
            let ft = f(&trial)?;
            if ft <= fx + 1e-4 * alpha * slope || ft < fx {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew)) = accepted else {
            // No descent left at machine precision.
            if hinv == identity(n) {
                break;
            }
            hinv = identity(n);
            continue;
        };
        let gn = grad(&xn)?;
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 {
            hinv = bfgs_update(&hinv, &s, &y, sy);
        }
        x = xn;
        fx = fnew;
        g = gn;
    }
    let gradient_norm = inf_norm(&g);
    if gradient_norm >= cfg.gradient_tolerance {
        return Err(Error::NotConverged { iterations, gradient_norm });
    }
    Ok(VqeResult { parameters: to_map(&x), energy: fx + constant, iterations, gradient_norm })
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// `H⁺ = (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ`.
fn bfgs_update(h: &[Vec<f64>], s: &[f64], y: &[f64], sy: f64) -> Vec<Vec<f64>> {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i], y)).collect();
    let yhy = dot(y, &hy);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| h[i][j] - rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j])
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::generate_uccsd_pool;
    use crate::model::hamiltonian_from_model;
    use crate::model::tests::toy_model;
    use crate::oracle::ground_energy;
    use crate::synthesis::{synthesize, Strategy};

    #[test]
    fn empty_circuit_gives_reference_energy() {
        let m = toy_model();
        let h = hamiltonian_from_model(&m).unwrap();
        let mut c = Circuit::new(4);
        c.x(0);
        c.x(1);
        let r = vqe_optimize(&h, &c, &VqeConfig::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert!((r.energy - m.hf_energy()).abs() < 1e-12);
    }

    #[test]
    fn shift_rule_matches_finite_difference() {
        let m = toy_model();
        let h = hamiltonian_from_model(&m).unwrap();
        let pool = generate_uccsd_pool(&m);
        let c = synthesize(&m, &pool, Strategy::Commuting).unwrap();
        let mut v = c.zero_parameters();
        for (k, x) in v.values_mut().enumerate() {
            *x = 0.1 + 0.2 * k as f64;
        }
        let g = parameter_shift_gradient(&c, &h, &v, Execution::Sequential).unwrap();
        for name in v.keys() {
            let mut p = v.clone();
            let eps = 1e-5;
            *p.get_mut(name).unwrap() += eps;
            let up = circuit_energy(&c, &h, &p).unwrap();
            *p.get_mut(name).unwrap() -= 2.0 * eps;
            let dn = circuit_energy(&c, &h, &p).unwrap();
            assert!((g[name] - (up - dn) / (2.0 * eps)).abs() < 1e-8, "{name}");
        }
    }

    #[test]
    fn every_strategy_reaches_the_sector_ground_state() {
        let m = toy_model();
        let h = hamiltonian_from_model(&m).unwrap();
        let exact = ground_energy(&m).unwrap();
        let pool = generate_uccsd_pool(&m);
        for s in Strategy::ALL {
            let c = synthesize(&m, &pool, s).unwrap();
            let r = vqe_optimize(&h, &c, &VqeConfig::default()).unwrap();
            assert!((r.energy - exact).abs() < 1e-6, "{s}: {} vs {exact}", r.energy);
        }
    }
}
