use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    /// Excitation energy, hartree.
    pub energy: f64,
    pub oscillator_strength: f64,
}

/// `f = (2ε/3) Σ_α |d_α|²` for every state with `ε > 0`, sorted by energy.
/// `energies` are excitation energies.
pub fn oscillator_strengths(dipoles: &[[f64; 3]], energies: &[f64]) -> Vec<SpectrumPoint> {
    let mut pts: Vec<SpectrumPoint> = dipoles
        .iter()
        .zip(energies)
        .filter(|(_, &e)| e > 0.0)
        .map(|(d, &e)| SpectrumPoint {
            energy: e,
            oscillator_strength: 2.0 * e / 3.0 * d.iter().map(|x| x * x).sum::<f64>(),
        })
        .collect();
    pts.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    pts
}

/// Sums the strengths of points closer than `tol` into one stick at their
/// strength-weighted mean energy (plain mean when all strengths vanish).
pub fn merge_degenerate(points: &[SpectrumPoint], tol: f64) -> Vec<SpectrumPoint> {
    let mut out: Vec<Vec<SpectrumPoint>> = Vec::new();
    for p in points {
        match out.last_mut() {
            Some(g) if (p.energy - g.last().unwrap().energy).abs() < tol => g.push(*p),
            _ => out.push(vec![*p]),
        }
    }
    out.into_iter()
        .map(|g| {
            let f: f64 = g.iter().map(|p| p.oscillator_strength).sum();
            let energy = if f > 0.0 {
                g.iter().map(|p| p.energy * p.oscillator_strength).sum::<f64>() / f
            } else {
                g.iter().map(|p| p.energy).sum::<f64>() / g.len() as f64
            };
            SpectrumPoint { energy, oscillator_strength: f }
        })
        .collect()
}

/// Energy grid `start, start + step, …` up to and including `stop`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

/// Lorentzian broadening `Σ f (γ/π) / ((E − ε)² + γ²)` sampled on `grid`.
pub fn broaden(points: &[SpectrumPoint], gamma: f64, grid: &Grid) -> Result<Vec<(f64, f64)>> {
    if gamma <= 0.0 {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    if grid.step <= 0.0 || grid.stop < grid.start {
        return Err(Error::InvalidArgument("grid needs start <= stop and step > 0".into()));
    }
    Ok(grid
        .points()
        .into_iter()
        .map(|e| {
            let y = points
                .iter()
                .map(|p| p.oscillator_strength * (gamma / PI) / ((e - p.energy).powi(2) + gamma * gamma))
                .sum();
            (e, y)
        })
        .collect())
}

/// Local maxima of a sampled curve.
pub fn peaks(curve: &[(f64, f64)]) -> Vec<(f64, f64)> {
    curve.windows(3).filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1).map(|w| w[1]).collect()
}

pub fn curve_csv(curve: &[(f64, f64)]) -> String {
    let mut s = String::from("energy_hartree,intensity\n");
    for (e, y) in curve {
        s.push_str(&format!("{e},{y}\n"));
    }
    s
}

pub fn sticks_csv(points: &[SpectrumPoint]) -> String {
    let mut s = String::from("energy_hartree,oscillator_strength\n");
    for p in points {
        s.push_str(&format!("{},{}\n", p.energy, p.oscillator_strength));
    }
    s
}
