//! Molecular active-space models: integrals, reference occupation and
//! orbital symmetry labels.

mod fcidump;
mod hamiltonian;
mod pointgroup;

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fcidump::{parse_fcidump, write_fcidump};
pub use hamiltonian::{dipole_operator, hamiltonian_from_model, one_body_operator};
pub use pointgroup::PointGroup;

/// Tolerance used when validating integral symmetries on load.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Ordering of the two-electron tensor in a model file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegralConvention {
    /// `g[p][q][r][s] = (pq|rs)`.
    #[default]
    Chemist,
    /// `g[p][q][r][s] = ⟨pq|rs⟩ = (pr|qs)`.
    Physicist,
}

/// An active-space electronic structure model over spatial orbitals, with
/// alpha-beta interleaved spin orbitals.
#[derive(Clone, Debug, PartialEq)]
pub struct MolecularModel {
    pub name: String,
    pub n_spin_orbitals: usize,
    /// Occupation of each spin orbital in the reference determinant.
    pub hf_occupation: Vec<bool>,
    pub point_group: PointGroup,
    /// Irrep index (into the point group's table) per spatial orbital.
    pub irreps: Vec<usize>,
    pub core_energy: f64,
    /// One-electron integrals `h_pq` over spatial orbitals (hartree).
    pub h: DMatrix<f64>,
    /// Two-electron integrals in chemist order `(pq|rs)`, flattened.
    pub g: Vec<f64>,
    /// Dipole integrals `(x, y, z)` over spatial orbitals (atomic units).
    pub dipoles: Option<[DMatrix<f64>; 3]>,
}

impl MolecularModel {
    pub fn n_spatial(&self) -> usize {
        self.n_spin_orbitals / 2
    }

    pub fn n_electrons(&self) -> usize {
        self.hf_occupation.iter().filter(|&&o| o).count()
    }

    pub fn n_alpha(&self) -> usize {
        self.hf_occupation.iter().step_by(2).filter(|&&o| o).count()
    }

    pub fn n_beta(&self) -> usize {
        self.hf_occupation.iter().skip(1).step_by(2).filter(|&&o| o).count()
    }

    pub fn is_occupied(&self, spin_orbital: usize) -> bool {
        self.hf_occupation.get(spin_orbital).copied().unwrap_or(false)
    }

    /// Reference determinant as a little-endian basis-state index.
    pub fn hf_bits(&self) -> u64 {
        self.hf_occupation.iter().enumerate().filter(|(_, &o)| o).fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    /// Irrep of the spatial orbital holding `spin_orbital`.
    pub fn spin_orbital_irrep(&self, spin_orbital: usize) -> usize {
        self.irreps[spin_orbital / 2]
    }

    pub fn irrep_label(&self, spatial: usize) -> &'static str {
        self.point_group.irrep_names()[self.irreps[spatial]]
    }

    /// `(pq|rs)` over spatial orbitals.
    #[inline]
    pub fn eri(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_spatial();
        self.g[((p * n + q) * n + r) * n + s]
    }

    /// Reference-determinant energy evaluated directly from the integrals.
    pub fn hf_energy(&self) -> f64 {
        let occ: Vec<usize> = (0..self.n_spin_orbitals).filter(|&i| self.is_occupied(i)).collect();
        let mut e = self.core_energy;
        for &i in &occ {
            e += self.h[(i / 2, i / 2)];
        }
        for &i in &occ {
            for &j in &occ {
                let (p, q) = (i / 2, j / 2);
                e += 0.5 * self.eri(p, p, q, q);
                if i % 2 == j % 2 {
                    e -= 0.5 * self.eri(p, q, q, p);
                }
            }
        }
        e
    }

    /// Same integrals with every orbital relabelled totally symmetric.
    pub fn without_point_group(&self) -> MolecularModel {
        MolecularModel { point_group: PointGroup::C1, irreps: vec![0; self.n_spatial()], ..self.clone() }
    }

    /// Checks dimensions, Hermiticity of `h`, 8-fold symmetry of `g` and
    /// the occupation vector.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidModel(m));
        if self.n_spin_orbitals == 0 || !self.n_spin_orbitals.is_multiple_of(2) {
            return bad(format!("n_spin_orbitals must be even and positive, got {}", self.n_spin_orbitals));
        }
        if self.n_spin_orbitals > crate::pauli::MAX_QUBITS {
            return bad(format!("at most {} spin orbitals supported", crate::pauli::MAX_QUBITS));
        }
        let n = self.n_spatial();
        if self.hf_occupation.len() != self.n_spin_orbitals {
            return bad(format!(
                "hf_occupation has {} entries for {} spin orbitals",
                self.hf_occupation.len(),
                self.n_spin_orbitals
            ));
        }
        if self.irreps.len() != n {
            return bad(format!("{} irreps given for {} spatial orbitals", self.irreps.len(), n));
        }
        if self.irreps.iter().any(|&r| r >= self.point_group.order()) {
            return bad("irrep index out of range".into());
        }
        if self.h.nrows() != n || self.h.ncols() != n {
            return bad(format!("h_pq is {}x{}, expected {n}x{n}", self.h.nrows(), self.h.ncols()));
        }
        if self.g.len() != n.pow(4) {
            return bad(format!("g_pqrs has {} entries, expected {}", self.g.len(), n.pow(4)));
        }
        for p in 0..n {
            for q in 0..n {
                if (self.h[(p, q)] - self.h[(q, p)]).abs() > SYMMETRY_TOLERANCE {
                    return bad(format!("h_pq not symmetric at ({p},{q})"));
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.eri(p, q, r, s);
                        let images = [
                            self.eri(q, p, r, s),
                            self.eri(p, q, s, r),
                            self.eri(q, p, s, r),
                            self.eri(r, s, p, q),
                            self.eri(s, r, p, q),
                            self.eri(r, s, q, p),
                            self.eri(s, r, q, p),
                        ];
                        if images.iter().any(|w| (w - v).abs() > SYMMETRY_TOLERANCE) {
                            return bad(format!("g_pqrs lacks 8-fold symmetry at ({p},{q},{r},{s})"));
                        }
                    }
                }
            }
        }
        if let Some(d) = &self.dipoles {
            for (axis, m) in ["x", "y", "z"].iter().zip(d.iter()) {
                if m.nrows() != n || m.ncols() != n {
                    return bad(format!("dipole_{axis} has wrong shape"));
                }
                if (m - m.transpose()).abs().max() > SYMMETRY_TOLERANCE {
                    return bad(format!("dipole_{axis} not symmetric"));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.into_model()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ModelFile::from_model(self))?)
    }

    /// Loads a JSON model, or an FCIDUMP when the extension says so.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let is_fcidump = path
            .file_name()
            .and_then(|f| f.to_str())
            .map(|f| f.to_ascii_uppercase().contains("FCIDUMP"))
            .unwrap_or(false);
        if is_fcidump {
            parse_fcidump(&text)
        } else {
            Self::from_json(&text)
        }
    }
}

/// Occupation accepted either as `"110000"` (character `k` is spin
/// orbital `k`) or as an array of 0/1.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Occupation {
    Text(String),
    Bits(Vec<u8>),
}

/// On-disk JSON layout of a model.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ModelFile {
    #[serde(default)]
    name: String,
    n_spin_orbitals: usize,
    hf_occupation: Occupation,
    point_group: String,
    irreps: Vec<String>,
    core_energy: f64,
    #[serde(default)]
    integral_convention: IntegralConvention,
    h_pq: Vec<Vec<f64>>,
    g_pqrs: Vec<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dipole_x: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dipole_y: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dipole_z: Option<Vec<Vec<f64>>>,
}

fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidModel(format!("{what} is not square")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn rows_from_matrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

impl ModelFile {
    fn into_model(self) -> Result<MolecularModel> {
        let point_group: PointGroup = self.point_group.parse()?;
        let hf_occupation = match &self.hf_occupation {
            Occupation::Text(s) => s
                .chars()
                .map(|c| match c {
                    '1' => Ok(true),
                    '0' => Ok(false),
                    _ => Err(Error::InvalidModel(format!("bad occupation character `{c}`"))),
                })
                .collect::<Result<Vec<_>>>()?,
            Occupation::Bits(b) => b.iter().map(|&v| v != 0).collect(),
        };
        let irreps = self.irreps.iter().map(|l| point_group.irrep_index(l)).collect::<Result<Vec<_>>>()?;
        let h = matrix_from_rows(&self.h_pq, "h_pq")?;
        let n = h.nrows();
        let shape_ok = self.g_pqrs.len() == n
            && self
                .g_pqrs
                .iter()
                .all(|a| a.len() == n && a.iter().all(|b| b.len() == n && b.iter().all(|c| c.len() == n)));
        if !shape_ok {
            return Err(Error::InvalidModel(format!("g_pqrs must be {n}x{n}x{n}x{n}")));
        }
        let mut g = vec![0.0; n.pow(4)];
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.g_pqrs[p][q][r][s];
                        let (a, b, c, d) = match self.integral_convention {
                            IntegralConvention::Chemist => (p, q, r, s),
                            // ⟨pq|rs⟩ = (pr|qs)
                            IntegralConvention::Physicist => (p, r, q, s),
                        };
                        g[((a * n + b) * n + c) * n + d] = v;
                    }
                }
            }
        }
        let dipoles = match (&self.dipole_x, &self.dipole_y, &self.dipole_z) {
            (Some(x), Some(y), Some(z)) => Some([
                matrix_from_rows(x, "dipole_x")?,
                matrix_from_rows(y, "dipole_y")?,
                matrix_from_rows(z, "dipole_z")?,
            ]),
            (None, None, None) => None,
            _ => return Err(Error::InvalidModel("dipole_x/y/z must be given together".into())),
        };
        let model = MolecularModel {
            name: self.name,
            n_spin_orbitals: self.n_spin_orbitals,
            hf_occupation,
            point_group,
            irreps,
            core_energy: self.core_energy,
            h,
            g,
            dipoles,
        };
        model.validate()?;
        Ok(model)
    }

    fn from_model(m: &MolecularModel) -> Self {
        let n = m.n_spatial();
        let g_pqrs = (0..n)
            .map(|p| (0..n).map(|q| (0..n).map(|r| (0..n).map(|s| m.eri(p, q, r, s)).collect()).collect()).collect())
            .collect();
        ModelFile {
            name: m.name.clone(),
            n_spin_orbitals: m.n_spin_orbitals,
            hf_occupation: Occupation::Text(m.hf_occupation.iter().map(|&o| if o { '1' } else { '0' }).collect()),
            point_group: m.point_group.name().into(),
            irreps: (0..n).map(|p| m.irrep_label(p).to_string()).collect(),
            core_energy: m.core_energy,
            integral_convention: IntegralConvention::Chemist,
            h_pq: rows_from_matrix(&m.h),
            g_pqrs,
            dipole_x: m.dipoles.as_ref().map(|d| rows_from_matrix(&d[0])),
            dipole_y: m.dipoles.as_ref().map(|d| rows_from_matrix(&d[1])),
            dipole_z: m.dipoles.as_ref().map(|d| rows_from_matrix(&d[2])),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Two spatial orbitals, two electrons, hand-picked integrals.
    pub(crate) fn toy_model() -> MolecularModel {
        let n = 2;
        let mut g = vec![0.0; 16];
        let mut set = |p: usize, q: usize, r: usize, s: usize, v: f64| {
            for (a, b, c, d) in [
                (p, q, r, s),
                (q, p, r, s),
                (p, q, s, r),
                (q, p, s, r),
                (r, s, p, q),
                (s, r, p, q),
                (r, s, q, p),
                (s, r, q, p),
            ] {
                g[((a * n + b) * n + c) * n + d] = v;
            }
        };
        set(0, 0, 0, 0, 0.67);
        set(1, 1, 1, 1, 0.70);
        set(0, 0, 1, 1, 0.66);
        set(0, 1, 0, 1, 0.18);
        MolecularModel {
            name: "toy".into(),
            n_spin_orbitals: 4,
            hf_occupation: vec![true, true, false, false],
            point_group: PointGroup::D2h,
            irreps: vec![0, 5],
            core_energy: 0.71,
            h: DMatrix::from_row_slice(2, 2, &[-1.25, 0.0, 0.0, -0.48]),
            g,
            dipoles: None,
        }
    }

    #[test]
    fn json_round_trip() {
        let m = toy_model();
        let back = MolecularModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn physicist_convention_is_normalized() {
        let m = toy_model();
        let mut v: serde_json::Value = serde_json::from_str(&m.to_json().unwrap()).unwrap();
        // ⟨01|01⟩ = (00|11)
        let n = 2;
        let phys: Vec<Vec<Vec<Vec<f64>>>> = (0..n)
            .map(|p| (0..n).map(|q| (0..n).map(|r| (0..n).map(|s| m.eri(p, r, q, s)).collect()).collect()).collect())
            .collect();
        v["g_pqrs"] = serde_json::to_value(phys).unwrap();
        v["integral_convention"] = "physicist".into();
        let back = MolecularModel::from_json(&v.to_string()).unwrap();
        assert_eq!(back.g, m.g);
    }

    #[test]
    fn validation_catches_broken_symmetry() {
        let mut m = toy_model();
        m.g[1] += 0.1;
        assert!(m.validate().is_err());
        let mut m = toy_model();
        m.h[(0, 1)] = 0.2;
        assert!(m.validate().is_err());
        let mut m = toy_model();
        m.hf_occupation.pop();
        assert!(m.validate().is_err());
    }

    #[test]
    fn reference_energy_one_electron_limit() {
        let mut m = toy_model();
        m.g.iter_mut().for_each(|v| *v = 0.0);
        m.hf_occupation = vec![true, false, false, false];
        assert!((m.hf_energy() - (-1.25 + 0.71)).abs() < 1e-15);
        assert_eq!(m.n_electrons(), 1);
        assert_eq!(m.hf_bits(), 0b0001);
    }
}
