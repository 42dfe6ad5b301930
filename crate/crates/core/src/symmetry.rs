//! Pauli symmetries of the reference determinant and symmetry filtering of
//! excitation pools.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fermion::Excitation;
use crate::model::MolecularModel;
use crate::pauli::PauliString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryKind {
    /// Electron-number parity (alpha, beta or total).
    NumberParity,
    /// A point-group operation realised as a Z-string.
    PointGroup,
}

/// A Pauli symmetry with the eigenvalue (`sector`, ±1) of the reference
/// state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryOperator {
    pub pauli: PauliString,
    pub sector: i8,
    pub label: String,
    pub kind: SymmetryKind,
}

impl SymmetryOperator {
    /// Z-string symmetry with the sector of basis state `reference`.
    pub fn z_string(mask: u64, reference: u64, label: impl Into<String>, kind: SymmetryKind) -> Self {
        let sector = if (mask & reference).count_ones().is_multiple_of(2) { 1 } else { -1 };
        SymmetryOperator { pauli: PauliString::z_string(mask), sector, label: label.into(), kind }
    }

    /// Parity bit `x` of the sector: `sector = (−1)^x`.
    pub fn parity(&self) -> u8 {
        u8::from(self.sector < 0)
    }
}

impl fmt::Display for SymmetryOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} sector {:+}", self.label, self.pauli, self.sector)
    }
}

/// Alpha, beta and total electron-number parities, in that order.
pub fn number_parity_symmetries(model: &MolecularModel) -> Vec<SymmetryOperator> {
    let n = model.n_spin_orbitals;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let even = all & 0x5555_5555_5555_5555;
    let odd = all & 0xAAAA_AAAA_AAAA_AAAA;
    let hf = model.hf_bits();
    vec![
        SymmetryOperator::z_string(even, hf, "alpha-parity", SymmetryKind::NumberParity),
        SymmetryOperator::z_string(odd, hf, "beta-parity", SymmetryKind::NumberParity),
        SymmetryOperator::z_string(all, hf, "total-parity", SymmetryKind::NumberParity),
    ]
}

/// Reduces `v` against an echelon basis; zero means dependent.
fn reduce(basis: &[u64], mut v: u64) -> u64 {
    for &b in basis {
        let top = 63 - b.leading_zeros();
        if v >> top & 1 == 1 {
            v ^= b;
        }
    }
    v
}

/// Z₂ symmetries from the point group: for each group operation (table
/// order) the Z-string over spin orbitals whose irrep has character −1,
/// keeping only strings independent of those already emitted.
pub fn point_group_z2_symmetries(model: &MolecularModel) -> Vec<SymmetryOperator> {
    let pg = model.point_group;
    let hf = model.hf_bits();
    let mut basis: Vec<u64> = Vec::new();
    let mut out = Vec::new();
    for (k, op) in pg.operations().iter().enumerate().skip(1) {
        let mask = (0..model.n_spatial())
            .filter(|&p| pg.character(model.irreps[p], k) < 0)
            .fold(0u64, |m, p| m | 0b11 << (2 * p));
        let r = reduce(&basis, mask);
        if r == 0 {
            continue;
        }
        basis.push(r);
        basis.sort_by_key(|b| std::cmp::Reverse(63 - b.leading_zeros()));
        out.push(SymmetryOperator::z_string(mask, hf, op.to_string(), SymmetryKind::PointGroup));
    }
    out
}

/// Number parities followed by the point-group strings.
pub fn all_symmetries(model: &MolecularModel) -> Vec<SymmetryOperator> {
    let mut s = number_parity_symmetries(model);
    s.extend(point_group_z2_symmetries(model));
    s
}

/// True when the excitation's creation and annihilation irreps multiply to
/// the same irrep.
pub fn irreps_allowed(exc: &Excitation, model: &MolecularModel) -> bool {
    let pg = model.point_group;
    let up = pg.product_all(exc.creation().iter().map(|&i| model.spin_orbital_irrep(i)));
    let down = pg.product_all(exc.annihilation().iter().map(|&i| model.spin_orbital_irrep(i)));
    up == down
}

/// Keeps excitations whose Jordan–Wigner generator commutes term-wise with
/// every symmetry. When the list contains point-group symmetries the irrep
/// product rule is applied as well. Order is preserved.
pub fn filter_excitations(pool: &[Excitation], syms: &[SymmetryOperator], model: &MolecularModel) -> Vec<Excitation> {
    let check_irreps = syms.iter().any(|s| s.kind == SymmetryKind::PointGroup);
    pool.iter()
        .filter(|exc| {
            let g = exc.jw_generator();
            let commute = g.terms().all(|t| syms.iter().all(|s| t.string.commutes(&s.pauli)));
            commute && (!check_irreps || irreps_allowed(exc, model))
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::generate_uccsd_pool;
    use crate::model::PointGroup;
    use nalgebra::DMatrix;

    fn blank(n_spatial: usize, occ: &str, pg: PointGroup, irreps: &[&str]) -> MolecularModel {
        MolecularModel {
            name: String::new(),
            n_spin_orbitals: 2 * n_spatial,
            hf_occupation: occ.chars().map(|c| c == '1').collect(),
            point_group: pg,
            irreps: irreps.iter().map(|l| pg.irrep_index(l).unwrap()).collect(),
            core_energy: 0.0,
            h: DMatrix::zeros(n_spatial, n_spatial),
            g: vec![0.0; n_spatial.pow(4)],
            dipoles: None,
        }
    }

    #[test]
    fn parity_sectors() {
        let m = blank(3, "110000", PointGroup::C1, &["a", "a", "a"]);
        let s = number_parity_symmetries(&m);
        assert_eq!(s[0].pauli, PauliString::z_string(0b010101));
        assert_eq!(s[0].sector, -1);
        assert_eq!(s[1].pauli, PauliString::z_string(0b101010));
        assert_eq!(s[1].sector, -1);
        assert_eq!(s[2].sector, 1);
        let vac = blank(2, "0000", PointGroup::C1, &["a", "a"]);
        assert!(number_parity_symmetries(&vac).iter().all(|s| s.sector == 1));
    }

    #[test]
    fn d2_generators() {
        let m = blank(3, "110000", PointGroup::D2, &["b3", "b1", "b2"]);
        let mut got: Vec<u64> = point_group_z2_symmetries(&m).iter().map(|s| s.pauli.z).collect();
        got.sort();
        assert_eq!(got, vec![0b001111, 0b110011]);
        let c1 = blank(3, "110000", PointGroup::C1, &["a", "a", "a"]);
        assert!(point_group_z2_symmetries(&c1).is_empty());
        let c2 = blank(2, "1100", PointGroup::C2, &["a", "b"]);
        let s = point_group_z2_symmetries(&c2);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].pauli, PauliString::z_string(0b1100));
    }

    #[test]
    fn ch4_like_pool_keeps_two_paired_doubles() {
        let m = blank(3, "110000", PointGroup::D2, &["b3", "b1", "b2"]);
        let pool = generate_uccsd_pool(&m);
        let kept = filter_excitations(&pool, &all_symmetries(&m), &m);
        assert_eq!(kept.len(), 2);
        assert!(kept.iter().all(|e| e.is_paired()));
        assert_eq!(filter_excitations(&pool, &[], &m), pool);
    }

    #[test]
    fn ch3_like_pool() {
        let m = blank(3, "111000", PointGroup::C2v, &["a1", "b1", "a1"]);
        let pool = generate_uccsd_pool(&m);
        let kept = filter_excitations(&pool, &all_symmetries(&m), &m);
        let names: Vec<String> = kept.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["a4^ a0 - h.c.", "a5^ a1 - h.c.", "a4^ a0 a5^ a1 - h.c.", "a4^ a2 a3^ a1 - h.c."]);
        let again = filter_excitations(&kept, &all_symmetries(&m), &m);
        assert_eq!(again, kept);
    }
}
