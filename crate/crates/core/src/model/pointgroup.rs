//! Character tables of the Abelian point groups.
//!
//! Irrep order inside each table is the conventional textbook order; the
//! `orbsym` arrays give the Molpro/FCIDUMP numbering (1-based `ORBSYM`
//! value → table index).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointGroup {
    C1,
    Cs,
    Ci,
    C2,
    C2v,
    C2h,
    D2,
    D2h,
}

struct Table {
    operations: &'static [&'static str],
    irreps: &'static [&'static str],
    characters: &'static [&'static [i8]],
    orbsym: &'static [usize],
}

const C1: Table = Table { operations: &["E"], irreps: &["A"], characters: &[&[1]], orbsym: &[0] };

const CS: Table =
    Table { operations: &["E", "sigma_h"], irreps: &["A'", "A''"], characters: &[&[1, 1], &[1, -1]], orbsym: &[0, 1] };

const CI: Table =
    Table { operations: &["E", "i"], irreps: &["Ag", "Au"], characters: &[&[1, 1], &[1, -1]], orbsym: &[0, 1] };

const C2: Table =
    Table { operations: &["E", "C2"], irreps: &["A", "B"], characters: &[&[1, 1], &[1, -1]], orbsym: &[0, 1] };

const C2V: Table = Table {
    operations: &["E", "C2", "sigma_v(xz)", "sigma_v(yz)"],
    irreps: &["A1", "A2", "B1", "B2"],
    characters: &[&[1, 1, 1, 1], &[1, 1, -1, -1], &[1, -1, 1, -1], &[1, -1, -1, 1]],
    orbsym: &[0, 2, 3, 1],
};

const C2H: Table = Table {
    operations: &["E", "C2", "i", "sigma_h"],
    irreps: &["Ag", "Bg", "Au", "Bu"],
    characters: &[&[1, 1, 1, 1], &[1, -1, 1, -1], &[1, 1, -1, -1], &[1, -1, -1, 1]],
    orbsym: &[0, 2, 3, 1],
};

const D2: Table = Table {
    operations: &["E", "C2(z)", "C2(y)", "C2(x)"],
    irreps: &["A", "B1", "B2", "B3"],
    characters: &[&[1, 1, 1, 1], &[1, 1, -1, -1], &[1, -1, 1, -1], &[1, -1, -1, 1]],
    orbsym: &[0, 3, 2, 1],
};

const D2H: Table = Table {
    operations: &["E", "C2(z)", "C2(y)", "C2(x)", "i", "sigma(xy)", "sigma(xz)", "sigma(yz)"],
    irreps: &["Ag", "B1g", "B2g", "B3g", "Au", "B1u", "B2u", "B3u"],
    characters: &[
        &[1, 1, 1, 1, 1, 1, 1, 1],
        &[1, 1, -1, -1, 1, 1, -1, -1],
        &[1, -1, 1, -1, 1, -1, 1, -1],
        &[1, -1, -1, 1, 1, -1, -1, 1],
        &[1, 1, 1, 1, -1, -1, -1, -1],
        &[1, 1, -1, -1, -1, -1, 1, 1],
        &[1, -1, 1, -1, -1, 1, -1, 1],
        &[1, -1, -1, 1, -1, 1, 1, -1],
    ],
    orbsym: &[0, 7, 6, 1, 5, 2, 3, 4],
};

impl PointGroup {
    pub const ALL: [PointGroup; 8] = [
        PointGroup::C1,
        PointGroup::Cs,
        PointGroup::Ci,
        PointGroup::C2,
        PointGroup::C2v,
        PointGroup::C2h,
        PointGroup::D2,
        PointGroup::D2h,
    ];

    fn table(self) -> &'static Table {
        match self {
            PointGroup::C1 => &C1,
            PointGroup::Cs => &CS,
            PointGroup::Ci => &CI,
            PointGroup::C2 => &C2,
            PointGroup::C2v => &C2V,
            PointGroup::C2h => &C2H,
            PointGroup::D2 => &D2,
            PointGroup::D2h => &D2H,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PointGroup::C1 => "C1",
            PointGroup::Cs => "Cs",
            PointGroup::Ci => "Ci",
            PointGroup::C2 => "C2",
            PointGroup::C2v => "C2v",
            PointGroup::C2h => "C2h",
            PointGroup::D2 => "D2",
            PointGroup::D2h => "D2h",
        }
    }

    pub fn order(self) -> usize {
        self.table().operations.len()
    }

    pub fn operations(self) -> &'static [&'static str] {
        self.table().operations
    }

    pub fn irrep_names(self) -> &'static [&'static str] {
        self.table().irreps
    }

    /// Character of irrep `irrep` under operation `op`.
    pub fn character(self, irrep: usize, op: usize) -> i8 {
        self.table().characters[irrep][op]
    }

    /// Case-insensitive irrep lookup.
    pub fn irrep_index(self, label: &str) -> Result<usize> {
        self.table()
            .irreps
            .iter()
            .position(|name| name.eq_ignore_ascii_case(label.trim()))
            .ok_or_else(|| Error::UnknownIrrep { group: self.name().into(), irrep: label.into() })
    }

    pub fn totally_symmetric(self) -> usize {
        0
    }

    /// Direct product of two irreps.
    pub fn product(self, a: usize, b: usize) -> usize {
        let t = self.table();
        let chars: Vec<i8> = (0..t.operations.len()).map(|op| t.characters[a][op] * t.characters[b][op]).collect();
        t.characters
            .iter()
            .position(|row| **row == chars[..])
            .expect("Abelian character tables are closed under products")
    }

    pub fn product_all(self, irreps: impl IntoIterator<Item = usize>) -> usize {
        irreps.into_iter().fold(0, |acc, r| self.product(acc, r))
    }

    /// Irrep for a 1-based FCIDUMP `ORBSYM` value.
    pub fn from_orbsym(self, value: usize) -> Result<usize> {
        let t = self.table();
        value
            .checked_sub(1)
            .and_then(|k| t.orbsym.get(k).copied())
            .ok_or_else(|| Error::UnknownIrrep { group: self.name().into(), irrep: format!("ORBSYM={value}") })
    }

    pub fn to_orbsym(self, irrep: usize) -> usize {
        self.table().orbsym.iter().position(|&i| i == irrep).expect("irrep in table") + 1
    }
}

impl FromStr for PointGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PointGroup::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnsupportedPointGroup(s.into()))
    }
}

impl fmt::Display for PointGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_groups() {
        for g in PointGroup::ALL {
            let n = g.irrep_names().len();
            assert_eq!(n, g.order());
            for a in 0..n {
                assert_eq!(g.product(a, a), 0, "{g} {a}");
                assert_eq!(g.product(a, 0), a);
                for b in 0..n {
                    assert_eq!(g.product(a, b), g.product(b, a));
                }
            }
            // orbsym numbering is a permutation
            let mut seen: Vec<usize> = (1..=n).map(|v| g.from_orbsym(v).unwrap()).collect();
            seen.sort();
            assert_eq!(seen, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn d2_products() {
        let g = PointGroup::D2;
        let b1 = g.irrep_index("b1").unwrap();
        let b2 = g.irrep_index("B2").unwrap();
        let b3 = g.irrep_index("b3").unwrap();
        assert_eq!(g.product(b1, b2), b3);
        assert_eq!(g.product(b3, b1), b2);
        assert!("D3h".parse::<PointGroup>().is_err());
        assert!(g.irrep_index("a1").is_err());
    }

    #[test]
    fn molpro_numbering() {
        assert_eq!(PointGroup::D2h.irrep_names()[PointGroup::D2h.from_orbsym(2).unwrap()], "B3u");
        assert_eq!(PointGroup::C2v.irrep_names()[PointGroup::C2v.from_orbsym(4).unwrap()], "A2");
        assert_eq!(PointGroup::D2.irrep_names()[PointGroup::D2.from_orbsym(2).unwrap()], "B3");
        assert!(PointGroup::C2v.from_orbsym(5).is_err());
    }
}
