//! FCIDUMP import and export.
//!
//! Integral lines are `value i j k l` with 1-based orbital indices in
//! chemist order; `i j 0 0` is a one-electron integral and `0 0 0 0` the
//! core energy. The reference determinant fills the lowest-index orbitals.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::{MolecularModel, PointGroup};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Splits a namelist body into `KEY -> [values]`.
fn parse_namelist(body: &str) -> HashMap<String, Vec<String>> {
    let mut out: HashMap<String, Vec<String>> = HashMap::new();
    let mut current: Option<String> = None;
    for raw in body.split([',', '\n', ' ', '\t', '\r']) {
        let tok = raw.trim();
        if tok.is_empty() {
            continue;
        }
        let (key, rest) = match tok.split_once('=') {
            Some((k, v)) => (Some(k.trim().to_ascii_uppercase()), v.trim()),
            None => (None, tok),
        };
        if let Some(k) = key {
            out.entry(k.clone()).or_default();
            current = Some(k);
        }
        if !rest.is_empty() {
            if let Some(k) = &current {
                out.get_mut(k).expect("inserted").push(rest.trim_matches(['\'', '"']).to_string());
            }
        }
    }
    out
}

fn single_usize(map: &HashMap<String, Vec<String>>, key: &str, line: usize) -> Result<Option<usize>> {
    match map.get(key).and_then(|v| v.first()) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| parse_err(line, format!("bad value `{v}` for {key}"))),
    }
}

pub fn parse_fcidump(text: &str) -> Result<MolecularModel> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines
        .iter()
        .position(|l| l.trim_start().to_ascii_uppercase().starts_with("&FCI"))
        .ok_or_else(|| parse_err(1, "missing &FCI header"))?;
    let mut end = None;
    let mut header = String::new();
    for (k, l) in lines.iter().enumerate().skip(start) {
        header.push_str(l);
        header.push('\n');
        let upper = l.to_ascii_uppercase();
        if upper.contains("&END") || upper.trim_end().ends_with('/') {
            end = Some(k);
            break;
        }
    }
    let end = end.ok_or_else(|| parse_err(start + 1, "unterminated namelist header"))?;
    let upper = header.to_ascii_uppercase();
    let from = upper.find("&FCI").expect("found above") + 4;
    let to = upper.find("&END").or_else(|| upper.rfind('/')).unwrap_or(header.len());
    let header = &header[from..to];
    let hl = start + 1;
    let nl = parse_namelist(header);

    let norb = single_usize(&nl, "NORB", hl)?.ok_or_else(|| parse_err(hl, "NORB missing"))?;
    let nelec = single_usize(&nl, "NELEC", hl)?.ok_or_else(|| parse_err(hl, "NELEC missing"))?;
    let ms2 = single_usize(&nl, "MS2", hl)?.unwrap_or(0);
    if norb == 0 || 2 * norb > crate::pauli::MAX_QUBITS {
        return Err(parse_err(hl, format!("NORB = {norb} out of range")));
    }
    if nelec > 2 * norb || ms2 > nelec || (nelec - ms2) % 2 != 0 {
        return Err(parse_err(hl, format!("NELEC = {nelec}, MS2 = {ms2} inconsistent with NORB = {norb}")));
    }
    let orbsym: Vec<usize> = match nl.get("ORBSYM") {
        Some(v) => v
            .iter()
            .map(|s| s.parse().map_err(|_| parse_err(hl, format!("bad ORBSYM entry `{s}`"))))
            .collect::<Result<_>>()?,
        None => vec![1; norb],
    };
    if orbsym.len() != norb {
        return Err(parse_err(hl, format!("ORBSYM has {} entries for NORB = {norb}", orbsym.len())));
    }
    let point_group = match nl.get("PNTGRP").and_then(|v| v.first()) {
        Some(name) => name.parse::<PointGroup>()?,
        None if orbsym.iter().all(|&s| s == 1) => PointGroup::C1,
        None => PointGroup::D2h,
    };
    let irreps = orbsym
        .iter()
        .map(|&s| {
            point_group.from_orbsym(s).map_err(|_| parse_err(hl, format!("ORBSYM {s} invalid for {point_group}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = norb;
    let mut h = DMatrix::zeros(n, n);
    let mut g = vec![0.0; n.pow(4)];
    let mut core = 0.0;
    for (k, l) in lines.iter().enumerate().skip(end + 1) {
        let lineno = k + 1;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(parse_err(lineno, format!("expected `value i j k l`, got `{}`", l.trim())));
        }
        let v: f64 = toks[0]
            .replace(['D', 'd'], "e")
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad value `{}`", toks[0])))?;
        let idx: Vec<usize> = toks[1..]
            .iter()
            .map(|t| t.parse().map_err(|_| parse_err(lineno, format!("bad index `{t}`"))))
            .collect::<Result<_>>()?;
        if let Some(&bad) = idx.iter().find(|&&i| i > n) {
            return Err(parse_err(lineno, format!("orbital index {bad} exceeds NORB = {n}")));
        }
        match (idx[0], idx[1], idx[2], idx[3]) {
            (0, 0, 0, 0) => core = v,
            (i, j, 0, 0) if i > 0 && j > 0 => {
                h[(i - 1, j - 1)] = v;
                h[(j - 1, i - 1)] = v;
            }
            (i, j, k2, l2) if i > 0 && j > 0 && k2 > 0 && l2 > 0 => {
                let (p, q, r, s) = (i - 1, j - 1, k2 - 1, l2 - 1);
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
            }
            // orbital energies (`i 0 0 0`) carry no integral information
            (_, 0, 0, 0) => {}
            _ => return Err(parse_err(lineno, "unrecognized index pattern")),
        }
    }

    let n_alpha = (nelec + ms2) / 2;
    let n_beta = (nelec - ms2) / 2;
    let hf_occupation = (0..2 * n).map(|so| if so % 2 == 0 { so / 2 < n_alpha } else { so / 2 < n_beta }).collect();
    let model = MolecularModel {
        name: String::new(),
        n_spin_orbitals: 2 * n,
        hf_occupation,
        point_group,
        irreps,
        core_energy: core,
        h,
        g,
        dipoles: None,
    };
    model.validate()?;
    Ok(model)
}

/// Writes the unique integrals of `model`; values use the shortest
/// round-trip representation so import reproduces them bit for bit.
pub fn write_fcidump(model: &MolecularModel) -> String {
    let n = model.n_spatial();
    let ms2 = model.n_alpha().abs_diff(model.n_beta());
    let orbsym: Vec<String> = model.irreps.iter().map(|&r| model.point_group.to_orbsym(r).to_string()).collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "&FCI NORB={n},NELEC={},MS2={ms2},\n  ORBSYM={},\n  ISYM=1,\n  PNTGRP='{}',\n&END",
        model.n_electrons(),
        orbsym.join(","),
        model.point_group.name()
    );
    let pair = |a: usize, b: usize| a * (a + 1) / 2 + b;
    for p in 0..n {
        for q in 0..=p {
            for r in 0..n {
                for s in 0..=r {
                    if pair(p, q) < pair(r, s) {
                        continue;
                    }
                    let v = model.eri(p, q, r, s);
                    if v != 0.0 {
                        let _ = writeln!(out, "{v:?} {} {} {} {}", p + 1, q + 1, r + 1, s + 1);
                    }
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..=p {
            let v = model.h[(p, q)];
            if v != 0.0 {
                let _ = writeln!(out, "{v:?} {} {} 0 0", p + 1, q + 1);
            }
        }
    }
    let _ = writeln!(out, "{:?} 0 0 0 0", model.core_energy);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::toy_model;

    #[test]
    fn one_orbital_file() {
        let text = "&FCI NORB=1,NELEC=2,MS2=0,\n ORBSYM=1,\n ISYM=1,\n&END\n-1.0 1 1 0 0\n0.5 0 0 0 0\n";
        let m = parse_fcidump(text).unwrap();
        assert_eq!(m.n_spin_orbitals, 2);
        assert_eq!(m.point_group, PointGroup::C1);
        assert!((m.hf_energy() - (-2.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn index_beyond_norb_names_line() {
        let text = "&FCI NORB=1,NELEC=2,\n&END\n-1.0 1 1 0 0\n0.3 2 1 1 1\n";
        match parse_fcidump(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("NORB"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_header() {
        assert!(parse_fcidump("NORB=2\n1.0 1 1 0 0\n").is_err());
        assert!(parse_fcidump("&FCI NELEC=2,\n&END\n").is_err());
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let mut m = toy_model();
        m.h[(0, 1)] = 0.1 / 3.0;
        m.h[(1, 0)] = 0.1 / 3.0;
        let text = write_fcidump(&m);
        let back = parse_fcidump(&text).unwrap();
        assert_eq!(back.h, m.h);
        assert_eq!(back.g, m.g);
        assert_eq!(back.core_energy.to_bits(), m.core_energy.to_bits());
        assert_eq!(back.irreps, m.irreps);
        assert_eq!(back.point_group, m.point_group);
        assert_eq!(back.hf_occupation, m.hf_occupation);
        assert_eq!(write_fcidump(&back), text);
    }
}
