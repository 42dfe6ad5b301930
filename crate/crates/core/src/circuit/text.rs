//! Line-based circuit text: one gate per line, e.g. `CX q0 q2`,
//! `Rz(t3) q1`, `MEASURE q5 -> c0`, `XC c0 q5`. Header comments carry the
//! register sizes and the symbol table.

use std::fmt;

use super::{Angle, Circuit, Gate};
use crate::error::{Error, Result};

fn err(line: usize, m: impl Into<String>) -> Error {
    Error::Parse { line, message: m.into() }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H { qubit } => write!(f, "H q{qubit}"),
            Gate::X { qubit } => write!(f, "X q{qubit}"),
            Gate::Rx { qubit, angle } => write!(f, "Rx({angle}) q{qubit}"),
            Gate::Ry { qubit, angle } => write!(f, "Ry({angle}) q{qubit}"),
            Gate::Rz { qubit, angle } => write!(f, "Rz({angle}) q{qubit}"),
            Gate::Cx { control, target } => write!(f, "CX q{control} q{target}"),
            Gate::Measure { qubit, bit } => write!(f, "MEASURE q{qubit} -> c{bit}"),
            Gate::Reset { qubit } => write!(f, "RESET q{qubit}"),
            Gate::ConditionalX { bit, qubit } => write!(f, "XC c{bit} q{qubit}"),
        }
    }
}

fn index(tok: &str, prefix: char, line: usize) -> Result<usize> {
    tok.strip_prefix(prefix)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err(line, format!("expected {prefix}<index>, got `{tok}`")))
}

fn parse_angle(s: &str, line: usize) -> Result<Angle> {
    if let Ok(v) = s.parse::<f64>() {
        return Ok(Angle::Literal(v));
    }
    let (scale, name) = match s.split_once('*') {
        Some((a, b)) => (a.parse::<f64>().map_err(|_| err(line, format!("bad angle `{s}`")))?, b),
        None => (1.0, s),
    };
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(err(line, format!("bad symbol `{name}`")));
    }
    Ok(Angle::symbol(name, scale))
}

fn parse_gate(text: &str, line: usize) -> Result<Gate> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let head = toks[0];
    let arity = |n: usize| {
        if toks.len() == n {
            Ok(())
        } else {
            Err(err(line, format!("`{head}` expects {} operands", n - 1)))
        }
    };
    if let Some((name, rest)) = head.split_once('(') {
        arity(2)?;
        let angle = parse_angle(rest.strip_suffix(')').ok_or_else(|| err(line, "missing `)`"))?, line)?;
        let qubit = index(toks[1], 'q', line)?;
        return match name {
            "Rx" => Ok(Gate::Rx { qubit, angle }),
            "Ry" => Ok(Gate::Ry { qubit, angle }),
            "Rz" => Ok(Gate::Rz { qubit, angle }),
            _ => Err(err(line, format!("unknown rotation `{name}`"))),
        };
    }
    match head {
        "H" => {
            arity(2)?;
            Ok(Gate::H { qubit: index(toks[1], 'q', line)? })
        }
        "X" => {
            arity(2)?;
            Ok(Gate::X { qubit: index(toks[1], 'q', line)? })
        }
        "CX" => {
            arity(3)?;
            Ok(Gate::cx(index(toks[1], 'q', line)?, index(toks[2], 'q', line)?))
        }
        "MEASURE" => {
            arity(4)?;
            if toks[2] != "->" {
                return Err(err(line, "expected `->`"));
            }
            Ok(Gate::Measure { qubit: index(toks[1], 'q', line)?, bit: index(toks[3], 'c', line)? })
        }
        "RESET" => {
            arity(2)?;
            Ok(Gate::Reset { qubit: index(toks[1], 'q', line)? })
        }
        "XC" => {
            arity(3)?;
            Ok(Gate::ConditionalX { bit: index(toks[1], 'c', line)?, qubit: index(toks[2], 'q', line)? })
        }
        _ => Err(err(line, format!("unknown gate `{head}`"))),
    }
}

impl Circuit {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# little-endian: qubit 0 is the least significant bit\n# qubits {}\n# bits {}\n",
            self.n_qubits, self.n_bits
        );
        if !self.parameters.is_empty() {
            s.push_str(&format!("# parameters {}\n", self.parameters.join(" ")));
        }
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut c = Circuit::default();
        let mut declared_qubits = None;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let t = raw.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(comment) = t.strip_prefix('#') {
                let mut it = comment.split_whitespace();
                match it.next() {
                    Some("qubits") => {
                        declared_qubits =
                            Some(it.next().and_then(|v| v.parse().ok()).ok_or_else(|| err(line, "bad qubit count"))?)
                    }
                    Some("bits") => {
                        c.n_bits = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| err(line, "bad bit count"))?
                    }
                    Some("parameters") => c.parameters = it.map(String::from).collect(),
                    _ => {}
                }
                continue;
            }
            let g = parse_gate(t, line)?;
            if let Gate::Measure { bit, .. } = g {
                c.n_bits = c.n_bits.max(bit + 1);
            }
            c.push(g);
        }
        let used = c.gates.iter().flat_map(|g| g.qubits()).max().map_or(0, |q| q + 1);
        c.n_qubits = declared_qubits.unwrap_or(used).max(used);
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let c: Circuit = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn documented_lines() {
        let c = Circuit::from_text("CX q0 q2\nRz(t3) q1\nMEASURE q5 -> c0\nXC c0 q5\n").unwrap();
        assert_eq!(c.n_qubits, 6);
        assert_eq!(c.n_bits, 1);
        assert_eq!(c.gates[1], Gate::rz(1, Angle::symbol("t3", 1.0)));
        assert_eq!(c.gates[3], Gate::ConditionalX { bit: 0, qubit: 5 });
        assert!(Circuit::from_text("CZ q0 q1").is_err());
    }

    fn arb_gate() -> impl Strategy<Value = Gate> {
        let angle = prop_oneof![
            any::<f64>().prop_filter("finite", |v| v.is_finite()).prop_map(Angle::Literal),
            (0usize..5, prop::num::f64::NORMAL).prop_map(|(k, s)| Angle::symbol(format!("t{k}"), s)),
        ];
        prop_oneof![
            (0usize..4).prop_map(|q| Gate::H { qubit: q }),
            (0usize..4).prop_map(|q| Gate::X { qubit: q }),
            (0usize..4, angle.clone()).prop_map(|(q, a)| Gate::Rx { qubit: q, angle: a }),
            (0usize..4, angle.clone()).prop_map(|(q, a)| Gate::Ry { qubit: q, angle: a }),
            (0usize..4, angle).prop_map(|(q, a)| Gate::Rz { qubit: q, angle: a }),
            (0usize..4, 1usize..4).prop_map(|(c, d)| Gate::cx(c, (c + d) % 4)),
            (0usize..4).prop_map(|q| Gate::Reset { qubit: q }),
            (0usize..4).prop_map(|q| Gate::ConditionalX { bit: 0, qubit: q }),
            (0usize..4).prop_map(|q| Gate::Measure { qubit: q, bit: 0 }),
        ]
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(gates in prop::collection::vec(arb_gate(), 0..30)) {
            let mut c = Circuit::new(4);
            c.n_bits = 1;
            for g in gates {
                c.push(g);
            }
            let back = Circuit::from_text(&c.to_text()).unwrap();
            prop_assert_eq!(&back, &c);
            let back = Circuit::from_json(&c.to_json().unwrap()).unwrap();
            prop_assert_eq!(&back, &c);
        }
    }
}
