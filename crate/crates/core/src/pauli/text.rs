//! Line-oriented text form: `(-0.5j) [Y0 X2]`, one term per line.

use num_complex::Complex64;

use super::operator::QubitOperator;
use super::string::{Pauli, PauliString, PauliTerm, MAX_QUBITS};
use crate::error::{Error, Result};

/// Formats a complex coefficient the way Python prints complex literals,
/// using Rust's shortest round-trip float representation for each part.
pub fn format_complex(c: Complex64) -> String {
    if c.re == 0.0 && c.re.is_sign_positive() {
        format!("({:?}j)", c.im)
    } else {
        let sign = if c.im.is_sign_negative() { '-' } else { '+' };
        format!("({:?}{}{:?}j)", c.re, sign, c.im.abs())
    }
}

pub fn parse_complex(s: &str) -> Option<Complex64> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let body = inner.strip_suffix('j')?;
    // The split point is the last sign that is neither leading nor part of
    // an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        None => Some(Complex64::new(0.0, body.parse().ok()?)),
        Some(i) => {
            let re: f64 = body[..i].parse().ok()?;
            let im: f64 = body[i + 1..].parse().ok()?;
            let im = if bytes[i] == b'-' { -im } else { im };
            Some(Complex64::new(re, im))
        }
    }
}

pub fn format_term(t: &PauliTerm) -> String {
    format!("{} {}", format_complex(t.coeff), t.string)
}

pub fn parse_term(line: &str) -> Result<PauliTerm> {
    let err = |m: &str| Error::Parse { line: 0, message: format!("{m}: `{line}`") };
    let open = line.find('[').ok_or_else(|| err("missing `[`"))?;
    let close = line.rfind(']').ok_or_else(|| err("missing `]`"))?;
    let coeff = parse_complex(&line[..open]).ok_or_else(|| err("bad coefficient"))?;
    let mut letters = Vec::new();
    for tok in line[open + 1..close].split_whitespace() {
        let mut chars = tok.chars();
        let p = chars.next().and_then(Pauli::from_symbol).ok_or_else(|| err("bad Pauli letter"))?;
        let q: usize = chars.as_str().parse().map_err(|_| err("bad qubit index"))?;
        if q >= MAX_QUBITS {
            return Err(err("qubit index too large"));
        }
        if letters.last().is_some_and(|&(prev, _)| prev >= q) {
            return Err(err("qubit indices must be strictly increasing"));
        }
        letters.push((q, p));
    }
    Ok(PauliTerm::new(coeff, PauliString::from_letters(&letters)))
}

impl QubitOperator {
    /// Newline-separated terms in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in self.terms() {
            out.push_str(&format_term(&t));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut op = QubitOperator::zero();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let t = parse_term(line).map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse { line: i + 1, message },
                other => other,
            })?;
            op.add_term(t);
        }
        Ok(op)
    }
}
