//! Gate-level circuits with symbolic rotation angles.

mod prune;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use prune::{peephole, prune};

/// Parameter values keyed by symbol name (radians).
pub type ParamMap = BTreeMap<String, f64>;

/// A rotation angle: a literal in radians or `scale · symbol`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Angle {
    Literal(f64),
    Symbol { name: String, scale: f64 },
}

impl Angle {
    pub fn symbol(name: impl Into<String>, scale: f64) -> Self {
        Angle::Symbol { name: name.into(), scale }
    }

    pub fn value(&self, params: &ParamMap) -> Result<f64> {
        match self {
            Angle::Literal(v) => Ok(*v),
            Angle::Symbol { name, scale } => {
                params.get(name).map(|v| scale * v).ok_or_else(|| Error::UnboundParameter(name.clone()))
            }
        }
    }

    pub fn literal(&self) -> Option<f64> {
        match self {
            Angle::Literal(v) => Some(*v),
            Angle::Symbol { .. } => None,
        }
    }

    pub fn symbol_name(&self) -> Option<&str> {
        match self {
            Angle::Literal(_) => None,
            Angle::Symbol { name, .. } => Some(name),
        }
    }

    pub fn negated(&self) -> Angle {
        match self {
            Angle::Literal(v) => Angle::Literal(-v),
            Angle::Symbol { name, scale } => Angle::Symbol { name: name.clone(), scale: -scale },
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Literal(v) => write!(f, "{v:?}"),
            Angle::Symbol { name, scale } if *scale == 1.0 => write!(f, "{name}"),
            Angle::Symbol { name, scale } => write!(f, "{scale:?}*{name}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    H {
        qubit: usize,
    },
    X {
        qubit: usize,
    },
    Rx {
        qubit: usize,
        angle: Angle,
    },
    Ry {
        qubit: usize,
        angle: Angle,
    },
    Rz {
        qubit: usize,
        angle: Angle,
    },
    Cx {
        control: usize,
        target: usize,
    },
    Measure {
        qubit: usize,
        bit: usize,
    },
    Reset {
        qubit: usize,
    },
    /// `X` on `qubit` when classical `bit` is 1.
    #[serde(rename = "xc")]
    ConditionalX {
        bit: usize,
        qubit: usize,
    },
}

impl Gate {
    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::Cx { control, target }
    }

    pub fn rz(qubit: usize, angle: Angle) -> Gate {
        Gate::Rz { qubit, angle }
    }

    /// Qubits the gate acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Cx { control, target } => vec![*control, *target],
            Gate::H { qubit }
            | Gate::X { qubit }
            | Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::Measure { qubit, .. }
            | Gate::Reset { qubit }
            | Gate::ConditionalX { qubit, .. } => vec![*qubit],
        }
    }

    pub fn angle(&self) -> Option<&Angle> {
        match self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => Some(angle),
            _ => None,
        }
    }

    fn angle_mut(&mut self) -> Option<&mut Angle> {
        match self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => Some(angle),
            _ => None,
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, Gate::Measure { .. } | Gate::Reset { .. } | Gate::ConditionalX { .. })
    }

    /// Inverse of a unitary gate.
    pub fn inverse(&self) -> Gate {
        let mut g = self.clone();
        if let Some(a) = g.angle_mut() {
            *a = a.negated();
        }
        g
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_bits: usize,
    pub gates: Vec<Gate>,
    /// Symbol table in order of registration.
    pub parameters: Vec<String>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit { n_qubits, ..Default::default() }
    }

    pub fn push(&mut self, g: Gate) {
        if let Some(name) = g.angle().and_then(Angle::symbol_name) {
            if !self.parameters.iter().any(|p| p == name) {
                self.parameters.push(name.to_string());
            }
        }
        self.gates.push(g);
    }

    pub fn h(&mut self, q: usize) {
        self.push(Gate::H { qubit: q });
    }

    pub fn x(&mut self, q: usize) {
        self.push(Gate::X { qubit: q });
    }

    pub fn cx(&mut self, c: usize, t: usize) {
        self.push(Gate::cx(c, t));
    }

    pub fn rx(&mut self, q: usize, angle: Angle) {
        self.push(Gate::Rx { qubit: q, angle });
    }

    pub fn ry(&mut self, q: usize, angle: Angle) {
        self.push(Gate::Ry { qubit: q, angle });
    }

    pub fn rz(&mut self, q: usize, angle: Angle) {
        self.push(Gate::Rz { qubit: q, angle });
    }

    /// Appends a measurement onto a fresh classical bit and returns it.
    pub fn measure(&mut self, q: usize) -> usize {
        let bit = self.n_bits;
        self.n_bits += 1;
        self.push(Gate::Measure { qubit: q, bit });
        bit
    }

    /// Appends every gate of `other`, merging symbol tables.
    pub fn extend(&mut self, other: &Circuit) {
        self.n_qubits = self.n_qubits.max(other.n_qubits);
        self.n_bits = self.n_bits.max(other.n_bits);
        for p in &other.parameters {
            if !self.parameters.contains(p) {
                self.parameters.push(p.clone());
            }
        }
        for g in &other.gates {
            self.push(g.clone());
        }
    }

    /// Inverse of a purely unitary circuit.
    pub fn inverse(&self) -> Circuit {
        let mut c = Circuit::new(self.n_qubits);
        c.parameters = self.parameters.clone();
        for g in self.gates.iter().rev() {
            c.push(g.inverse());
        }
        c
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cx { .. })).count()
    }

    pub fn is_bound(&self) -> bool {
        self.gates.iter().all(|g| g.angle().is_none_or(|a| a.literal().is_some()))
    }

    /// Checks operand ranges, distinct CX operands and the symbol table.
    pub fn validate(&self) -> Result<()> {
        for (k, g) in self.gates.iter().enumerate() {
            for q in g.qubits() {
                if q >= self.n_qubits {
                    return Err(Error::InvalidCircuit(format!("gate {k} uses qubit {q} of {}", self.n_qubits)));
                }
            }
            if let Gate::Cx { control, target } = g {
                if control == target {
                    return Err(Error::InvalidCircuit(format!("gate {k}: CX with identical operands")));
                }
            }
            match g {
                Gate::Measure { bit, .. } | Gate::ConditionalX { bit, .. } if *bit >= self.n_bits => {
                    return Err(Error::InvalidCircuit(format!("gate {k} uses bit {bit} of {}", self.n_bits)));
                }
                _ => {}
            }
            if let Some(name) = g.angle().and_then(Angle::symbol_name) {
                if !self.parameters.iter().any(|p| p == name) {
                    return Err(Error::InvalidCircuit(format!("symbol `{name}` missing from table")));
                }
            }
        }
        Ok(())
    }

    /// Replaces every symbol by its value; the result has no parameters.
    pub fn bind(&self, values: &ParamMap) -> Result<Circuit> {
        let mut c = Circuit { n_qubits: self.n_qubits, n_bits: self.n_bits, ..Default::default() };
        for g in &self.gates {
            let mut g = g.clone();
            if let Some(a) = g.angle_mut() {
                *a = Angle::Literal(a.value(values)?);
            }
            c.gates.push(g);
        }
        Ok(c)
    }

    /// Zero for every parameter.
    pub fn zero_parameters(&self) -> ParamMap {
        self.parameters.iter().map(|p| (p.clone(), 0.0)).collect()
    }
}
