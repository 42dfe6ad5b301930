use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::string::{i_pow, PauliString, PauliTerm};

/// Coefficients below this magnitude are dropped when terms are merged.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Weighted sum of Pauli strings, canonically merged.
///
/// Terms are kept in canonical string order, so iteration and serialization
/// are deterministic.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QubitOperator {
    terms: BTreeMap<PauliString, Complex64>,
}

impl QubitOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity(coeff: f64) -> Self {
        Self::from_term(PauliTerm::identity(Complex64::new(coeff, 0.0)))
    }

    pub fn from_term(term: PauliTerm) -> Self {
        let mut op = Self::zero();
        op.add_term(term);
        op
    }

    pub fn from_terms<I: IntoIterator<Item = PauliTerm>>(terms: I) -> Self {
        let mut op = Self::zero();
        for t in terms {
            op.add_term(t);
        }
        op
    }

    /// Adds one term, merging with an existing string and dropping the
    /// result if it falls below [`PRUNE_THRESHOLD`].
    pub fn add_term(&mut self, term: PauliTerm) {
        let entry = self.terms.entry(term.string).or_insert(Complex64::new(0.0, 0.0));
        *entry += term.coeff;
        if entry.norm() < PRUNE_THRESHOLD {
            self.terms.remove(&term.string);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        self.terms.iter().map(|(s, c)| PauliTerm::new(*c, *s))
    }

    pub fn coefficient(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    pub fn identity_coefficient(&self) -> Complex64 {
        self.coefficient(&PauliString::IDENTITY)
    }

    /// Highest qubit index touched by any term.
    pub fn max_qubit(&self) -> Option<usize> {
        self.terms.keys().filter_map(|s| s.max_qubit()).max()
    }

    /// Smallest register holding every term.
    pub fn n_qubits(&self) -> usize {
        self.max_qubit().map_or(0, |q| q + 1)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_terms(self.terms().map(|t| PauliTerm::new(t.coeff * factor, t.string)))
    }

    /// Conjugate transpose: every Pauli string is Hermitian, so only the
    /// coefficients are conjugated.
    pub fn dagger(&self) -> Self {
        Self::from_terms(self.terms().map(|t| PauliTerm::new(t.coeff.conj(), t.string)))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_terms(self.terms().map(|t| PauliTerm::new(Complex64::new(t.coeff.re, 0.0), t.string)))
    }

    /// Terms with the identity removed.
    pub fn without_identity(&self) -> Self {
        Self::from_terms(self.terms().filter(|t| !t.string.is_identity()))
    }

    /// Largest absolute deviation between two operators' coefficients.
    pub fn max_difference(&self, other: &QubitOperator) -> f64 {
        (self - other).terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every pair of terms commutes.
    pub fn terms_mutually_commute(&self) -> bool {
        let strings: Vec<_> = self.terms.keys().collect();
        strings.iter().enumerate().all(|(i, a)| strings[i + 1..].iter().all(|b| a.commutes(b)))
    }

    /// `⟨ψ|A|ψ⟩` for a dense little-endian amplitude vector.
    pub fn expectation(&self, amplitudes: &[Complex64]) -> Complex64 {
        self.terms().map(|t| t.coeff * pauli_expectation(&t.string, amplitudes)).sum()
    }

    /// `A|ψ⟩` on a dense amplitude vector.
    pub fn apply(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); amplitudes.len()];
        for t in self.terms() {
            for (s, a) in amplitudes.iter().enumerate() {
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let (ph, s2) = t.string.apply_to_basis(s as u64);
                out[s2 as usize] += t.coeff * ph * a;
            }
        }
        out
    }
}

/// `⟨ψ|P|ψ⟩` for a single Pauli string.
pub fn pauli_expectation(string: &PauliString, amplitudes: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let ny = (string.x & string.z).count_ones() as u8;
    for (s, a) in amplitudes.iter().enumerate() {
        let s = s as u64;
        let t = s ^ string.x;
        let sign = if (string.z & s).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
        acc += amplitudes[t as usize].conj() * a * sign;
    }
    acc * i_pow(ny)
}

impl From<PauliTerm> for QubitOperator {
    fn from(t: PauliTerm) -> Self {
        QubitOperator::from_term(t)
    }
}

impl AddAssign<&QubitOperator> for QubitOperator {
    fn add_assign(&mut self, rhs: &QubitOperator) {
        for t in rhs.terms() {
            self.add_term(t);
        }
    }
}

impl Add for &QubitOperator {
    type Output = QubitOperator;
    fn add(self, rhs: &QubitOperator) -> QubitOperator {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QubitOperator {
    type Output = QubitOperator;
    fn add(mut self, rhs: QubitOperator) -> QubitOperator {
        self += &rhs;
        self
    }
}

impl Neg for &QubitOperator {
    type Output = QubitOperator;
    fn neg(self) -> QubitOperator {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Sub for &QubitOperator {
    type Output = QubitOperator;
    fn sub(self, rhs: &QubitOperator) -> QubitOperator {
        self + &(-rhs)
    }
}

impl Mul for &QubitOperator {
    type Output = QubitOperator;
    fn mul(self, rhs: &QubitOperator) -> QubitOperator {
        let mut out = QubitOperator::zero();
        for a in self.terms() {
            for b in rhs.terms() {
                out.add_term(super::string::multiply(&a, &b));
            }
        }
        out
    }
}

impl Mul for QubitOperator {
    type Output = QubitOperator;
    fn mul(self, rhs: QubitOperator) -> QubitOperator {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::super::string::Pauli::*;
    use super::*;

    #[test]
    fn merge_drops_cancelled_terms() {
        let mut op = QubitOperator::from_term(PauliTerm::real(0.5, &[(0, X)]));
        op.add_term(PauliTerm::real(-0.5, &[(0, X)]));
        assert!(op.is_zero());
        op.add_term(PauliTerm::real(1e-15, &[(1, Z)]));
        assert!(op.is_zero());
    }

    #[test]
    fn product_of_sums() {
        // (X0 + Z0)^2 = 2 I
        let op = QubitOperator::from_terms([PauliTerm::real(1.0, &[(0, X)]), PauliTerm::real(1.0, &[(0, Z)])]);
        let sq = &op * &op;
        assert_eq!(sq.len(), 1);
        assert!((sq.identity_coefficient() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn expectation_of_z_on_one() {
        let z = QubitOperator::from_term(PauliTerm::real(1.0, &[(0, Z)]));
        let psi = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!((z.expectation(&psi).re + 1.0).abs() < 1e-15);
    }
}
