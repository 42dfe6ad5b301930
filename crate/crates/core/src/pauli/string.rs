use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest register a [`PauliString`] can address.
pub const MAX_QUBITS: usize = 64;

/// Non-identity single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// Phase-free tensor product of Pauli letters in symplectic form.
///
/// Qubit `q` carries X if only bit `q` of `x` is set, Z if only bit `q` of
/// `z` is set and Y if both are set. Absent qubits are identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn new(x: u64, z: u64) -> Self {
        PauliString { x, z }
    }

    /// Builds a string from `(qubit, letter)` pairs. Panics on a repeated
    /// qubit or an index beyond [`MAX_QUBITS`].
    pub fn from_letters(letters: &[(usize, Pauli)]) -> Self {
        let mut s = PauliString::IDENTITY;
        for &(q, p) in letters {
            assert!(q < MAX_QUBITS, "qubit index {q} exceeds {MAX_QUBITS}");
            let bit = 1u64 << q;
            assert!((s.x | s.z) & bit == 0, "qubit {q} given twice");
            let (bx, bz) = p.bits();
            if bx {
                s.x |= bit;
            }
            if bz {
                s.z |= bit;
            }
        }
        s
    }

    /// Z on every qubit set in `mask`.
    pub fn z_string(mask: u64) -> Self {
        PauliString { x: 0, z: mask }
    }

    pub fn single(q: usize, p: Pauli) -> Self {
        Self::from_letters(&[(q, p)])
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Qubits acted on non-trivially.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    /// True when every letter is Z.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn letter(&self, q: usize) -> Option<Pauli> {
        let bit = 1u64 << q;
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => None,
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
        }
    }

    /// `(qubit, letter)` pairs in ascending qubit order.
    pub fn letters(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        let support = self.support();
        (0..MAX_QUBITS).filter(move |q| support >> q & 1 == 1).map(move |q| (q, self.letter(q).expect("in support")))
    }

    /// Highest qubit index touched, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        let s = self.support();
        (s != 0).then(|| 63 - s.leading_zeros() as usize)
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// Group product `self · other`, returned as `(k, string)` meaning
    /// `i^k · string`.
    pub fn mul(&self, other: &PauliString) -> (u8, PauliString) {
        let out = PauliString { x: self.x ^ other.x, z: self.z ^ other.z };
        // P = i^{|x&z|} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
        let a = (self.x & self.z).count_ones() as i64;
        let b = (other.x & other.z).count_ones() as i64;
        let c = (out.x & out.z).count_ones() as i64;
        let swap = 2 * (self.z & other.x).count_ones() as i64;
        let k = (a + b - c + swap).rem_euclid(4) as u8;
        (k, out)
    }

    /// Action on a computational basis state: `P|s> = phase · |s ^ x>`.
    #[inline]
    pub fn apply_to_basis(&self, s: u64) -> (Complex64, u64) {
        let ny = (self.x & self.z).count_ones();
        let sign_flip = (self.z & s).count_ones() & 1;
        let k = (ny + 2 * sign_flip) % 4;
        (i_pow(k as u8), s ^ self.x)
    }
}

/// `i^k` for `k` in `0..4`.
#[inline]
pub fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl Ord for PauliString {
    /// Lexicographic over the `(qubit, letter)` sequence; identity sorts first.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.letters();
        let mut b = other.letters();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    o => return o,
                },
            }
        }
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (q, p)) in self.letters().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", p.symbol(), q)?;
        }
        write!(f, "]")
    }
}

/// A Pauli string with a complex coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub string: PauliString,
    pub coeff: Complex64,
}

impl PauliTerm {
    pub fn new(coeff: Complex64, string: PauliString) -> Self {
        PauliTerm { string, coeff }
    }

    pub fn real(coeff: f64, letters: &[(usize, Pauli)]) -> Self {
        PauliTerm::new(Complex64::new(coeff, 0.0), PauliString::from_letters(letters))
    }

    pub fn identity(coeff: Complex64) -> Self {
        PauliTerm::new(coeff, PauliString::IDENTITY)
    }

    pub fn commutes(&self, other: &PauliTerm) -> bool {
        self.string.commutes(&other.string)
    }
}

/// Product of two terms with the group phase folded into the coefficient.
pub fn multiply(a: &PauliTerm, b: &PauliTerm) -> PauliTerm {
    let (k, s) = a.string.mul(&b.string);
    PauliTerm::new(a.coeff * b.coeff * i_pow(k), s)
}

/// True iff the two strings commute.
pub fn commutes(a: &PauliTerm, b: &PauliTerm) -> bool {
    a.commutes(b)
}
