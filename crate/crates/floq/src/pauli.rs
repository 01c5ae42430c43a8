//! Phaseless Pauli strings in the binary symplectic representation.
//!
//! A Pauli string on `n` qubits is a length-`2n` bit vector: bit `q` carries
//! the X component on qubit `q`, bit `n + q` the Z component. Phases are
//! dropped throughout the crate, so multiplication is plain XOR and the only
//! retained structure is commutation, measured by the symplectic product
//! `x1·z2 + z1·x2 (mod 2)`.

use crate::error::{Error, Result};
use crate::gf2::{read_bits, BitVec};

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// (x, z) component pair of this letter.
    pub fn components(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// Letter with the given (x, z) component pair.
    pub fn from_components(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A phaseless Pauli string on `n` qubits.
#[derive(Clone, PartialEq, Eq)]
pub struct PauliVec {
    n: usize,
    bits: BitVec,
}

impl PauliVec {
    /// The identity string.
    pub fn identity(n: usize) -> Self {
        PauliVec {
            n,
            bits: BitVec::zeros(2 * n),
        }
    }

    /// Single-qubit Pauli `p` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, total: n });
        }
        let mut v = PauliVec::identity(n);
        v.set_at(q, p);
        Ok(v)
    }

    /// Wrap a raw symplectic bit vector (length must be even).
    pub fn from_bits(bits: BitVec) -> Self {
        assert!(
            bits.len().is_multiple_of(2),
            "symplectic vector length must be even"
        );
        PauliVec {
            n: bits.len() / 2,
            bits,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    /// The Pauli letter on qubit `q`.
    pub fn at(&self, q: usize) -> Pauli {
        Pauli::from_components(self.bits.get(q), self.bits.get(self.n + q))
    }

    pub fn set_at(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.components();
        self.bits.set(q, x);
        self.bits.set(self.n + q, z);
    }

    /// Number of qubits acted on non-trivially.
    pub fn size(&self) -> usize {
        support_size(self.bits.words(), self.n)
    }

    /// Ascending list of qubits acted on non-trivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.at(q) != Pauli::I).collect()
    }

    /// Phaseless product (XOR of the component vectors).
    #[must_use]
    pub fn product(&self, other: &PauliVec) -> PauliVec {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut bits = self.bits.clone();
        bits ^= &other.bits;
        PauliVec { n: self.n, bits }
    }

    /// Symplectic product: 1 if the strings anticommute, 0 if they commute.
    pub fn symplectic_product(&self, other: &PauliVec) -> u8 {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let (a, b) = (self.bits.words(), other.bits.words());
        let mut total = 0u32;
        let mut q = 0;
        while q < self.n {
            let len = (self.n - q).min(64);
            let x1 = read_bits(a, q, len);
            let z1 = read_bits(a, self.n + q, len);
            let x2 = read_bits(b, q, len);
            let z2 = read_bits(b, self.n + q, len);
            total += (x1 & z2).count_ones() + (z1 & x2).count_ones();
            q += len;
        }
        (total & 1) as u8
    }

    pub fn commutes_with(&self, other: &PauliVec) -> bool {
        self.symplectic_product(other) == 0
    }
}

/// Qubit support weight of a raw symplectic row: counts positions where the
/// X or Z bit (offset by `n`) is set. Shared with the batched size sweeps,
/// which work on matrix rows directly.
pub(crate) fn support_size(words: &[u64], n: usize) -> usize {
    let mut total = 0usize;
    let mut q = 0;
    while q < n {
        let len = (n - q).min(64);
        let x = read_bits(words, q, len);
        let z = read_bits(words, n + q, len);
        total += (x | z).count_ones() as usize;
        q += len;
    }
    total
}

impl std::fmt::Display for PauliVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.at(q).letter())?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for PauliVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for PauliVec {
    type Err = Error;

    /// Parse a string of letters I/X/Y/Z (case-insensitive), one per qubit.
    fn from_str(s: &str) -> Result<Self> {
        let mut v = PauliVec::identity(s.chars().count());
        for (q, c) in s.chars().enumerate() {
            let p = match c.to_ascii_uppercase() {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::PauliParse(format!("invalid letter '{other}'"))),
            };
            v.set_at(q, p);
        }
        Ok(v)
    }
}
