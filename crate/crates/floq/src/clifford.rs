//! Phaseless Clifford maps as symplectic matrices over GF(2).
//!
//! A Clifford unitary `U` acts on Pauli strings by conjugation. Dropping
//! phases, that action is linear on the symplectic bit vectors of
//! [`crate::pauli`], so `U` is represented by a `2n x 2n` GF(2) matrix `M`
//! with `p -> M p` (column action). Preserving commutation is equivalent to
//! the symplectic condition `M^T Omega M = Omega` with
//! `Omega = [[0, I], [I, 0]]` in the X/Z block layout.
//!
//! Generators use the standard conjugation rules:
//!
//! * `H`: X <-> Z
//! * `S`: X -> Y, Z -> Z (phaseless, so S and S^dagger coincide)
//! * `CNOT(c, t)`: X_c -> X_c X_t, X_t -> X_t, Z_c -> Z_c, Z_t -> Z_c Z_t
//!
//! In a gate program written as a product `g1 g2 ... gk` (leftmost first in
//! reading order), the *rightmost* factor conjugates first, exactly as in
//! `U O U^dagger` with `U = g1 g2 ... gk`. [`CliffordMap::compile`] therefore
//! multiplies the per-gate matrices in reading order: `M(g1) M(g2) ... M(gk)`.

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::pauli::PauliVec;

/// One primitive gate acting on numbered slots (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

impl Gate {
    fn max_slot(self) -> usize {
        match self {
            Gate::H(q) | Gate::S(q) => q,
            Gate::Cnot(c, t) => c.max(t),
        }
    }
}

/// A gate program: a product of primitives in reading order.
///
/// The text form separates gates with `;` and numbers slots from `q1`:
/// `S q4; CNOT q4 q1; CNOT q1 q2; CNOT q2 q3; CNOT q3 q4; H q1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateSpec {
    pub ops: Vec<Gate>,
}

impl GateSpec {
    pub fn new(ops: Vec<Gate>) -> Self {
        GateSpec { ops }
    }

    /// The empty program (identity).
    pub fn empty() -> Self {
        GateSpec { ops: Vec::new() }
    }

    /// The four-qubit coupling gate used throughout:
    /// `W = S_4 CNOT_{4,1} CNOT_{1,2} CNOT_{2,3} CNOT_{3,4} H_1`.
    pub fn w() -> Self {
        "S q4; CNOT q4 q1; CNOT q1 q2; CNOT q2 q3; CNOT q3 q4; H q1"
            .parse()
            .expect("builtin gate program parses")
    }

    /// The deeper four-qubit variant with strictly positive butterfly
    /// velocity in all directions.
    pub fn w_new() -> Self {
        "CNOT q3 q2; S q3; CNOT q2 q4; CNOT q1 q3; H q3; \
         CNOT q4 q1; CNOT q1 q2; CNOT q2 q3; CNOT q3 q4; H q1"
            .parse()
            .expect("builtin gate program parses")
    }

    /// Smallest slot count this program fits on.
    pub fn min_slots(&self) -> usize {
        self.ops.iter().map(|g| g.max_slot() + 1).max().unwrap_or(0)
    }
}

impl std::fmt::Display for GateSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, g) in self.ops.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            match g {
                Gate::H(q) => write!(f, "H q{}", q + 1)?,
                Gate::S(q) => write!(f, "S q{}", q + 1)?,
                Gate::Cnot(c, t) => write!(f, "CNOT q{} q{}", c + 1, t + 1)?,
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for GateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        fn slot(tok: &str) -> Result<usize> {
            let digits = tok
                .strip_prefix('q')
                .or_else(|| tok.strip_prefix('Q'))
                .ok_or_else(|| Error::GateParse(format!("expected slot like 'q1', got '{tok}'")))?;
            let v: usize = digits
                .parse()
                .map_err(|_| Error::GateParse(format!("bad slot number in '{tok}'")))?;
            if v == 0 {
                return Err(Error::GateParse("slots are numbered from q1".into()));
            }
            Ok(v - 1)
        }

        let mut ops = Vec::new();
        for part in s.split(';') {
            let toks: Vec<&str> = part.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let gate = match (toks[0].to_ascii_uppercase().as_str(), toks.len()) {
                ("H", 2) => Gate::H(slot(toks[1])?),
                ("S", 2) => Gate::S(slot(toks[1])?),
                ("CNOT", 3) => {
                    let c = slot(toks[1])?;
                    let t = slot(toks[2])?;
                    if c == t {
                        return Err(Error::GateParse(
                            "CNOT control and target must differ".into(),
                        ));
                    }
                    Gate::Cnot(c, t)
                }
                (name, _) => {
                    return Err(Error::GateParse(format!(
                        "unknown gate or wrong arity in '{name}'"
                    )))
                }
            };
            ops.push(gate);
        }
        Ok(GateSpec { ops })
    }
}

/// The symplectic form `Omega = [[0, I], [I, 0]]` on `2n` bits.
pub fn omega(n: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(2 * n, 2 * n);
    for q in 0..n {
        m.set(q, n + q, true);
        m.set(n + q, q, true);
    }
    m
}

/// A phaseless Clifford map on `n` qubits: a symplectic `2n x 2n` matrix
/// acting on Pauli bit vectors by left multiplication.
#[derive(Clone, PartialEq, Eq)]
pub struct CliffordMap {
    n: usize,
    m: BitMatrix,
}

impl CliffordMap {
    pub fn identity(n: usize) -> Self {
        CliffordMap {
            n,
            m: BitMatrix::identity(2 * n),
        }
    }

    /// Wrap an existing matrix, checking shape and symplecticity.
    pub fn from_matrix(n: usize, m: BitMatrix) -> Result<Self> {
        if m.rows() != 2 * n || m.cols() != 2 * n {
            return Err(Error::InvariantViolation(format!(
                "matrix is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                2 * n,
                2 * n
            )));
        }
        let map = CliffordMap { n, m };
        if !map.is_symplectic() {
            return Err(Error::InvariantViolation(
                "matrix does not preserve the symplectic form".into(),
            ));
        }
        Ok(map)
    }

    /// Crate-internal wrap for matrices symplectic by construction.
    pub(crate) fn from_matrix_unchecked(n: usize, m: BitMatrix) -> Self {
        debug_assert_eq!(m.rows(), 2 * n);
        debug_assert_eq!(m.cols(), 2 * n);
        CliffordMap { n, m }
    }

    /// A single primitive gate on `n` qubits (gate fields are qubit indices).
    pub fn elementary(n: usize, gate: Gate) -> Result<Self> {
        if gate.max_slot() >= n {
            return Err(Error::QubitOutOfRange {
                index: gate.max_slot(),
                total: n,
            });
        }
        let mut m = BitMatrix::identity(2 * n);
        match gate {
            Gate::H(q) => {
                // Swap the X and Z columns of qubit q.
                m.set(q, q, false);
                m.set(n + q, n + q, false);
                m.set(n + q, q, true);
                m.set(q, n + q, true);
            }
            Gate::S(q) => {
                // X -> Y adds a Z component to the X column.
                m.set(n + q, q, true);
            }
            Gate::Cnot(c, t) => {
                // X_c -> X_c X_t and Z_t -> Z_c Z_t.
                m.set(t, c, true);
                m.set(n + c, n + t, true);
            }
        }
        Ok(CliffordMap { n, m })
    }

    /// Compile a gate program onto `k` slots.
    ///
    /// Matrices multiply in reading order, so the rightmost gate of the
    /// program is the innermost (first-acting) factor.
    pub fn compile(spec: &GateSpec, k: usize) -> Result<Self> {
        if spec.min_slots() > k {
            return Err(Error::SlotOutOfRange {
                slot: spec.min_slots(),
                total: k,
            });
        }
        let mut acc = CliffordMap::identity(k);
        for &g in &spec.ops {
            acc = acc.compose(&CliffordMap::elementary(k, g)?);
        }
        Ok(acc)
    }

    /// `self` after `first`: the map sending `p` to `self(first(p))`.
    #[must_use]
    pub fn compose(&self, first: &CliffordMap) -> CliffordMap {
        assert_eq!(self.n, first.n, "qubit count mismatch in compose");
        CliffordMap {
            n: self.n,
            m: self.m.mul(&first.m),
        }
    }

    /// Embed this `k`-qubit map onto the listed qubits of an `n_total`-qubit
    /// system, identity elsewhere. `positions[slot]` is the target qubit of
    /// each slot; positions must be distinct and in range.
    pub fn embed(&self, positions: &[usize], n_total: usize) -> Result<CliffordMap> {
        assert_eq!(positions.len(), self.n, "one position per slot required");
        let mut seen = std::collections::HashSet::new();
        for &p in positions {
            if p >= n_total {
                return Err(Error::QubitOutOfRange {
                    index: p,
                    total: n_total,
                });
            }
            if !seen.insert(p) {
                return Err(Error::RepeatedPosition(p));
            }
        }
        let mut m = BitMatrix::identity(2 * n_total);
        let k = self.n;
        // Global bit index of local bit `b` (x block then z block).
        let glob = |b: usize| {
            if b < k {
                positions[b]
            } else {
                n_total + positions[b - k]
            }
        };
        for row in 0..2 * k {
            let gr = glob(row);
            // Replace the identity row wholesale with the embedded gate row.
            m.set(gr, gr, false);
            for col in 0..2 * k {
                if self.m.get(row, col) {
                    m.set(gr, glob(col), true);
                }
            }
        }
        Ok(CliffordMap { n: n_total, m })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.m
    }

    /// Apply to a Pauli string.
    #[must_use]
    pub fn apply(&self, p: &PauliVec) -> PauliVec {
        assert_eq!(p.n_qubits(), self.n, "qubit count mismatch in apply");
        PauliVec::from_bits(self.m.mul_vec(p.bits()))
    }

    /// Apply to a matrix whose columns are Pauli bit vectors.
    #[must_use]
    pub fn apply_matrix(&self, columns: &BitMatrix) -> BitMatrix {
        assert_eq!(columns.rows(), 2 * self.n, "column height mismatch");
        self.m.mul(columns)
    }

    /// Check `M^T Omega M = Omega`.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        // Omega * M swaps the X and Z row blocks of M.
        let swapped: Vec<usize> = (0..2 * n).map(|r| (r + n) % (2 * n)).collect();
        let om = self.m.select_rows(&swapped);
        self.m.transpose().mul(&om) == omega(n)
    }

    /// Inverse map, using `M^{-1} = Omega M^T Omega` for symplectic `M`.
    #[must_use]
    pub fn inverse(&self) -> CliffordMap {
        let w = omega(self.n);
        CliffordMap {
            n: self.n,
            m: w.mul(&self.m.transpose()).mul(&w),
        }
    }
}

impl std::fmt::Debug for CliffordMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CliffordMap on {} qubits\n{:?}", self.n, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;
    use proptest::prelude::*;

    fn apply_str(map: &CliffordMap, s: &str) -> String {
        map.apply(&s.parse().unwrap()).to_string()
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let h = CliffordMap::elementary(1, Gate::H(0)).unwrap();
        assert_eq!(apply_str(&h, "X"), "Z");
        assert_eq!(apply_str(&h, "Z"), "X");
        assert_eq!(apply_str(&h, "Y"), "Y");
        assert!(h.is_symplectic());
    }

    #[test]
    fn phase_gate_action() {
        let s = CliffordMap::elementary(1, Gate::S(0)).unwrap();
        assert_eq!(apply_str(&s, "X"), "Y");
        assert_eq!(apply_str(&s, "Z"), "Z");
        assert_eq!(apply_str(&s, "Y"), "X");
        // Phaseless S is an involution.
        assert_eq!(s.compose(&s), CliffordMap::identity(1));
    }

    #[test]
    fn cnot_action_on_basis() {
        let c = CliffordMap::elementary(2, Gate::Cnot(0, 1)).unwrap();
        assert_eq!(apply_str(&c, "XI"), "XX");
        assert_eq!(apply_str(&c, "IX"), "IX");
        assert_eq!(apply_str(&c, "ZI"), "ZI");
        assert_eq!(apply_str(&c, "IZ"), "ZZ");
        assert_eq!(apply_str(&c, "YI"), "YX");
        assert!(c.is_symplectic());
    }

    #[test]
    fn compile_w_matches_worked_examples() {
        let w = CliffordMap::compile(&GateSpec::w(), 4).unwrap();
        // A single X on the first qubit spreads to the boundary pair...
        assert_eq!(apply_str(&w, "XIII"), "ZIIZ");
        // ...while the all-Z string shrinks to two qubits.
        assert_eq!(apply_str(&w, "ZZZZ"), "YYII");
        assert!(w.is_symplectic());
    }

    #[test]
    fn compile_w_new_is_symplectic_and_acts() {
        let w = CliffordMap::compile(&GateSpec::w_new(), 4).unwrap();
        assert!(w.is_symplectic());
        // Identity must stay identity; a generic input must move.
        assert_eq!(apply_str(&w, "IIII"), "IIII");
        assert_ne!(apply_str(&w, "XIII"), "XIII");
    }

    #[test]
    fn compile_empty_is_identity() {
        let id = CliffordMap::compile(&GateSpec::empty(), 3).unwrap();
        assert_eq!(id, CliffordMap::identity(3));
    }

    #[test]
    fn compile_rejects_missing_slots() {
        let err = CliffordMap::compile(&GateSpec::w(), 3).unwrap_err();
        assert!(matches!(err, Error::SlotOutOfRange { .. }));
    }

    #[test]
    fn compose_is_right_to_left() {
        // compose(h, s): apply S first, then H. X -> Y -> Y.
        let h = CliffordMap::elementary(1, Gate::H(0)).unwrap();
        let s = CliffordMap::elementary(1, Gate::S(0)).unwrap();
        assert_eq!(apply_str(&h.compose(&s), "X"), "Y");
        // The other order: X -> Z -> Z.
        assert_eq!(apply_str(&s.compose(&h), "X"), "Z");
    }

    #[test]
    fn embed_on_scattered_positions() {
        let c = CliffordMap::elementary(2, Gate::Cnot(0, 1)).unwrap();
        // Control on qubit 2, target on qubit 0 of a 3-qubit register.
        let e = c.embed(&[2, 0], 3).unwrap();
        assert_eq!(apply_str(&e, "IIX"), "XIX");
        assert_eq!(apply_str(&e, "ZII"), "ZIZ");
        assert_eq!(apply_str(&e, "IXI"), "IXI");
        assert!(e.is_symplectic());
    }

    #[test]
    fn embed_rejects_bad_positions() {
        let c = CliffordMap::elementary(2, Gate::Cnot(0, 1)).unwrap();
        assert!(matches!(
            c.embed(&[1, 3], 3).unwrap_err(),
            Error::QubitOutOfRange { .. }
        ));
        assert!(matches!(
            c.embed(&[1, 1], 3).unwrap_err(),
            Error::RepeatedPosition(1)
        ));
    }

    #[test]
    fn gate_spec_roundtrip_and_errors() {
        let w = GateSpec::w();
        let text = w.to_string();
        assert_eq!(text.parse::<GateSpec>().unwrap(), w);
        assert!("FOO q1".parse::<GateSpec>().is_err());
        assert!("H 1".parse::<GateSpec>().is_err());
        assert!("CNOT q1 q1".parse::<GateSpec>().is_err());
        assert!("S q0".parse::<GateSpec>().is_err());
    }

    #[test]
    fn inverse_undoes_w() {
        let w = CliffordMap::compile(&GateSpec::w(), 4).unwrap();
        assert_eq!(w.compose(&w.inverse()), CliffordMap::identity(4));
        assert_eq!(w.inverse().compose(&w), CliffordMap::identity(4));
    }

    #[test]
    fn from_matrix_validates() {
        assert!(CliffordMap::from_matrix(2, BitMatrix::identity(4)).is_ok());
        assert!(CliffordMap::from_matrix(2, BitMatrix::zeros(4, 4)).is_err());
        assert!(CliffordMap::from_matrix(2, BitMatrix::identity(3)).is_err());
    }

    fn arb_gate(k: usize) -> impl Strategy<Value = Gate> {
        prop_oneof![
            (0..k).prop_map(Gate::H),
            (0..k).prop_map(Gate::S),
            (0..k, 0..k - 1).prop_map(|(c, t)| {
                let t = if t >= c { t + 1 } else { t };
                Gate::Cnot(c, t)
            }),
        ]
    }

    proptest! {
        #[test]
        fn random_programs_are_symplectic(ops in proptest::collection::vec(arb_gate(4), 0..24)) {
            let m = CliffordMap::compile(&GateSpec::new(ops), 4).unwrap();
            prop_assert!(m.is_symplectic());
            prop_assert_eq!(m.compose(&m.inverse()), CliffordMap::identity(4));
        }

        #[test]
        fn maps_preserve_commutation(
            ops in proptest::collection::vec(arb_gate(4), 0..24),
            a in proptest::collection::vec(0u8..4, 4),
            b in proptest::collection::vec(0u8..4, 4),
        ) {
            let letter = |k: u8| match k {
                0 => Pauli::I,
                1 => Pauli::X,
                2 => Pauli::Y,
                _ => Pauli::Z,
            };
            let mut pa = PauliVec::identity(4);
            let mut pb = PauliVec::identity(4);
            for q in 0..4 {
                pa.set_at(q, letter(a[q]));
                pb.set_at(q, letter(b[q]));
            }
            let m = CliffordMap::compile(&GateSpec::new(ops), 4).unwrap();
            prop_assert_eq!(
                m.apply(&pa).symplectic_product(&m.apply(&pb)),
                pa.symplectic_product(&pb)
            );
        }
    }
}
