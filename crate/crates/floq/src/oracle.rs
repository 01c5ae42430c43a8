//! Independent dense (state-vector) cross-checks for the GF(2) fast path.
//!
//! Everything here works with explicit complex matrices and state vectors,
//! sharing no code with the symplectic representation beyond the gate
//! program and partition combinatorics. That makes it exponentially slow and
//! deliberately so: it exists to validate the bit-packed implementation on
//! tiny systems (conjugation up to 4 qubits, entropy up to 12 qubits) and is
//! only exercised from tests and the validation suite, never from production
//! paths.
//!
//! Basis convention: computational basis index `b` carries qubit `q` in bit
//! `q` (little-endian). Pauli phases are kept exactly, with the Hermitian
//! `Y = [[0, -i], [i, 0]]`.

use crate::clifford::{Gate, GateSpec};
use crate::error::{Error, Result};
use crate::floquet::FloquetCircuit;
use crate::pauli::PauliVec;
use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn bit(b: usize, q: usize) -> bool {
    b >> q & 1 == 1
}

/// Dense unitary of one primitive gate on `k` qubits.
fn gate_dense(g: Gate, k: usize) -> DMatrix<Complex64> {
    let dim = 1usize << k;
    let mut m = DMatrix::zeros(dim, dim);
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for col in 0..dim {
        match g {
            Gate::H(q) => {
                m[(col & !(1 << q), col)] += inv_sqrt2;
                m[(col | (1 << q), col)] += if bit(col, q) { -inv_sqrt2 } else { inv_sqrt2 };
            }
            Gate::S(q) => {
                m[(col, col)] = if bit(col, q) {
                    Complex64::new(0.0, 1.0)
                } else {
                    ONE
                };
            }
            Gate::Cnot(c, t) => {
                let row = if bit(col, c) { col ^ (1 << t) } else { col };
                m[(row, col)] = ONE;
            }
        }
    }
    m
}

/// Dense unitary of a whole gate program on `k` qubits, multiplying factors
/// in reading order (the rightmost gate acts first on states too).
fn spec_dense(spec: &GateSpec, k: usize) -> Result<DMatrix<Complex64>> {
    if spec.min_slots() > k {
        return Err(Error::SlotOutOfRange {
            slot: spec.min_slots(),
            total: k,
        });
    }
    let dim = 1usize << k;
    let mut acc = DMatrix::identity(dim, dim);
    for &g in &spec.ops {
        acc *= gate_dense(g, k);
    }
    Ok(acc)
}

/// Dense Hermitian matrix of a phaseless Pauli string (Y carries its usual
/// phases so the matrix is exactly Hermitian).
fn pauli_dense(p: &PauliVec) -> DMatrix<Complex64> {
    let k = p.n_qubits();
    let dim = 1usize << k;
    let mut xmask = 0usize;
    let mut m = DMatrix::zeros(dim, dim);
    for q in 0..k {
        let (x, _) = p.at(q).components();
        if x {
            xmask |= 1 << q;
        }
    }
    for col in 0..dim {
        let mut amp = ONE;
        for q in 0..k {
            let (x, z) = p.at(q).components();
            let v = bit(col, q);
            if x && z {
                // Y|0> = i|1>, Y|1> = -i|0>
                amp *= if v {
                    Complex64::new(0.0, -1.0)
                } else {
                    Complex64::new(0.0, 1.0)
                };
            } else if z && v {
                amp = -amp;
            }
        }
        m[(col ^ xmask, col)] = amp;
    }
    m
}

/// Conjugate a Pauli string by a gate program, densely: compute
/// `U P U^dagger` and identify the result as a phaseless Pauli string.
///
/// Fails with [`Error::NotAPauli`] if the result is not a Pauli up to a
/// unimodular phase within 1e-9 (impossible for Clifford programs; this is
/// the oracle's internal consistency check).
pub fn dense_conjugate(spec: &GateSpec, p: &PauliVec) -> Result<PauliVec> {
    let k = p.n_qubits();
    if k > 4 {
        return Err(Error::OracleLimit(format!(
            "dense conjugation supports at most 4 qubits, got {k}"
        )));
    }
    let u = spec_dense(spec, k)?;
    let r = &u * pauli_dense(p) * u.adjoint();
    let dim = 1usize << k;

    // Project onto every candidate string; exactly one coefficient must be
    // unimodular and the residual must vanish.
    let mut best: Option<(PauliVec, Complex64)> = None;
    for xmask in 0..dim {
        for zmask in 0..dim {
            let mut cand = PauliVec::identity(k);
            for q in 0..k {
                let letter = match (bit(xmask, q), bit(zmask, q)) {
                    (false, false) => crate::pauli::Pauli::I,
                    (true, false) => crate::pauli::Pauli::X,
                    (true, true) => crate::pauli::Pauli::Y,
                    (false, true) => crate::pauli::Pauli::Z,
                };
                cand.set_at(q, letter);
            }
            let cd = pauli_dense(&cand);
            // tr(Q R) / dim, using Q Hermitian.
            let mut tr = ZERO;
            for i in 0..dim {
                for j in 0..dim {
                    tr += cd[(i, j)] * r[(j, i)];
                }
            }
            let coeff = tr / Complex64::new(dim as f64, 0.0);
            if coeff.norm() > 0.5 {
                best = Some((cand, coeff));
            }
        }
    }
    let Some((cand, coeff)) = best else {
        return Err(Error::NotAPauli(format!("no dominant term for {p}")));
    };
    if (coeff.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::NotAPauli(format!(
            "dominant coefficient {coeff} for {p} is not unimodular"
        )));
    }
    let residual = &r - pauli_dense(&cand) * coeff;
    if residual.iter().any(|c| c.norm() > 1e-9) {
        return Err(Error::NotAPauli(format!("residual after matching {cand}")));
    }
    Ok(cand)
}

/// Dense state-vector simulator for one circuit, applying the shuffle as a
/// basis relabeling and the coupling gate as a 16x16 update per cycle.
struct DenseState {
    amps: Vec<Complex64>,
}

impl DenseState {
    fn zeros(total: usize) -> Self {
        let mut amps = vec![ZERO; 1 << total];
        amps[0] = ONE;
        DenseState { amps }
    }

    /// Relabel qubits: the value at qubit `q` moves to qubit `perm[q]`.
    fn permute(&mut self, perm: &[usize]) {
        let dim = self.amps.len();
        let mut out = vec![ZERO; dim];
        for (b, amp) in self.amps.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let mut nb = 0usize;
            for (q, &image) in perm.iter().enumerate() {
                if bit(b, q) {
                    nb |= 1 << image;
                }
            }
            out[nb] = *amp;
        }
        self.amps = out;
    }

    /// Apply a 16x16 unitary to the four qubits of one cycle (slot `s` of
    /// the gate acts on qubit `cycle[s]`).
    fn apply_cycle(&mut self, u: &DMatrix<Complex64>, cycle: &[usize; 4]) {
        let mut offsets = [0usize; 16];
        for (l, off) in offsets.iter_mut().enumerate() {
            for (s, &q) in cycle.iter().enumerate() {
                if bit(l, s) {
                    *off |= 1 << q;
                }
            }
        }
        let mask: usize = cycle.iter().map(|&q| 1usize << q).sum();
        let dim = self.amps.len();
        let mut local = [ZERO; 16];
        for base in 0..dim {
            if base & mask != 0 {
                continue;
            }
            for (l, off) in offsets.iter().enumerate() {
                local[l] = self.amps[base | off];
            }
            for (row, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (col, &amp) in local.iter().enumerate() {
                    acc += u[(row, col)] * amp;
                }
                self.amps[base | off] = acc;
            }
        }
    }
}

/// Von Neumann entropy (in bits) of a qubit region after `t` steps of the
/// circuit applied to the all-zeros state, computed densely.
///
/// `region` must be non-empty, sorted, duplicate-free and in range; the
/// circuit may have at most 12 qubits.
pub fn dense_entropy(circuit: &FloquetCircuit, region: &[usize], t: usize) -> Result<f64> {
    let total = circuit.total_qubits();
    if total > 12 {
        return Err(Error::OracleLimit(format!(
            "dense entropy supports at most 12 qubits, got {total}"
        )));
    }
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    for w in region.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvariantViolation(
                "region must be sorted and duplicate-free".into(),
            ));
        }
    }
    if *region.last().unwrap() >= total {
        return Err(Error::QubitOutOfRange {
            index: *region.last().unwrap(),
            total,
        });
    }

    let u = spec_dense(circuit.gate_spec(), 4)?;
    let mut state = DenseState::zeros(total);
    for _ in 0..t {
        state.permute(circuit.qubit_perm());
        for cycle in circuit.partition().subsets() {
            state.apply_cycle(&u, cycle);
        }
    }

    // Reshape into |A| x |A^c| and form the reduced density matrix.
    let in_region: Vec<bool> = {
        let mut v = vec![false; total];
        for &q in region {
            v[q] = true;
        }
        v
    };
    let (mut apos, mut cpos) = (Vec::new(), Vec::new());
    for (q, &inside) in in_region.iter().enumerate() {
        if inside {
            apos.push(q);
        } else {
            cpos.push(q);
        }
    }
    let (da, dc) = (1usize << apos.len(), 1usize << cpos.len());
    let mut psi = DMatrix::<Complex64>::zeros(da, dc);
    for (b, amp) in state.amps.iter().enumerate() {
        let mut ia = 0usize;
        for (k, &q) in apos.iter().enumerate() {
            if bit(b, q) {
                ia |= 1 << k;
            }
        }
        let mut ic = 0usize;
        for (k, &q) in cpos.iter().enumerate() {
            if bit(b, q) {
                ic |= 1 << k;
            }
        }
        psi[(ia, ic)] = *amp;
    }
    let rho = &psi * psi.adjoint();
    let mut entropy = 0.0f64;
    for lambda in rho.symmetric_eigenvalues().iter() {
        if *lambda > 1e-12 {
            entropy -= lambda * lambda.log2();
        }
    }
    Ok(entropy)
}
