//! Hayden-Preskill style erasure recovery for the evolved stabilizer code.
//!
//! Preparing `|phi>_A (x) |0...0>_{A^c}` and running the circuit encodes the
//! `q = |A|` input qubits into a stabilizer code: the evolved `Z_k` (for `k`
//! outside `A`) are the stabilizers `S`, the evolved `X_a, Z_a` (for `a` in
//! `A`) the logical pairs `L`. Erasing a set `B` of `r` qubits is harmless
//! exactly when every logical can be dressed by a stabilizer combination
//! into an operator with no support on `B` — over GF(2) that is the rank
//! condition `colspace(S_B) contains colspace(L_B)`, where `_B` keeps the X
//! and Z rows of the erased qubits.

use crate::diagnostics::{build_region, check_region, pauli_rows};
use crate::error::{Error, Result};
use crate::floquet::FloquetCircuit;
use crate::gf2::{BitMatrix, BitVec};
use crate::par;
use serde::Serialize;

/// Initial stabilizer and logical generators for an encoding region `A`.
#[derive(Clone, Debug)]
pub struct CodeMatrices {
    total: usize,
    region: Vec<usize>,
    /// `2n x (n - q)`: column `j` is `Z_k` for the `j`-th qubit `k` not in A.
    stabilizers: BitMatrix,
    /// `2n x 2q`: columns `2a, 2a+1` are `X, Z` of the `a`-th qubit of A.
    logicals: BitMatrix,
}

impl CodeMatrices {
    pub fn total_qubits(&self) -> usize {
        self.total
    }

    pub fn region(&self) -> &[usize] {
        &self.region
    }

    pub fn stabilizers(&self) -> &BitMatrix {
        &self.stabilizers
    }

    pub fn logicals(&self) -> &BitMatrix {
        &self.logicals
    }
}

/// Build the code matrices for a region of an `n`-qubit system.
pub fn build_code(total: usize, region: &[usize]) -> Result<CodeMatrices> {
    check_region(region, total)?;
    let q = region.len();
    if q == total {
        return Err(Error::RegionTooLarge { size: q, total });
    }
    let mut stabilizers = BitMatrix::zeros(2 * total, total - q);
    let mut j = 0;
    for k in 0..total {
        if !region.contains(&k) {
            stabilizers.set(total + k, j, true);
            j += 1;
        }
    }
    let mut logicals = BitMatrix::zeros(2 * total, 2 * q);
    for (a, &k) in region.iter().enumerate() {
        logicals.set(k, 2 * a, true);
        logicals.set(total + k, 2 * a + 1, true);
    }
    Ok(CodeMatrices {
        total,
        region: region.to_vec(),
        stabilizers,
        logicals,
    })
}

/// A set of erased qubits.
#[derive(Clone, Debug)]
pub struct ErasurePattern {
    qubits: Vec<usize>,
}

impl ErasurePattern {
    /// Erase the given qubits (any order, duplicates rejected).
    pub fn new(mut qubits: Vec<usize>, total: usize) -> Result<Self> {
        qubits.sort_unstable();
        check_region(&qubits, total)?;
        Ok(Self { qubits })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }
}

/// Largest erasure size `r = q` that can possibly be recovered: `total / 3`.
pub fn recovery_boundary(total: usize) -> usize {
    total / 3
}

fn restrict(m: &BitMatrix, erased: &ErasurePattern, total: usize) -> BitMatrix {
    pauli_rows(m, &erased.qubits, total)
}

/// Does the time-`t` code recover from erasing `B`? True iff the erased-row
/// restriction of the evolved stabilizers spans that of the logicals.
pub fn recovery_check(
    circuit: &FloquetCircuit,
    code: &CodeMatrices,
    erased: &ErasurePattern,
    t: usize,
) -> Result<bool> {
    let total = circuit.total_qubits();
    assert_eq!(code.total, total, "code built for a different system size");
    let s = circuit.evolve_matrix(&code.stabilizers, t);
    let l = circuit.evolve_matrix(&code.logicals, t);
    Ok(check_at(&s, &l, erased, total))
}

fn check_at(s: &BitMatrix, l: &BitMatrix, erased: &ErasurePattern, total: usize) -> bool {
    let s_r = restrict(s, erased, total);
    let l_r = restrict(l, erased, total);
    s_r.colspace_contains(&l_r)
}

/// Dressed logicals at time `t`: per logical column, a stabilizer
/// combination that cancels its support on the erased qubits, when one
/// exists.
#[derive(Clone, Debug)]
pub struct Dressing {
    /// Per logical: coefficients over the evolved stabilizer columns.
    pub combinations: Vec<Option<BitVec>>,
    /// Per logical: the dressed operator `L(t) + S(t) c`, zero on all erased
    /// rows whenever a combination was found.
    pub dressed: Vec<Option<BitVec>>,
}

impl Dressing {
    /// Indices of logicals that could not be dressed.
    pub fn failures(&self) -> Vec<usize> {
        self.combinations
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.is_none().then_some(i))
            .collect()
    }
}

/// Solve for stabilizer dressings of every logical at time `t`.
pub fn recovery_logical(
    circuit: &FloquetCircuit,
    code: &CodeMatrices,
    erased: &ErasurePattern,
    t: usize,
) -> Result<Dressing> {
    let total = circuit.total_qubits();
    assert_eq!(code.total, total, "code built for a different system size");
    let s = circuit.evolve_matrix(&code.stabilizers, t);
    let l = circuit.evolve_matrix(&code.logicals, t);
    let s_r = restrict(&s, erased, total);
    let l_r = restrict(&l, erased, total);
    let mut combinations = Vec::with_capacity(l.cols());
    let mut dressed = Vec::with_capacity(l.cols());
    for j in 0..l.cols() {
        let target = l_r.col_bitvec(j);
        match s_r.solve(&target) {
            Some(c) => {
                let mut d = l.col_bitvec(j);
                d ^= &s.mul_vec(&c);
                debug_assert!(
                    erased
                        .qubits
                        .iter()
                        .all(|&b| !d.get(b) && !d.get(total + b)),
                    "dressed logical keeps erased support"
                );
                combinations.push(Some(c));
                dressed.push(Some(d));
            }
            None => {
                combinations.push(None);
                dressed.push(None);
            }
        }
    }
    Ok(Dressing {
        combinations,
        dressed,
    })
}

/// One cell of a recovery scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    #[serde(rename = "ref")]
    pub reference: usize,
    pub r: usize,
    pub t: usize,
    pub recovered: bool,
}

/// Scan `recovery_check` over references, region sizes and `t = 0..=t_max`,
/// erasing the encoding region itself (`B = A`, `r = q`). Cells are
/// independent and run in parallel; entries come back ordered by
/// `(reference, r, t)` position in the inputs.
pub fn recovery_scan(
    circuit: &FloquetCircuit,
    references: &[usize],
    r_values: &[usize],
    t_max: usize,
) -> Result<Vec<ScanEntry>> {
    let mut tasks = Vec::with_capacity(references.len() * r_values.len());
    for &reference in references {
        for &r in r_values {
            tasks.push((reference, r));
        }
    }
    let cells = par::map_collect(tasks, |(reference, r)| -> Result<Vec<ScanEntry>> {
        let region = build_region(circuit, reference, r)?;
        let code = build_code(circuit.total_qubits(), &region.qubits)?;
        let erased = ErasurePattern::new(region.qubits.clone(), circuit.total_qubits())?;
        let total = circuit.total_qubits();
        let mut s = code.stabilizers.clone();
        let mut l = code.logicals.clone();
        let mut out = Vec::with_capacity(t_max + 1);
        for t in 0..=t_max {
            if t > 0 {
                s = circuit.step_matrix(&s);
                l = circuit.step_matrix(&l);
            }
            out.push(ScanEntry {
                reference,
                r,
                t,
                recovered: check_at(&s, &l, &erased, total),
            });
        }
        Ok(out)
    });
    let mut entries = Vec::with_capacity(tasks_len(references, r_values, t_max));
    for cell in cells {
        entries.extend(cell?);
    }
    Ok(entries)
}

fn tasks_len(references: &[usize], r_values: &[usize], t_max: usize) -> usize {
    references.len() * r_values.len() * (t_max + 1)
}

/// Non-monotonicity verdict for one `(reference, r)` row of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonMonotonicity {
    pub reference: usize,
    pub r: usize,
    /// True when the row recovers, loses recovery, then recovers again.
    pub flag: bool,
}

/// One (reference, r) row of a scan: the key and its (t, recovered) samples.
type ScanRow = ((usize, usize), Vec<(usize, bool)>);

fn scan_rows(entries: &[ScanEntry]) -> Vec<ScanRow> {
    let mut rows: Vec<ScanRow> = Vec::new();
    for e in entries {
        let key = (e.reference, e.r);
        match rows.iter_mut().find(|(k, _)| *k == key) {
            Some((_, row)) => row.push((e.t, e.recovered)),
            None => rows.push((key, vec![(e.t, e.recovered)])),
        }
    }
    for (_, row) in &mut rows {
        row.sort_unstable_by_key(|&(t, _)| t);
    }
    rows
}

/// Flag every `(reference, r)` row that goes recovered -> lost -> recovered.
pub fn nonmonotonicity_flags(entries: &[ScanEntry]) -> Vec<NonMonotonicity> {
    scan_rows(entries)
        .into_iter()
        .map(|((reference, r), row)| {
            let mut seen_true = false;
            let mut seen_true_false = false;
            let mut flag = false;
            for &(_, rec) in &row {
                if rec {
                    if seen_true_false {
                        flag = true;
                    }
                    seen_true = true;
                } else if seen_true {
                    seen_true_false = true;
                }
            }
            NonMonotonicity { reference, r, flag }
        })
        .collect()
}

/// Earliest scanned `t` after which every `(reference, r <= boundary)` row
/// stays recovered through the end of the scan; `None` if any such row ends
/// unrecovered.
pub fn general_recovery_time(entries: &[ScanEntry], boundary: usize) -> Option<usize> {
    let mut t0 = 0usize;
    let mut saw_row = false;
    for ((_, r), row) in scan_rows(entries) {
        if r > boundary {
            continue;
        }
        saw_row = true;
        // First index from which the row is true to the end.
        let mut row_t0 = None;
        for &(t, rec) in row.iter().rev() {
            if rec {
                row_t0 = Some(t);
            } else {
                break;
            }
        }
        t0 = t0.max(row_t0?);
    }
    saw_row.then_some(t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::GateSpec;
    use crate::connectivity::Rule;
    use crate::lattice::Layout;
    use crate::pauli::PauliVec;

    fn circuit(n: usize, rule: Rule) -> FloquetCircuit {
        FloquetCircuit::new(Layout::single(n).unwrap(), rule, GateSpec::w()).unwrap()
    }

    fn column_pauli(m: &BitMatrix, j: usize) -> PauliVec {
        PauliVec::from_bits(m.col_bitvec(j))
    }

    #[test]
    fn code_counts_and_commutation() {
        let code = build_code(4, &[1]).unwrap();
        assert_eq!(code.stabilizers().cols(), 3);
        assert_eq!(code.logicals().cols(), 2);
        let x = column_pauli(code.logicals(), 0);
        let z = column_pauli(code.logicals(), 1);
        assert_eq!(x.symplectic_product(&z), 1);
        for j in 0..3 {
            let s = column_pauli(code.stabilizers(), j);
            assert_eq!(s.symplectic_product(&x), 0);
            assert_eq!(s.symplectic_product(&z), 0);
            for k in 0..3 {
                let s2 = column_pauli(code.stabilizers(), k);
                assert_eq!(s.symplectic_product(&s2), 0);
            }
        }
        let all = code.stabilizers().hstack(code.logicals());
        assert_eq!(all.rank(), 4 + 1);
    }

    #[test]
    fn code_rejects_degenerate_regions() {
        assert!(matches!(build_code(4, &[]), Err(Error::EmptyRegion)));
        assert!(matches!(
            build_code(4, &[0, 1, 2, 3]),
            Err(Error::RegionTooLarge { size: 4, total: 4 })
        ));
        assert!(build_code(4, &[5]).is_err());
    }

    #[test]
    fn unevolved_code_never_recovers_its_own_region() {
        let c = circuit(4, Rule::Rule2);
        for region in [vec![0], vec![2, 7, 11], (0..5).collect::<Vec<_>>()] {
            let code = build_code(16, &region).unwrap();
            let erased = ErasurePattern::new(region, 16).unwrap();
            assert!(!recovery_check(&c, &code, &erased, 0).unwrap());
        }
    }

    #[test]
    fn commutation_structure_survives_evolution() {
        let c = circuit(4, Rule::Rule1);
        let code = build_code(16, &[0, 3, 9]).unwrap();
        let s = c.evolve_matrix(code.stabilizers(), 7);
        let l = c.evolve_matrix(code.logicals(), 7);
        for a in 0..l.cols() {
            let pa = column_pauli(&l, a);
            for b in 0..l.cols() {
                let expected = u8::from(a / 2 == b / 2 && a != b);
                assert_eq!(pa.symplectic_product(&column_pauli(&l, b)), expected);
            }
            for j in 0..s.cols() {
                assert_eq!(pa.symplectic_product(&column_pauli(&s, j)), 0);
            }
        }
    }

    #[test]
    fn full_rank_restriction_is_sufficient() {
        let c = circuit(4, Rule::Rule2);
        let total = 16;
        for (region, t) in [(vec![0usize], 3), (vec![1, 6], 5), (vec![0, 5, 10], 8)] {
            let code = build_code(total, &region).unwrap();
            let erased = ErasurePattern::new(region.clone(), total).unwrap();
            let s = c.evolve_matrix(code.stabilizers(), t);
            let s_r = restrict(&s, &erased, total);
            if 2 * erased.len() <= total - region.len() && s_r.rank() == 2 * erased.len() {
                assert!(recovery_check(&c, &code, &erased, t).unwrap());
            }
        }
    }

    #[test]
    fn dressed_logicals_clear_erased_support_and_keep_pairs() {
        // Reference 2 sits in the 8-qubit dynamical component of rule 1 at
        // N = 4; r = 2 there is recovered at t = 12.
        let c = circuit(4, Rule::Rule1);
        let total = 16;
        let region = build_region(&c, 2, 2).unwrap().qubits;
        let code = build_code(total, &region).unwrap();
        let erased = ErasurePattern::new(region.clone(), total).unwrap();
        let t = 12;
        assert!(recovery_check(&c, &code, &erased, t).unwrap());
        let dressing = recovery_logical(&c, &code, &erased, t).unwrap();
        assert!(dressing.failures().is_empty());
        let s = c.evolve_matrix(code.stabilizers(), t);
        let paulis: Vec<PauliVec> = dressing
            .dressed
            .iter()
            .map(|d| PauliVec::from_bits(d.clone().unwrap()))
            .collect();
        for (a, p) in paulis.iter().enumerate() {
            for &b in &region {
                assert_eq!(p.at(b), crate::pauli::Pauli::I, "logical {a} touches {b}");
            }
            // Dressing by stabilizers preserves the canonical pair algebra.
            for (b, pb) in paulis.iter().enumerate() {
                let expected = u8::from(a / 2 == b / 2 && a != b);
                assert_eq!(p.symplectic_product(pb), expected);
            }
            // The combination really lies in the evolved stabilizer span.
            let comb = dressing.combinations[a].as_ref().unwrap();
            let dressed_back = {
                let mut v = c.evolve_matrix(code.logicals(), t).col_bitvec(a);
                v ^= &s.mul_vec(comb);
                v
            };
            assert_eq!(&dressed_back, &dressing.dressed[a].clone().unwrap());
        }
    }

    #[test]
    fn scan_matches_pointwise_checks_and_reverses_cleanly() {
        let c = circuit(4, Rule::Rule2);
        let total = 16;
        let entries = recovery_scan(&c, &[0, 5], &[1, 3], 6).unwrap();
        assert_eq!(entries.len(), 2 * 2 * 7);
        for e in &entries {
            let region = build_region(&c, e.reference, e.r).unwrap().qubits;
            let code = build_code(total, &region).unwrap();
            let erased = ErasurePattern::new(region, total).unwrap();
            assert_eq!(
                recovery_check(&c, &code, &erased, e.t).unwrap(),
                e.recovered,
                "cell {e:?}"
            );
        }

        // Running the inverse map down from the fully evolved code must
        // retrace the same row of booleans backwards.
        let t_end = 6;
        let region = build_region(&c, 0, 3).unwrap().qubits;
        let code = build_code(total, &region).unwrap();
        let erased = ErasurePattern::new(region, total).unwrap();
        let inv = c.step_map().inverse();
        let mut s = c.evolve_matrix(code.stabilizers(), t_end);
        let mut l = c.evolve_matrix(code.logicals(), t_end);
        for u in 0..=t_end {
            let forward = recovery_check(&c, &code, &erased, t_end - u).unwrap();
            assert_eq!(check_at(&s, &l, &erased, total), forward, "u = {u}");
            s = inv.apply_matrix(&s);
            l = inv.apply_matrix(&l);
        }
    }

    #[test]
    fn small_lattice_recovery_boundary() {
        // N = 4: 16 qubits, boundary at r = 5; r = 6 needs 2r <= n - q,
        // i.e. 12 <= 10, impossible at every t.
        let c = circuit(4, Rule::Rule2);
        assert_eq!(recovery_boundary(16), 5);
        let entries = recovery_scan(&c, &[0], &[6], 12).unwrap();
        assert!(entries.iter().all(|e| !e.recovered));
        let late = recovery_scan(&c, &[0], &[1, 2, 3], 12).unwrap();
        for e in late.iter().filter(|e| e.t == 12) {
            assert!(e.recovered, "r = {} not recovered at t = 12", e.r);
        }
    }

    #[test]
    fn nonmonotonicity_flag_logic() {
        let mk = |r: usize, pattern: &[bool]| -> Vec<ScanEntry> {
            pattern
                .iter()
                .enumerate()
                .map(|(t, &recovered)| ScanEntry {
                    reference: 0,
                    r,
                    t,
                    recovered,
                })
                .collect()
        };
        let mut entries = mk(1, &[false, false, true, true]);
        entries.extend(mk(2, &[false, true, false, true]));
        let flags = nonmonotonicity_flags(&entries);
        assert_eq!(flags.len(), 2);
        assert!(!flags[0].flag);
        assert!(flags[1].flag);

        // Rows stabilize at t = 2 and t = 3 -> general recovery at 3.
        assert_eq!(general_recovery_time(&entries, 5), Some(3));
        // A row that ends unrecovered blocks the verdict...
        let mut bad = entries.clone();
        bad.extend(mk(3, &[false, true, true, false]));
        assert_eq!(general_recovery_time(&bad, 5), None);
        // ...unless it sits beyond the boundary.
        assert_eq!(general_recovery_time(&bad, 2), Some(3));
    }

    #[test]
    fn erasure_pattern_validation() {
        assert!(ErasurePattern::new(vec![], 16).is_err());
        assert!(ErasurePattern::new(vec![4, 4], 16).is_err());
        assert!(ErasurePattern::new(vec![16], 16).is_err());
        let p = ErasurePattern::new(vec![7, 2], 16).unwrap();
        assert_eq!(p.qubits(), &[2, 7]);
        assert_eq!(p.len(), 2);
        assert!(!p.is_empty());
    }
}
