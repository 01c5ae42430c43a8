//! Assembly and application of the one-step Floquet map.
//!
//! A step acts on Pauli strings as `p -> M_int M_perm p`: first the shuffle
//! relabeling of [`crate::lattice`], then the four-qubit gate on every cycle
//! of the partition ("permute, then interact", matching the infection
//! model). All gates in one step act on disjoint qubits, so the interaction
//! matrix is assembled block-by-block; a literal gate-by-gate product is
//! kept as a debug path and must agree bit for bit.

use crate::clifford::{CliffordMap, GateSpec};
use crate::connectivity::{Partition, Rule};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::lattice::{perm_map, qubit_permutation, Layout};
use crate::pauli::PauliVec;

/// A fixed circuit: layout, partition, coupling gate and the compiled
/// one-step symplectic map.
#[derive(Clone)]
pub struct FloquetCircuit {
    partition: Partition,
    gate_spec: GateSpec,
    gate: CliffordMap,
    qubit_perm: Vec<usize>,
    step: CliffordMap,
}

impl FloquetCircuit {
    /// Build the circuit for a layout, partition rule and 4-slot gate
    /// program.
    pub fn new(layout: Layout, rule: Rule, gate_spec: GateSpec) -> Result<Self> {
        FloquetCircuit::with_partition(Partition::build(layout, rule)?, gate_spec)
    }

    /// Build from an existing partition (mainly for tests with hand-made
    /// covers).
    pub fn with_partition(partition: Partition, gate_spec: GateSpec) -> Result<Self> {
        let gate = CliffordMap::compile(&gate_spec, 4)?;
        let layout = partition.layout();
        let total = layout.total_qubits();
        let qubit_perm = qubit_permutation(layout);

        // Assemble the interaction round directly: gates act on disjoint
        // cycles, so each embedded block lands on untouched rows.
        let mut m = BitMatrix::identity(2 * total);
        let gm = gate.matrix();
        for cycle in partition.subsets() {
            let glob = |b: usize| {
                if b < 4 {
                    cycle[b]
                } else {
                    total + cycle[b - 4]
                }
            };
            for row in 0..8 {
                let gr = glob(row);
                m.set(gr, gr, false);
                for col in 0..8 {
                    if gm.get(row, col) {
                        m.set(gr, glob(col), true);
                    }
                }
            }
        }
        let interaction = CliffordMap::from_matrix_unchecked(total, m);
        let step = interaction.compose(&perm_map(layout));
        if !step.is_symplectic() {
            return Err(Error::InvariantViolation(
                "assembled step map is not symplectic".into(),
            ));
        }
        Ok(FloquetCircuit {
            partition,
            gate_spec,
            gate,
            qubit_perm,
            step,
        })
    }

    pub fn layout(&self) -> Layout {
        self.partition.layout()
    }

    pub fn rule(&self) -> Rule {
        self.partition.rule()
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn gate_spec(&self) -> &GateSpec {
        &self.gate_spec
    }

    /// The compiled 4-slot coupling gate.
    pub fn gate(&self) -> &CliffordMap {
        &self.gate
    }

    /// Qubit relabeling of one shuffle: `perm[old] = new`.
    pub fn qubit_perm(&self) -> &[usize] {
        &self.qubit_perm
    }

    /// The full one-step map.
    pub fn step_map(&self) -> &CliffordMap {
        &self.step
    }

    pub fn total_qubits(&self) -> usize {
        self.layout().total_qubits()
    }

    /// Advance a Pauli string by one step.
    #[must_use]
    pub fn step_pauli(&self, p: &PauliVec) -> PauliVec {
        self.step.apply(p)
    }

    /// Evolve a Pauli string by `t` steps.
    #[must_use]
    pub fn evolve_pauli(&self, p: &PauliVec, t: usize) -> PauliVec {
        let mut cur = p.clone();
        for _ in 0..t {
            cur = self.step.apply(&cur);
        }
        cur
    }

    /// Advance a matrix of Pauli columns by one step.
    #[must_use]
    pub fn step_matrix(&self, columns: &BitMatrix) -> BitMatrix {
        self.step.apply_matrix(columns)
    }

    /// Evolve a matrix of Pauli columns by `t` steps.
    #[must_use]
    pub fn evolve_matrix(&self, columns: &BitMatrix, t: usize) -> BitMatrix {
        let mut cur = columns.clone();
        for _ in 0..t {
            cur = self.step.apply_matrix(&cur);
        }
        cur
    }

    /// Debug path: the same step built as an explicit product of embedded
    /// gates and the permutation lift.
    pub fn step_gate_by_gate(&self) -> Result<CliffordMap> {
        let total = self.total_qubits();
        let mut interaction = CliffordMap::identity(total);
        for cycle in self.partition.subsets() {
            let embedded = self.gate.embed(&cycle[..], total)?;
            interaction = interaction.compose(&embedded);
        }
        Ok(interaction.compose(&perm_map(self.layout())))
    }
}

/// The `n` initial Z stabilizers of the all-zeros state as columns:
/// column `q` is `Z_q`, i.e. bit `n + q`.
pub fn z_stabilizer_matrix(total: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(2 * total, total);
    for q in 0..total {
        m.set(total + q, q, true);
    }
    m
}
