//! Gate-connectivity partitions and the infection (light-cone) model.
//!
//! Each Floquet step applies one four-qubit gate to every subset of a fixed
//! partition of the qubit matrix into ordered 4-cycles. Two partition rules
//! are supported on a single layer:
//!
//! * **Rule 1** (needs `4 | N`): the diagonal `4 x 4` blocks are covered by
//!   four crisscross cycles each, and every off-diagonal `2 x 2` block pairs
//!   up with its mirror image across the diagonal.
//! * **Rule 2** (needs even `N`): every `2 x 2` block follows the mirror
//!   rule, including the diagonal ones.
//!
//! On a double layer every single-layer cycle `(p1, p2, p3, p4)` splits into
//! the two layer-alternating cycles `(B p1, T p2, B p3, T p4)` and
//! `(T p1, B p2, T p3, B p4)`.
//!
//! Cycles are stored rotated so the qubit with the smallest linear index
//! comes first, and listed in order of that leading qubit; the cyclic order
//! itself is what assigns gate slots, so it is preserved exactly.
//!
//! The infection model upper-bounds Heisenberg spreading: a step permutes
//! the infected set by the shuffle, then infects every qubit sharing a
//! subset with an infected one. Since each subset has four qubits, the
//! infected count obeys `n(t) <= 4^t n(0)`.

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::lattice::{Layer, Layout};

/// Which partition rule generated a [`Partition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Rule1,
    Rule2,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rule::Rule1 => write!(f, "1"),
            Rule::Rule2 => write!(f, "2"),
        }
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Rule::Rule1),
            "2" => Ok(Rule::Rule2),
            other => Err(Error::GateParse(format!("unknown rule '{other}'"))),
        }
    }
}

/// A partition of all qubits into ordered 4-cycles, one gate application per
/// cycle per Floquet step.
#[derive(Clone, Debug)]
pub struct Partition {
    layout: Layout,
    rule: Rule,
    subsets: Vec<[usize; 4]>,
    subset_of: Vec<usize>, // qubit -> index into `subsets`
}

/// Sibling of `i` inside its `2 x 2` block row/column pair: `i + 1` for odd
/// `i`, `i - 1` for even `i` (1-based labels).
fn partner(i: usize) -> usize {
    if i % 2 == 1 {
        i + 1
    } else {
        i - 1
    }
}

/// The mirror-rule orbit through matrix entry `(i, j)`:
/// `(Q_ij, Q_{j,i'}, Q_{i',j'}, Q_{j',i})` with `i' = partner(i)` etc.
fn off_orbit(i: usize, j: usize) -> [(usize, usize); 4] {
    let (ip, jp) = (partner(i), partner(j));
    [(i, j), (j, ip), (ip, jp), (jp, i)]
}

/// Rule 1 cycles in matrix coordinates.
fn rule1_cycles(n: usize) -> Vec<[(usize, usize); 4]> {
    let mut cycles = Vec::with_capacity(n * n / 4);
    // Four crisscross cycles per diagonal 4x4 block, in the printed order.
    for b in 0..n / 4 {
        let p = 4 * b + 1;
        cycles.push([(p, p), (p, p + 3), (p + 3, p + 3), (p + 3, p)]);
        cycles.push([
            (p + 1, p + 1),
            (p + 1, p + 2),
            (p + 2, p + 2),
            (p + 2, p + 1),
        ]);
        cycles.push([(p, p + 2), (p + 2, p + 3), (p + 3, p + 1), (p + 1, p)]);
        cycles.push([(p, p + 1), (p + 1, p + 3), (p + 3, p + 2), (p + 2, p)]);
    }
    // Mirror-rule orbits for 2x2 blocks outside the diagonal 4x4 blocks.
    let block4 = |i: usize| (i - 1) / 4;
    for u in (1..=n).step_by(2) {
        for v in (u + 2..=n).step_by(2) {
            if block4(u) != block4(v) {
                cycles.push(off_orbit(u, v));
                cycles.push(off_orbit(u, v + 1));
            }
        }
    }
    cycles
}

/// Rule 2 cycles in matrix coordinates: the mirror rule everywhere.
fn rule2_cycles(n: usize) -> Vec<[(usize, usize); 4]> {
    let mut cycles = Vec::with_capacity(n * n / 4);
    for u in (1..=n).step_by(2) {
        cycles.push(off_orbit(u, u));
        for v in (u + 2..=n).step_by(2) {
            cycles.push(off_orbit(u, v));
            cycles.push(off_orbit(u, v + 1));
        }
    }
    cycles
}

/// Rotate a cycle so its smallest qubit index leads (cyclic order intact).
fn canonical(cycle: [usize; 4]) -> [usize; 4] {
    let lead = (0..4).min_by_key(|&k| cycle[k]).unwrap();
    std::array::from_fn(|k| cycle[(lead + k) % 4])
}

fn single_layer_cycles(rule: Rule, n: usize) -> Result<Vec<[(usize, usize); 4]>> {
    match rule {
        Rule::Rule1 => {
            if !n.is_multiple_of(4) {
                return Err(Error::InvalidSideLength {
                    n,
                    reason: "rule 1 tiles diagonal 4x4 blocks, so 4 must divide N",
                });
            }
            Ok(rule1_cycles(n))
        }
        Rule::Rule2 => Ok(rule2_cycles(n)),
    }
}

impl Partition {
    /// Build the partition for any layout/rule combination.
    pub fn build(layout: Layout, rule: Rule) -> Result<Self> {
        let n = layout.n_side();
        let cells = single_layer_cycles(rule, n)?;
        let mut subsets: Vec<[usize; 4]> = Vec::new();
        if layout.is_double() {
            for cell in cells {
                for first in [Layer::Bottom, Layer::Top] {
                    let second = if first == Layer::Bottom {
                        Layer::Top
                    } else {
                        Layer::Bottom
                    };
                    let cyc = std::array::from_fn(|k| {
                        let (i, j) = cell[k];
                        let layer = if k % 2 == 0 { first } else { second };
                        layout.index(layer, i, j)
                    });
                    subsets.push(canonical(cyc));
                }
            }
        } else {
            for cell in cells {
                let cyc = std::array::from_fn(|k| {
                    let (i, j) = cell[k];
                    layout.index(Layer::Bottom, i, j)
                });
                subsets.push(canonical(cyc));
            }
        }
        subsets.sort_by_key(|c| c[0]);
        Partition::from_parts(layout, rule, subsets)
    }

    /// Single-layer rule 1 partition.
    pub fn rule1(n_side: usize) -> Result<Self> {
        Partition::build(Layout::single(n_side)?, Rule::Rule1)
    }

    /// Single-layer rule 2 partition.
    pub fn rule2(n_side: usize) -> Result<Self> {
        Partition::build(Layout::single(n_side)?, Rule::Rule2)
    }

    /// Double-layer partition derived from the given single-layer rule.
    pub fn double_layer(rule: Rule, n_side: usize) -> Result<Self> {
        Partition::build(Layout::double(n_side)?, rule)
    }

    /// Assemble from explicit subsets, validating the disjoint exact cover.
    pub fn from_parts(layout: Layout, rule: Rule, subsets: Vec<[usize; 4]>) -> Result<Self> {
        let total = layout.total_qubits();
        if subsets.len() * 4 != total {
            return Err(Error::InvariantViolation(format!(
                "{} subsets cannot cover {total} qubits",
                subsets.len()
            )));
        }
        let mut subset_of = vec![usize::MAX; total];
        for (s, cycle) in subsets.iter().enumerate() {
            for &q in cycle {
                if q >= total {
                    return Err(Error::QubitOutOfRange { index: q, total });
                }
                if subset_of[q] != usize::MAX {
                    return Err(Error::InvariantViolation(format!(
                        "qubit {q} appears in more than one subset"
                    )));
                }
                subset_of[q] = s;
            }
        }
        // 4 * subsets == total and no qubit seen twice => full coverage.
        Ok(Partition {
            layout,
            rule,
            subsets,
            subset_of,
        })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// The ordered 4-cycles, each rotated to start at its smallest index.
    pub fn subsets(&self) -> &[[usize; 4]] {
        &self.subsets
    }

    /// Index of the subset containing qubit `q`.
    pub fn subset_of(&self, q: usize) -> usize {
        self.subset_of[q]
    }

    /// Re-check the disjoint exact cover (used by the validation suite).
    pub fn validate(&self) -> Result<()> {
        Partition::from_parts(self.layout, self.rule, self.subsets.clone()).map(|_| ())
    }
}

/// Infection dynamics: one step permutes the infected set by the shuffle and
/// then closes it under subset co-membership.
pub struct Infection<'a> {
    partition: &'a Partition,
    perm: &'a [usize],
    set: BitVec,
}

impl<'a> Infection<'a> {
    pub fn new(partition: &'a Partition, perm: &'a [usize], seeds: &[usize]) -> Result<Self> {
        let total = partition.layout().total_qubits();
        assert_eq!(perm.len(), total, "permutation length mismatch");
        let mut set = BitVec::zeros(total);
        for &q in seeds {
            if q >= total {
                return Err(Error::QubitOutOfRange { index: q, total });
            }
            set.set(q, true);
        }
        Ok(Infection {
            partition,
            perm,
            set,
        })
    }

    pub fn set(&self) -> &BitVec {
        &self.set
    }

    pub fn count(&self) -> usize {
        self.set.count_ones()
    }

    /// Advance one step: permute, then infect whole subsets.
    pub fn step(&mut self) {
        let total = self.set.len();
        let mut next = BitVec::zeros(total);
        for q in self.set.ones() {
            next.set(self.perm[q], true);
        }
        let mut hit = vec![false; self.partition.subsets().len()];
        for q in next.ones() {
            hit[self.partition.subset_of(q)] = true;
        }
        for (s, cycle) in self.partition.subsets().iter().enumerate() {
            if hit[s] {
                for &q in cycle {
                    next.set(q, true);
                }
            }
        }
        self.set = next;
    }
}

/// Result of running the infection to a fixpoint or a step budget.
#[derive(Clone, Debug)]
pub struct InfectionRun {
    /// Infected count at steps `0..=t_final`.
    pub sizes: Vec<usize>,
    /// Final infected set.
    pub set: BitVec,
    /// True if the set stopped changing before the budget ran out.
    pub fixpoint: bool,
}

/// Run the infection from `seeds` until the set stops changing or `t_max`
/// steps have been taken. Sizes are non-decreasing because the permutation
/// is a bijection and spreading only adds qubits.
pub fn infection_closure(
    partition: &Partition,
    perm: &[usize],
    seeds: &[usize],
    t_max: usize,
) -> Result<InfectionRun> {
    let mut inf = Infection::new(partition, perm, seeds)?;
    let mut sizes = vec![inf.count()];
    let mut fixpoint = false;
    for _ in 0..t_max {
        let before = inf.set().clone();
        inf.step();
        if *inf.set() == before {
            fixpoint = true;
            break;
        }
        sizes.push(inf.count());
    }
    Ok(InfectionRun {
        sizes,
        set: inf.set().clone(),
        fixpoint,
    })
}

/// Minimal qubit classes closed under both the shuffle relabeling and subset
/// co-membership. Computed as a monotone closure (union of shuffle images
/// and subset spreads), which always terminates; components are returned
/// sorted ascending, each sorted internally.
pub fn components(partition: &Partition, perm: &[usize]) -> Vec<Vec<usize>> {
    let total = partition.layout().total_qubits();
    let mut seen = BitVec::zeros(total);
    let mut out = Vec::new();
    for seed in 0..total {
        if seen.get(seed) {
            continue;
        }
        let mut class = BitVec::zeros(total);
        class.set(seed, true);
        loop {
            let mut next = class.clone();
            for q in class.ones() {
                next.set(perm[q], true);
                for &m in &partition.subsets()[partition.subset_of(q)] {
                    next.set(m, true);
                }
            }
            if next == class {
                break;
            }
            class = next;
        }
        for q in class.ones() {
            seen.set(q, true);
        }
        out.push(class.ones().collect());
    }
    out
}
