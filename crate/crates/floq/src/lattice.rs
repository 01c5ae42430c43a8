//! Qubit layouts and the row/column shuffle permutation.
//!
//! Qubits live on the entries of an `N x N` matrix (single layer) or on two
//! stacked copies of it (double layer, bottom `B` and top `T`). Matrix
//! coordinates `(i, j)` are 1-based like the usual matrix-element notation;
//! linear indices are 0-based and row-major, with the whole bottom layer
//! preceding the top layer.
//!
//! One Floquet step relabels entries by the "perfect shuffle"
//!
//! ```text
//! sigma(i) = (i + 1) / 2      for odd i,
//! sigma(i) = (i + N) / 2      for even i,
//! ```
//!
//! applied to rows and columns simultaneously: the entry at `(i, j)` moves to
//! `(sigma(i), sigma(j))`, identically on both layers. For `N = 2^k` this is
//! exactly a one-bit right rotation of the `k`-bit binary expansion of
//! `i - 1`, which is what makes power-of-two sizes special.

use crate::clifford::CliffordMap;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Layer label for double layouts; single layouts use only `Bottom`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Bottom,
    Top,
}

impl Layer {
    pub fn letter(self) -> char {
        match self {
            Layer::Bottom => 'B',
            Layer::Top => 'T',
        }
    }
}

/// A qubit layout: one or two `N x N` matrices of qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Single { n_side: usize },
    Double { n_side: usize },
}

impl Layout {
    /// Single-layer `N x N` layout. `N` must be even (the shuffle needs it).
    pub fn single(n_side: usize) -> Result<Self> {
        check_side(n_side)?;
        Ok(Layout::Single { n_side })
    }

    /// Double-layer `2 x N x N` layout.
    pub fn double(n_side: usize) -> Result<Self> {
        check_side(n_side)?;
        Ok(Layout::Double { n_side })
    }

    pub fn n_side(&self) -> usize {
        match *self {
            Layout::Single { n_side } | Layout::Double { n_side } => n_side,
        }
    }

    pub fn is_double(&self) -> bool {
        matches!(self, Layout::Double { .. })
    }

    pub fn total_qubits(&self) -> usize {
        let n = self.n_side();
        if self.is_double() {
            2 * n * n
        } else {
            n * n
        }
    }

    /// Linear index of the qubit at `(layer, i, j)`, `i, j` 1-based.
    ///
    /// Panics on out-of-range coordinates or a `Top` site in a single layout.
    pub fn index(&self, layer: Layer, i: usize, j: usize) -> usize {
        let n = self.n_side();
        assert!(
            (1..=n).contains(&i) && (1..=n).contains(&j),
            "matrix entry ({i},{j}) out of range for side {n}"
        );
        let offset = match (self, layer) {
            (Layout::Single { .. }, Layer::Bottom) => 0,
            (Layout::Single { .. }, Layer::Top) => {
                panic!("single layout has no top layer")
            }
            (Layout::Double { .. }, Layer::Bottom) => 0,
            (Layout::Double { .. }, Layer::Top) => n * n,
        };
        offset + (i - 1) * n + (j - 1)
    }

    /// Inverse of [`Layout::index`].
    pub fn site(&self, idx: usize) -> (Layer, usize, usize) {
        let n = self.n_side();
        assert!(idx < self.total_qubits(), "qubit index {idx} out of range");
        let (layer, rem) = if idx >= n * n {
            (Layer::Top, idx - n * n)
        } else {
            (Layer::Bottom, idx)
        };
        (layer, rem / n + 1, rem % n + 1)
    }

    /// Human-readable site label, e.g. `B:3,1`.
    pub fn site_label(&self, idx: usize) -> String {
        let (layer, i, j) = self.site(idx);
        if self.is_double() {
            format!("{}:{i},{j}", layer.letter())
        } else {
            format!("Q:{i},{j}")
        }
    }
}

fn check_side(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidSideLength {
            n,
            reason: "the shuffle permutation needs an even side of at least 2",
        });
    }
    Ok(())
}

/// The shuffle on 1-based row/column labels.
pub fn sigma(i: usize, n_side: usize) -> usize {
    debug_assert!(n_side.is_multiple_of(2) && (1..=n_side).contains(&i));
    if i % 2 == 1 {
        i.div_ceil(2)
    } else {
        (i + n_side) / 2
    }
}

/// Precomputed shuffle table for one side length.
#[derive(Clone, Debug)]
pub struct ShufflePerm {
    n_side: usize,
    map: Vec<usize>, // map[i - 1] = sigma(i), 1-based values
}

impl ShufflePerm {
    pub fn new(n_side: usize) -> Result<Self> {
        check_side(n_side)?;
        let map = (1..=n_side).map(|i| sigma(i, n_side)).collect();
        Ok(ShufflePerm { n_side, map })
    }

    pub fn n_side(&self) -> usize {
        self.n_side
    }

    /// `sigma(i)` with `i` 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    /// The table as 1-based images `[sigma(1), ..., sigma(N)]`.
    pub fn as_table(&self) -> &[usize] {
        &self.map
    }
}

/// Qubit-level permutation of a layout under one shuffle step:
/// `out[old_index] = new_index`, with `(layer, i, j) -> (layer, s(i), s(j))`.
pub fn qubit_permutation(layout: Layout) -> Vec<usize> {
    let n = layout.n_side();
    let mut out = vec![0; layout.total_qubits()];
    for (old, slot) in out.iter_mut().enumerate() {
        let (layer, i, j) = layout.site(old);
        *slot = layout.index(layer, sigma(i, n), sigma(j, n));
    }
    out
}

/// Lift the shuffle to a Clifford map: X and Z components both move with
/// their qubit, so the symplectic matrix is the same permutation on each
/// block.
pub fn perm_map(layout: Layout) -> CliffordMap {
    let total = layout.total_qubits();
    let perm = qubit_permutation(layout);
    let mut m = BitMatrix::zeros(2 * total, 2 * total);
    for (old, &new) in perm.iter().enumerate() {
        m.set(new, old, true);
        m.set(total + new, total + old, true);
    }
    CliffordMap::from_matrix_unchecked(total, m)
}

/// For `N = 2^k`, verify that the shuffle equals a one-bit right rotation of
/// the `k`-bit expansion of `i - 1` for every label `i`.
pub fn bit_rotation_check(n_side: usize) -> Result<()> {
    check_side(n_side)?;
    if !n_side.is_power_of_two() {
        return Err(Error::InvalidSideLength {
            n: n_side,
            reason: "bit rotation form only applies to powers of two",
        });
    }
    let k = n_side.trailing_zeros();
    for i in 1..=n_side {
        let bits = i - 1;
        let rotated = if k == 1 {
            bits
        } else {
            (bits >> 1) | ((bits & 1) << (k - 1))
        };
        if sigma(i, n_side) != rotated + 1 {
            return Err(Error::InvariantViolation(format!(
                "shuffle at {i} (N={n_side}) disagrees with bit rotation"
            )));
        }
    }
    Ok(())
}
