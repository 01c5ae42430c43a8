//! Dense bit-packed linear algebra over GF(2).
//!
//! Vectors and matrices store 64 bits per machine word; addition is XOR and
//! scalar multiplication is AND, so every kernel below reduces to word-wise
//! bit operations. Matrices are row-major with each row padded to a whole
//! number of words, which keeps row access, row elimination and row-by-row
//! products cache-friendly. All unused padding bits are kept at zero so that
//! equality and popcounts can work on raw words.
//!
//! Sizes in this crate stay modest (a few thousand bits per row), so plain
//! Gaussian elimination with word-wide row updates is fast enough; no block
//! decomposition is attempted.

use crate::par;

/// Read up to 64 bits starting at bit offset `start` from a packed word slice.
///
/// Bits past the end of `words` must not be requested; `len` must be 1..=64.
pub(crate) fn read_bits(words: &[u64], start: usize, len: usize) -> u64 {
    debug_assert!((1..=64).contains(&len));
    let w = start / 64;
    let off = start % 64;
    let lo = words[w] >> off;
    let hi = if off == 0 || w + 1 >= words.len() {
        0
    } else {
        words[w + 1] << (64 - off)
    };
    let v = lo | hi;
    if len == 64 {
        v
    } else {
        v & ((1u64 << len) - 1)
    }
}

/// OR up to 64 bits into a packed word slice at bit offset `start`.
///
/// Destination bits must currently be zero (this is a blit into fresh space,
/// not a general read-modify-write).
pub(crate) fn write_bits(words: &mut [u64], start: usize, len: usize, val: u64) {
    debug_assert!((1..=64).contains(&len));
    debug_assert!(len == 64 || val >> len == 0);
    let w = start / 64;
    let off = start % 64;
    words[w] |= val << off;
    if off != 0 && off + len > 64 {
        words[w + 1] |= val >> (64 - off);
    }
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Vector with exactly the listed bit positions set.
    ///
    /// Panics if any index is out of range.
    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Number of set bits.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Iterate over set bit positions in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            std::iter::successors(Some(word), |w| Some(w & w.wrapping_sub(1)))
                .take_while(|&w| w != 0)
                .map(move |w| wi * 64 + w.trailing_zeros() as usize)
        })
    }

    /// True if the two vectors share at least one set bit.
    pub fn intersects(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Raw packed words (little-endian bit order within each word).
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::ops::BitXorAssign<&BitVec> for BitVec {
    fn bitxor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl std::ops::BitOrAssign<&BitVec> for BitVec {
    fn bitor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a |= b;
        }
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A dense matrix over GF(2), row-major, rows padded to whole words.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from rows; all rows must share one length.
    pub fn from_rows(rows: &[BitVec]) -> Self {
        assert!(!rows.is_empty(), "from_rows needs at least one row");
        let cols = rows[0].len();
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols, "ragged rows");
            m.row_mut(r).copy_from_slice(v.words());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of range"
        );
        (self.words[r * self.words_per_row + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of range"
        );
        let w = r * self.words_per_row + c / 64;
        let mask = 1u64 << (c % 64);
        if value {
            self.words[w] |= mask;
        } else {
            self.words[w] &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn row_bitvec(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row(r).to_vec(),
        }
    }

    pub fn col_bitvec(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Overwrite row `r` with the bits of `v`.
    pub fn set_row(&mut self, r: usize, v: &BitVec) {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.row_mut(r).copy_from_slice(v.words());
    }

    /// Matrix product over GF(2). Panics on inner-dimension mismatch.
    ///
    /// Row i of the result is the XOR of the rhs rows selected by the set
    /// bits of row i of self; the outer loop parallelizes over output rows.
    #[must_use]
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        let width = out.words_per_row;
        par::for_each_row(&mut out.words, width, |i, out_row| {
            for (wi, &word) in self.row(i).iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let k = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let brow = rhs.row(k);
                    for (o, &b) in out_row.iter_mut().zip(brow) {
                        *o ^= b;
                    }
                }
            }
        });
        out
    }

    /// Matrix-vector product over GF(2). Panics on dimension mismatch.
    #[must_use]
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let dot = self
                .row(r)
                .iter()
                .zip(v.words())
                .fold(0u64, |acc, (a, b)| acc ^ (a & b));
            if dot.count_ones() & 1 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    #[must_use]
    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (wi, &word) in self.row(r).iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let c = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    /// Column-concatenate `[self | rhs]`. Panics if row counts differ.
    #[must_use]
    pub fn hstack(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, rhs.rows, "row count mismatch in hstack");
        let mut out = BitMatrix::zeros(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            let dst = &mut out.words[r * out.words_per_row..(r + 1) * out.words_per_row];
            dst[..self.words_per_row].copy_from_slice(self.row(r));
            let src = rhs.row(r);
            let mut c = 0;
            while c < rhs.cols {
                let len = (rhs.cols - c).min(64);
                let val = read_bits(src, c, len);
                write_bits(dst, self.cols + c, len, val);
                c += len;
            }
        }
        out
    }

    /// Gather the listed rows (in the given order) into a new matrix.
    #[must_use]
    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(idx.len(), self.cols);
        for (r, &src) in idx.iter().enumerate() {
            assert!(src < self.rows, "row index {src} out of range");
            let row = self.row(src).to_vec();
            out.row_mut(r).copy_from_slice(&row);
        }
        out
    }

    /// In-place Gaussian elimination. Returns pivot columns in ascending
    /// order; afterwards rows `0..rank` hold the echelon (or reduced echelon)
    /// rows and the remaining rows are zero.
    fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let wpr = self.words_per_row;
        let mut pivots = Vec::new();
        let mut scratch = vec![0u64; wpr];
        let mut next = 0usize; // next pivot row slot
        for col in 0..self.cols {
            let wi = col / 64;
            let mask = 1u64 << (col % 64);
            let Some(pivot) = (next..self.rows).find(|&r| self.words[r * wpr + wi] & mask != 0)
            else {
                continue;
            };
            for w in 0..wpr {
                self.words.swap(next * wpr + w, pivot * wpr + w);
            }
            scratch.copy_from_slice(self.row(next));
            let low = if reduced { 0 } else { next + 1 };
            par::for_each_row(&mut self.words, wpr, |r, row| {
                if r != next && r >= low && row[wi] & mask != 0 {
                    for (a, b) in row.iter_mut().zip(&scratch) {
                        *a ^= b;
                    }
                }
            });
            pivots.push(col);
            next += 1;
            if next == self.rows {
                break;
            }
        }
        pivots
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).len()
    }

    /// Reduced row echelon form plus the ascending list of pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    /// Does the column space of `self` contain every column of `rhs`?
    ///
    /// Equivalent to `rank([self | rhs]) == rank(self)`. Panics if the row
    /// counts differ.
    pub fn colspace_contains(&self, rhs: &BitMatrix) -> bool {
        assert_eq!(
            self.rows, rhs.rows,
            "row count mismatch in colspace_contains"
        );
        self.hstack(rhs).rank() == self.rank()
    }

    /// Solve `self * x = b`, returning one solution if the system is
    /// consistent (free variables are set to zero).
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(self.rows, b.len(), "rhs length mismatch in solve");
        let rhs = BitMatrix::from_rows(std::slice::from_ref(b)).transpose();
        let (r, pivots) = self.hstack(&rhs).rref();
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = BitVec::zeros(self.cols);
        for (row, &col) in pivots.iter().enumerate() {
            if r.get(row, self.cols) {
                x.set(col, true);
            }
        }
        Some(x)
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row_bitvec(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive rank oracle: the row space of an m-row matrix has 2^rank
    /// elements; enumerate all 2^m row combinations. Usable up to ~12 rows.
    fn rank_by_enumeration(m: &BitMatrix) -> usize {
        assert!(m.rows() <= 12);
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..(1 << m.rows()) {
            let mut acc = BitVec::zeros(m.cols());
            for r in 0..m.rows() {
                if mask >> r & 1 == 1 {
                    acc ^= &m.row_bitvec(r);
                }
            }
            seen.insert(acc);
        }
        assert!(seen.len().is_power_of_two());
        seen.len().trailing_zeros() as usize
    }

    fn matmul_naive(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut bit = false;
                for k in 0..a.cols() {
                    bit ^= a.get(i, k) && b.get(k, j);
                }
                out.set(i, j, bit);
            }
        }
        out
    }

    fn from_strs(rows: &[&str]) -> BitMatrix {
        let vecs: Vec<BitVec> = rows
            .iter()
            .map(|s| {
                let ones: Vec<usize> = s
                    .chars()
                    .enumerate()
                    .filter(|(_, c)| *c == '1')
                    .map(|(i, _)| i)
                    .collect();
                BitVec::from_indices(s.len(), &ones)
            })
            .collect();
        BitMatrix::from_rows(&vecs)
    }

    #[test]
    fn bitvec_set_get_roundtrip() {
        let mut v = BitVec::zeros(130);
        for &i in &[0, 1, 63, 64, 65, 127, 128, 129] {
            assert!(!v.get(i));
            v.set(i, true);
            assert!(v.get(i));
        }
        assert_eq!(v.count_ones(), 8);
        v.set(64, false);
        assert_eq!(v.count_ones(), 7);
        assert_eq!(
            v.ones().collect::<Vec<_>>(),
            vec![0, 1, 63, 65, 127, 128, 129]
        );
    }

    #[test]
    fn bitvec_xor_is_addition() {
        let a = BitVec::from_indices(70, &[0, 3, 69]);
        let mut b = BitVec::from_indices(70, &[3, 5]);
        b ^= &a;
        assert_eq!(b, BitVec::from_indices(70, &[0, 5, 69]));
        b ^= &a;
        assert_eq!(b, BitVec::from_indices(70, &[3, 5]));
    }

    #[test]
    fn read_write_bits_roundtrip() {
        let mut words = vec![0u64; 3];
        write_bits(&mut words, 60, 10, 0b10_1101_0111);
        assert_eq!(read_bits(&words, 60, 10), 0b10_1101_0111);
        assert_eq!(read_bits(&words, 59, 1), 0);
        assert_eq!(read_bits(&words, 60, 1), 1);
        write_bits(&mut words, 128, 64, u64::MAX);
        assert_eq!(read_bits(&words, 128, 64), u64::MAX);
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(BitMatrix::identity(2).rank(), 2);
        assert_eq!(BitMatrix::identity(129).rank(), 129);
        assert_eq!(BitMatrix::zeros(4, 7).rank(), 0);
    }

    #[test]
    fn rank_counts_dependent_row() {
        // Third row is the sum of the first two.
        let m = from_strs(&["110", "011", "101"]);
        assert_eq!(m.rank(), 2);
        assert_eq!(rank_by_enumeration(&m), 2);
    }

    #[test]
    fn rref_small_example() {
        let (r, pivots) = from_strs(&["11", "01"]).rref();
        assert_eq!(r, from_strs(&["10", "01"]));
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn colspace_small_span() {
        // Columns (1,0) and (1,1) span all of GF(2)^2, so (0,1) is inside.
        let a = from_strs(&["11", "01"]);
        let b = from_strs(&["0", "1"]);
        assert!(a.colspace_contains(&b));
        // The zero matrix contains only the zero column.
        assert!(!BitMatrix::zeros(2, 3).colspace_contains(&b));
    }

    #[test]
    #[should_panic(expected = "row count mismatch")]
    fn colspace_dimension_mismatch_panics() {
        let a = BitMatrix::zeros(2, 2);
        let b = BitMatrix::zeros(3, 1);
        a.colspace_contains(&b);
    }

    #[test]
    fn mul_identity_and_involution() {
        // The phaseless S tableau squares to the identity.
        let s = from_strs(&["10", "11"]);
        assert_eq!(s.mul(&s), BitMatrix::identity(2));
        let i = BitMatrix::identity(2);
        assert_eq!(s.mul(&i), s);
    }

    #[test]
    fn transpose_involutive() {
        let m = from_strs(&["1101", "0110", "1000"]);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().get(3, 0), m.get(0, 3));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = from_strs(&["110", "011", "101"]); // rank 2
        let b = BitVec::from_indices(3, &[0, 1]); // rows 1+2 sum
        let x = a.solve(&b).expect("consistent system");
        assert_eq!(a.mul_vec(&x), b);
        // (1,0,0) is not in the column span of a rank-2 symmetric pattern.
        let bad = BitVec::from_indices(3, &[0]);
        assert!(a.solve(&bad).is_none());
    }

    #[test]
    fn hstack_places_bits() {
        let a = from_strs(&["101", "010"]);
        let b = from_strs(&["11", "01"]);
        let h = a.hstack(&b);
        assert_eq!(h.cols(), 5);
        for r in 0..2 {
            for c in 0..3 {
                assert_eq!(h.get(r, c), a.get(r, c));
            }
            for c in 0..2 {
                assert_eq!(h.get(r, c + 3), b.get(r, c));
            }
        }
    }

    #[test]
    fn select_rows_gathers_in_order() {
        let m = from_strs(&["100", "010", "001"]);
        let s = m.select_rows(&[2, 0]);
        assert_eq!(s, from_strs(&["001", "100"]));
    }

    /// Random matrix strategy with odd shapes to exercise word boundaries.
    fn arb_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::bool::ANY, r * c).prop_map(move |bits| {
                let mut m = BitMatrix::zeros(r, c);
                for (i, b) in bits.into_iter().enumerate() {
                    m.set(i / c, i % c, b);
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rank_matches_enumeration(m in arb_matrix(9, 70)) {
            prop_assert_eq!(m.rank(), rank_by_enumeration(&m));
        }

        #[test]
        fn rref_preserves_rank_and_is_idempotent(m in arb_matrix(9, 40)) {
            let (r, pivots) = m.rref();
            prop_assert_eq!(pivots.len(), m.rank());
            let (rr, pp) = r.rref();
            prop_assert_eq!(&rr, &r);
            prop_assert_eq!(pp, pivots);
        }

        #[test]
        fn mul_matches_naive(a in arb_matrix(8, 70), b_cols in 1usize..9) {
            let bits = a.cols() * b_cols;
            let mut b = BitMatrix::zeros(a.cols(), b_cols);
            for i in 0..bits {
                b.set(i / b_cols, i % b_cols, i % 3 == 0);
            }
            prop_assert_eq!(a.mul(&b), matmul_naive(&a, &b));
        }

        #[test]
        fn mul_vec_matches_mul(a in arb_matrix(8, 40)) {
            let mut v = BitVec::zeros(a.cols());
            for i in 0..a.cols() {
                v.set(i, i % 2 == 0);
            }
            let col = BitMatrix::from_rows(&[v.clone()]).transpose();
            let by_mul = a.mul(&col);
            prop_assert_eq!(a.mul_vec(&v), by_mul.col_bitvec(0));
        }

        #[test]
        fn solve_verifies(a in arb_matrix(8, 8), xs in proptest::collection::vec(proptest::bool::ANY, 8)) {
            let mut x = BitVec::zeros(a.cols());
            for (i, b) in xs.iter().take(a.cols()).enumerate() {
                x.set(i, *b);
            }
            let b = a.mul_vec(&x);
            // Some solution must exist and reproduce b (maybe not x itself).
            let got = a.solve(&b).expect("constructed rhs is consistent");
            prop_assert_eq!(a.mul_vec(&got), b);
        }

        #[test]
        fn colspace_contains_every_product_column(a in arb_matrix(7, 10), picks in proptest::collection::vec(proptest::bool::ANY, 10)) {
            // Any XOR combination of columns of `a` lies in its column space.
            let mut v = BitVec::zeros(a.rows());
            for (c, take) in picks.iter().take(a.cols()).enumerate() {
                if *take {
                    v ^= &a.col_bitvec(c);
                }
            }
            let b = BitMatrix::from_rows(&[v]).transpose();
            prop_assert!(a.colspace_contains(&b));
        }

        #[test]
        fn hstack_matches_get(a in arb_matrix(5, 130), b_cols in 1usize..70) {
            let mut b = BitMatrix::zeros(a.rows(), b_cols);
            for r in 0..b.rows() {
                for c in 0..b_cols {
                    b.set(r, c, (r + 2 * c) % 3 == 0);
                }
            }
            let h = a.hstack(&b);
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    prop_assert_eq!(h.get(r, c), a.get(r, c));
                }
                for c in 0..b_cols {
                    prop_assert_eq!(h.get(r, a.cols() + c), b.get(r, c));
                }
            }
        }
    }
}
