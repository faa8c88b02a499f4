//! Linear algebra over the two-element field.
//!
//! Vectors are packed into `u64` words. Matrices are stored row-major as a
//! list of packed rows, which keeps row reduction a sequence of word XORs.

use std::fmt;

/// `C(n, k) mod 2` by Lucas: odd iff the bits of `k` are a subset of the bits of `n`.
/// Out-of-range arguments (negative, or `k > n`) give 0.
pub fn binom_mod2(n: i64, k: i64) -> bool {
    if n < 0 || k < 0 || k > n {
        return false;
    }
    k & n == k
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Builds a vector from positions; repeated positions cancel.
    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
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
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// XOR restricted to the words covering bits `< upto`; callers use it when
    /// `other` is known to vanish above that point.
    pub fn xor_assign_below(&mut self, other: &BitVec, upto: usize) {
        let n = upto.div_ceil(64).min(self.words.len());
        for (a, b) in self.words[..n].iter_mut().zip(&other.words[..n]) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn lowest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn highest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Highest set position strictly below `q`.
    pub fn highest_one_below(&self, q: usize) -> Option<usize> {
        if q == 0 {
            return None;
        }
        let q = q.min(self.len);
        let top = (q - 1) / 64;
        let rem = q - top * 64;
        let mask = if rem >= 64 { u64::MAX } else { (1u64 << rem) - 1 };
        if self.words[top] & mask != 0 {
            return Some(top * 64 + 63 - (self.words[top] & mask).leading_zeros() as usize);
        }
        self.words[..top]
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Positions holding 1, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Bit string with position 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Option<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
    }

    /// Compares as binary integers, position 0 least significant.
    pub fn cmp_as_integer(&self, other: &BitVec) -> std::cmp::Ordering {
        let n = self.words.len().max(other.words.len());
        for i in (0..n).rev() {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            if a != b {
                return a.cmp(&b);
            }
        }
        std::cmp::Ordering::Equal
    }

    /// The value as an integer when it fits in 64 bits.
    pub fn as_u64(&self) -> Option<u64> {
        if self.words.iter().skip(1).any(|&w| w != 0) {
            return None;
        }
        Some(self.words.first().copied().unwrap_or(0))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_bit_string())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix { nrows, ncols, rows: vec![BitVec::zeros(ncols); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "row length mismatch");
        BitMatrix { nrows: rows.len(), ncols, rows }
    }

    /// Builds from 1-positions; a repeated position is an error rather than a cancellation.
    pub fn from_entries<I: IntoIterator<Item = (usize, usize)>>(nrows: usize, ncols: usize, entries: I) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for (r, c) in entries {
            assert!(!m.get(r, c), "duplicate entry ({r}, {c})");
            m.set(r, c, true);
        }
        m
    }

    pub fn from_columns(nrows: usize, cols: &[BitVec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length mismatch");
            for i in c.ones() {
                m.rows[i].set(j, true);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.rows[r].set(c, bit)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_ones(self.nrows, (0..self.nrows).filter(|&r| self.get(r, c)))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.ones().map(move |c| (r, c)))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for (r, c) in self.entries() {
            t.rows[c].set(r, true);
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.ncols, "dimension mismatch");
        BitVec::from_ones(self.nrows, (0..self.nrows).filter(|&r| self.rows[r].dot(v)))
    }

    pub fn vstack(blocks: &[BitMatrix]) -> BitMatrix {
        let ncols = blocks.first().map_or(0, |b| b.ncols);
        let rows = blocks
            .iter()
            .flat_map(|b| {
                assert_eq!(b.ncols, ncols, "column count mismatch");
                b.rows.iter().cloned()
            })
            .collect();
        Self::from_rows(ncols, rows)
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
        out
    }

    pub fn rank(&self) -> usize {
        echelonize(self).1.len()
    }
}

/// Reduced row-echelon form and its pivot columns (strictly increasing).
pub fn echelonize(m: &BitMatrix) -> (BitMatrix, Vec<usize>) {
    let mut rows = m.rows.clone();
    let pivots = rref_in_place(&mut rows, m.ncols);
    (BitMatrix::from_rows(m.ncols, rows), pivots)
}

/// Gauss-Jordan on `rows`, pivoting only on columns `< pivot_cols`.
/// Pivot rows end up at the top in pivot order.
fn rref_in_place(rows: &mut [BitVec], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().expect("pivot row");
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if other.get(c) {
                other.xor_assign(prow);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row reduction of a fixed matrix, kept around for repeated right-hand sides.
pub struct Solver {
    ncols: usize,
    nrows: usize,
    pivots: Vec<usize>,
    /// Rows of `[E | T]` where `E = T·M` is the RREF of `M`.
    aug: Vec<BitVec>,
}

impl Solver {
    pub fn new(m: &BitMatrix) -> Self {
        let (nrows, ncols) = (m.nrows, m.ncols);
        let mut aug: Vec<BitVec> = m
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut v = BitVec::zeros(ncols + nrows);
                for c in row.ones() {
                    v.set(c, true);
                }
                v.set(ncols + i, true);
                v
            })
            .collect();
        let pivots = rref_in_place(&mut aug, ncols);
        Solver { ncols, nrows, pivots, aug }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Some `v` with `M·v = b`; pivot variables from back-substitution, free variables 0.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.nrows, "right-hand side length mismatch");
        let tb = |row: &BitVec| b.ones().filter(|&i| row.get(self.ncols + i)).count() % 2 == 1;
        if self.aug[self.rank()..].iter().any(tb) {
            return None;
        }
        let mut x = BitVec::zeros(self.ncols);
        for (row, &p) in self.aug.iter().zip(&self.pivots) {
            if tb(row) {
                x.set(p, true);
            }
        }
        Some(x)
    }

    /// One vector per free column `f`: `e_f` plus the pivot entries of column `f`.
    pub fn kernel(&self) -> Vec<BitVec> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::unit(self.ncols, f);
                for (row, &p) in self.aug.iter().zip(&self.pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

pub fn solve_right(m: &BitMatrix, b: &BitVec) -> Option<BitVec> {
    Solver::new(m).solve(b)
}

pub fn right_kernel_basis(m: &BitMatrix) -> Vec<BitVec> {
    Solver::new(m).kernel()
}

/// The kernel basis in reduced echelon form: each vector has a leading 1
/// (lowest position) that vanishes in all the others.
pub fn right_kernel_echelon(m: &BitMatrix) -> Vec<BitVec> {
    let mut rows = right_kernel_basis(m);
    let n = rows.len();
    rref_in_place(&mut rows, m.ncols);
    rows.truncate(n);
    rows
}

/// Column space built by inserting columns left to right.
///
/// Each stored vector remembers which inserted columns sum to it, so a
/// right-hand side can be expressed in the inserted columns. Because a
/// dependent column only ever involves earlier columns, the expression found
/// is supported on the independent columns: it coincides with the RREF
/// solution with free variables 0, and it is the least solution when read as
/// a binary integer with column 0 as the low bit.
pub struct ColumnBasis {
    nrows: usize,
    capacity: usize,
    inserted: usize,
    /// Indexed by the lowest set bit of the stored vector.
    slots: Vec<Option<(BitVec, BitVec)>>,
}

impl ColumnBasis {
    pub fn new(nrows: usize, capacity: usize) -> Self {
        ColumnBasis { nrows, capacity, inserted: 0, slots: vec![None; nrows] }
    }

    pub fn rank(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    fn reduce(&self, v: &mut BitVec, combo: &mut BitVec) {
        while let Some(p) = v.lowest_one() {
            match &self.slots[p] {
                Some((bv, bc)) => {
                    v.xor_assign(bv);
                    combo.xor_assign(bc);
                }
                None => break,
            }
        }
    }

    /// Inserts the next column. Returns the kernel vector it closes, if dependent.
    pub fn insert(&mut self, col: &BitVec) -> Option<BitVec> {
        assert_eq!(col.len(), self.nrows, "column length mismatch");
        assert!(self.inserted < self.capacity, "column basis capacity exceeded");
        let j = self.inserted;
        self.inserted += 1;
        let mut v = col.clone();
        let mut combo = BitVec::unit(self.capacity, j);
        self.reduce(&mut v, &mut combo);
        match v.lowest_one() {
            Some(p) => {
                self.slots[p] = Some((v, combo));
                None
            }
            None => Some(combo),
        }
    }

    /// Coefficients over the inserted columns summing to `b`, if `b` is in their span.
    pub fn express(&self, b: &BitVec) -> Option<BitVec> {
        let mut v = b.clone();
        let mut combo = BitVec::zeros(self.capacity);
        self.reduce(&mut v, &mut combo);
        v.is_zero().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edges() {
        assert!(binom_mod2(0, 0));
        assert!(binom_mod2(7, 0));
        assert!(!binom_mod2(5, 2));
        assert!(binom_mod2(3, 1));
        assert!(!binom_mod2(-1, 0));
        assert!(!binom_mod2(2, 3));
        assert!(!binom_mod2(4, -1));
    }

    #[test]
    fn identity_and_ones() {
        let (e, p) = echelonize(&BitMatrix::identity(3));
        assert_eq!(e, BitMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
        let ones = BitMatrix::from_entries(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(echelonize(&ones).1, vec![0]);
    }

    #[test]
    fn solve_and_kernel_basics() {
        let b = BitVec::from_ones(4, [1, 3]);
        assert_eq!(solve_right(&BitMatrix::identity(4), &b), Some(b.clone()));
        assert_eq!(solve_right(&BitMatrix::zeros(4, 4), &b), None);
        assert!(right_kernel_basis(&BitMatrix::identity(5)).is_empty());
        assert_eq!(right_kernel_basis(&BitMatrix::zeros(1, 3)).len(), 3);
    }

    #[test]
    fn integer_comparison() {
        let a = BitVec::from_ones(70, [65]);
        let b = BitVec::from_ones(70, [0, 1, 2, 64]);
        assert_eq!(a.cmp_as_integer(&b), std::cmp::Ordering::Greater);
        assert_eq!(b.as_u64(), None);
        assert_eq!(BitVec::from_ones(70, [3]).as_u64(), Some(8));
    }

    #[test]
    fn bit_string_round_trip() {
        let v = BitVec::from_ones(9, [0, 4, 8]);
        assert_eq!(v.to_bit_string(), "100010001");
        assert_eq!(BitVec::from_bit_string("100010001"), Some(v));
    }

    #[test]
    fn highest_below() {
        let v = BitVec::from_ones(200, [3, 70, 130]);
        assert_eq!(v.highest_one_below(200), Some(130));
        assert_eq!(v.highest_one_below(130), Some(70));
        assert_eq!(v.highest_one_below(64), Some(3));
        assert_eq!(v.highest_one_below(3), None);
    }
}
