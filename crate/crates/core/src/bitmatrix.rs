//! Dense (0,1)-matrices with bit-packed rows.
//!
//! Storage is row-major; every row occupies `ceil(cols / 64)` words and the
//! unused high bits of the last word of each row are always zero, so word-level
//! popcounts and comparisons need no masking.
//!
//! Indices are 0-based everywhere in the library. Anything meant for humans
//! (the `Display` impl of [`Position`], error messages) is 1-based.
//!
//! The text format is an optional `"m n"` header line followed by `m` lines of
//! `n` characters from `{0,1}`:
//!
//! ```text
//! 2 2
//! 10
//! 01
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported row or column count.
pub const MAX_DIM: usize = 1 << 16;

const WORD: usize = 64;

/// A cell of a matrix, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub const fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }

    /// `[row, col]` shifted to 1-based numbering.
    pub fn one_based(self) -> [usize; 2] {
        [self.row + 1, self.col + 1]
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row + 1, self.col + 1)
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fill {
    Zero,
    One,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::ZeroDimension { rows, cols });
    }
    if rows > MAX_DIM {
        return Err(Error::DimensionTooLarge(rows));
    }
    if cols > MAX_DIM {
        return Err(Error::DimensionTooLarge(cols));
    }
    Ok(())
}

fn check_selection(sel: &[usize], bound: usize, what: &str) -> Result<()> {
    if sel.is_empty() {
        return Err(Error::InvalidSelection(format!("empty {what} selection")));
    }
    for w in sel.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidSelection(format!(
                "{what} selection must be strictly increasing ({} then {})",
                w[0] + 1,
                w[1] + 1
            )));
        }
    }
    let last = sel[sel.len() - 1];
    if last >= bound {
        return Err(Error::InvalidSelection(format!(
            "{what} {} out of range 1..={bound}",
            last + 1
        )));
    }
    Ok(())
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize, fill: Fill) -> Result<Self> {
        check_dims(rows, cols)?;
        let words_per_row = cols.div_ceil(WORD);
        let mut m = BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        };
        if fill == Fill::One {
            let full = m.full_row_words();
            for r in 0..rows {
                m.row_words_mut(r).copy_from_slice(&full);
            }
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, Fill::Zero)
    }

    /// The all-one matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, Fill::One)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from rows of `0`/`1` bytes.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        for (i, r) in rows.iter().enumerate() {
            if r.as_ref().len() != cols {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("ragged rows: expected {cols} columns, got {}", r.as_ref().len()),
                });
            }
        }
        Self::from_fn(rows.len(), cols, |r, c| rows[r].as_ref()[c] != 0)
    }

    /// The identity `I_k`.
    pub fn identity(k: usize) -> Result<Self> {
        Self::from_fn(k, k, |r, c| r == c)
    }

    /// The Hankel identity `H_k`: ones on the anti-diagonal.
    pub fn hankel(k: usize) -> Result<Self> {
        Self::from_fn(k, k, |r, c| r + c + 1 == k)
    }

    /// Permutation matrix with a 1 at `(i, perm[i])` for every row `i`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let k = perm.len();
        let mut seen = vec![false; k];
        for &p in perm {
            if p >= k || seen[p] {
                return Err(Error::NotPermutation);
            }
            seen[p] = true;
        }
        Self::from_fn(k, k, |r, c| perm[r] == c)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of bounds");
        let w = self.data[row * self.words_per_row + col / WORD];
        (w >> (col % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of bounds");
        let idx = row * self.words_per_row + col / WORD;
        let bit = 1u64 << (col % WORD);
        if value {
            self.data[idx] |= bit;
        } else {
            self.data[idx] &= !bit;
        }
    }

    pub fn at(&self, p: Position) -> bool {
        self.get(p.row, p.col)
    }

    pub fn row_words(&self, row: usize) -> &[u64] {
        let start = row * self.words_per_row;
        &self.data[start..start + self.words_per_row]
    }

    pub(crate) fn row_words_mut(&mut self, row: usize) -> &mut [u64] {
        let start = row * self.words_per_row;
        &mut self.data[start..start + self.words_per_row]
    }

    /// Words of a row with every valid column set.
    pub fn full_row_words(&self) -> Vec<u64> {
        let mut v = vec![u64::MAX; self.words_per_row];
        let rem = self.cols % WORD;
        if rem != 0 {
            v[self.words_per_row - 1] = (1u64 << rem) - 1;
        }
        v
    }

    /// `|M|`, the number of 1-entries.
    pub fn ones_count(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn zeros_count(&self) -> usize {
        self.rows * self.cols - self.ones_count()
    }

    pub fn row_ones(&self, row: usize) -> usize {
        self.row_words(row).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_ones(&self, col: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, col)).count()
    }

    pub fn is_all_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_all_one(&self) -> bool {
        self.ones_count() == self.rows * self.cols
    }

    /// Positions of all 1-entries in row-major order.
    pub fn one_positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.rows).flat_map(move |r| {
            self.row_words(r).iter().enumerate().flat_map(move |(wi, &w)| {
                BitIter(w).map(move |b| Position::new(r, wi * WORD + b))
            })
        })
    }

    /// Positions of all 0-entries in row-major order.
    pub fn zero_positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).filter(move |&c| !self.get(r, c)).map(move |c| Position::new(r, c)))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows).expect("dims already valid");
        for p in self.one_positions() {
            out.set(p.col, p.row, true);
        }
        out
    }

    /// Row reversal: `(i, j) -> (m-1-i, j)`.
    pub fn reflect_h(&self) -> Self {
        let mut out = self.clone();
        for r in 0..self.rows {
            out.row_words_mut(r).copy_from_slice(self.row_words(self.rows - 1 - r));
        }
        out
    }

    /// Column reversal: `(i, j) -> (i, n-1-j)`.
    pub fn reflect_v(&self) -> Self {
        let mut out = Self::zeros(self.rows, self.cols).expect("dims already valid");
        for p in self.one_positions() {
            out.set(p.row, self.cols - 1 - p.col, true);
        }
        out
    }

    /// `J - M`.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        let full = self.full_row_words();
        for r in 0..self.rows {
            for (w, f) in out.row_words_mut(r).iter_mut().zip(&full) {
                *w = !*w & f;
            }
        }
        out
    }

    /// Keeps the listed rows and columns. Selections must be strictly increasing.
    pub fn submatrix(&self, row_sel: &[usize], col_sel: &[usize]) -> Result<Self> {
        check_selection(row_sel, self.rows, "row")?;
        check_selection(col_sel, self.cols, "column")?;
        Self::from_fn(row_sel.len(), col_sel.len(), |r, c| self.get(row_sel[r], col_sel[c]))
    }

    /// The contiguous `s x t` block whose top-left corner is `(r0, c0)`.
    pub fn window(&self, r0: usize, c0: usize, s: usize, t: usize) -> Result<Self> {
        check_dims(s, t)?;
        if r0 + s > self.rows || c0 + t > self.cols {
            return Err(Error::InvalidSelection(format!(
                "window of size {s}x{t} at ({}, {}) does not fit in {}x{}",
                r0 + 1,
                c0 + 1,
                self.rows,
                self.cols
            )));
        }
        Self::from_fn(s, t, |r, c| self.get(r0 + r, c0 + c))
    }

    /// `self <= other` entrywise.
    pub fn entrywise_leq(&self, other: &Self) -> Result<bool> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.data.iter().zip(&other.data).all(|(a, b)| a & !b == 0))
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols)?;
        for p in self.one_positions() {
            out.set(p.row, p.col, true);
        }
        for p in other.one_positions() {
            out.set(self.rows + p.row, self.cols + p.col, true);
        }
        Ok(out)
    }

    /// `Some(perm)` with `perm[i]` the column of the 1 in row `i`, when this is a
    /// permutation matrix.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if !self.is_square() {
            return None;
        }
        let mut perm = Vec::with_capacity(self.rows);
        let mut col_used = vec![false; self.cols];
        for r in 0..self.rows {
            if self.row_ones(r) != 1 {
                return None;
            }
            let c = (0..self.cols).find(|&c| self.get(r, c))?;
            if std::mem::replace(&mut col_used[c], true) {
                return None;
            }
            perm.push(c);
        }
        Some(perm)
    }

    pub fn is_permutation(&self) -> bool {
        self.as_permutation().is_some()
    }

    /// Canonical text form: header line plus one line per row, newline terminated.
    pub fn serialize(&self) -> String {
        let mut s = String::with_capacity((self.cols + 1) * (self.rows + 1) + 8);
        s.push_str(&format!("{} {}\n", self.rows, self.cols));
        self.write_body(&mut s);
        s
    }

    /// Row lines only, without the header.
    pub fn body(&self) -> String {
        let mut s = String::new();
        self.write_body(&mut s);
        s
    }

    fn write_body(&self, s: &mut String) {
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines: Vec<&str> = text.lines().collect();
        while lines.last().is_some_and(|l| l.is_empty()) {
            lines.pop();
        }
        if lines.is_empty() {
            return Err(Error::Parse { line: 1, msg: "empty input".into() });
        }
        let mut header = None;
        let mut first = 0;
        if lines[0].contains(|c: char| c.is_ascii_whitespace()) {
            let fields: Vec<&str> = lines[0].split_whitespace().collect();
            let parsed: Vec<usize> = fields.iter().filter_map(|f| f.parse().ok()).collect();
            if fields.len() != 2 || parsed.len() != 2 {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("malformed header {:?}, expected \"m n\"", lines[0]),
                });
            }
            header = Some((parsed[0], parsed[1]));
            first = 1;
        }
        let body = &lines[first..];
        let cols = body.first().map_or(0, |l| l.len());
        for (i, l) in body.iter().enumerate() {
            let line = first + i + 1;
            if let Some(bad) = l.chars().find(|&ch| ch != '0' && ch != '1') {
                return Err(Error::Parse { line, msg: format!("invalid character {bad:?}") });
            }
            if l.len() != cols {
                return Err(Error::Parse {
                    line,
                    msg: format!("ragged rows: expected {cols} columns, got {}", l.len()),
                });
            }
        }
        if let Some((m, n)) = header {
            if (m, n) != (body.len(), cols) {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("header says {m}x{n} but the body is {}x{cols}", body.len()),
                });
            }
        }
        if body.is_empty() {
            return Err(Error::Parse { line: first + 1, msg: "no matrix rows".into() });
        }
        check_dims(body.len(), cols)?;
        Self::from_fn(body.len(), cols, |r, c| body[r].as_bytes()[c] == b'1')
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        f.write_str(&self.body())
    }
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&BitMatrix::serialize(self))
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitMatrix::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&str]) -> BitMatrix {
        let bytes: Vec<Vec<u8>> = rows.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect();
        BitMatrix::from_rows(&bytes).unwrap()
    }

    fn padding_clear(a: &BitMatrix) -> bool {
        let full = a.full_row_words();
        (0..a.rows).all(|r| a.row_words(r).iter().zip(&full).all(|(w, f)| w & !f == 0))
    }

    #[test]
    fn make_fills() {
        assert_eq!(BitMatrix::new(3, 3, Fill::One).unwrap().ones_count(), 9);
        assert_eq!(BitMatrix::new(2, 5, Fill::Zero).unwrap().ones_count(), 0);
        let q1 = BitMatrix::new(1, 1, Fill::One).unwrap();
        assert_eq!(q1, m(&["1"]));
        assert!(matches!(BitMatrix::new(0, 3, Fill::One), Err(Error::ZeroDimension { .. })));
        assert!(matches!(BitMatrix::new(MAX_DIM + 1, 1, Fill::One), Err(Error::DimensionTooLarge(_))));
    }

    #[test]
    fn wide_rows_keep_padding_clear() {
        let a = BitMatrix::ones(3, 130).unwrap();
        assert!(padding_clear(&a));
        assert_eq!(a.ones_count(), 390);
        assert!(padding_clear(&a.complement()));
        assert_eq!(a.complement().ones_count(), 0);
        assert_eq!(a.one_positions().count(), 390);
    }

    #[test]
    fn identity_and_hankel() {
        assert_eq!(BitMatrix::identity(2).unwrap(), m(&["10", "01"]));
        assert_eq!(BitMatrix::hankel(3).unwrap(), m(&["001", "010", "100"]));
        let i4 = BitMatrix::identity(4).unwrap();
        assert_eq!(i4.transpose(), i4);
        assert_eq!(BitMatrix::identity(3).unwrap().reflect_h(), BitMatrix::hankel(3).unwrap());
    }

    #[test]
    fn transforms() {
        let a = m(&["110", "001"]);
        assert_eq!(a.transpose(), m(&["10", "10", "01"]));
        let both = a.reflect_h().reflect_v();
        for r in 0..2 {
            for c in 0..3 {
                assert_eq!(both.get(r, c), a.get(1 - r, 2 - c));
            }
        }
    }

    #[test]
    fn submatrix_and_window() {
        let i3 = BitMatrix::identity(3).unwrap();
        assert_eq!(i3.submatrix(&[0, 1, 2], &[0, 1, 2]).unwrap(), i3);
        assert_eq!(i3.submatrix(&[0, 2], &[0, 2]).unwrap(), BitMatrix::identity(2).unwrap());
        let jh = BitMatrix::hankel(4).unwrap().complement();
        assert_eq!(jh.submatrix(&[0, 1], &[0, 1]).unwrap(), BitMatrix::ones(2, 2).unwrap());
        assert!(i3.submatrix(&[1, 0], &[0]).is_err());
        assert!(i3.submatrix(&[0, 0], &[0]).is_err());
        assert!(i3.submatrix(&[0, 3], &[0]).is_err());
        assert!(i3.submatrix(&[], &[0]).is_err());

        let i4 = BitMatrix::identity(4).unwrap();
        assert_eq!(i4.window(0, 0, 4, 4).unwrap(), i4);
        assert_eq!(i4.window(1, 1, 2, 2).unwrap(), BitMatrix::identity(2).unwrap());
        assert_eq!(BitMatrix::hankel(4).unwrap().window(0, 2, 2, 2).unwrap(), BitMatrix::hankel(2).unwrap());
        assert!(i4.window(3, 0, 2, 1).is_err());
    }

    #[test]
    fn direct_sum_and_leq() {
        assert!(BitMatrix::identity(2).unwrap().entrywise_leq(&BitMatrix::ones(2, 2).unwrap()).unwrap());
        assert!(!BitMatrix::ones(2, 2).unwrap().entrywise_leq(&BitMatrix::identity(2).unwrap()).unwrap());
        assert!(BitMatrix::identity(2).unwrap().entrywise_leq(&BitMatrix::identity(3).unwrap()).is_err());

        let one = m(&["1"]);
        let s5 = one.direct_sum(&BitMatrix::hankel(4).unwrap().complement()).unwrap();
        assert_eq!(s5, m(&["10000", "01110", "01101", "01011", "00111"]));
        assert_eq!(s5.ones_count(), 13);
    }

    #[test]
    fn permutations() {
        assert_eq!(BitMatrix::permutation(&[1, 0]).unwrap(), BitMatrix::hankel(2).unwrap());
        assert!(BitMatrix::permutation(&[0, 0]).is_err());
        assert_eq!(BitMatrix::hankel(4).unwrap().as_permutation(), Some(vec![3, 2, 1, 0]));
        assert!(!BitMatrix::ones(2, 2).unwrap().is_permutation());
        assert!(!m(&["10", "00"]).is_permutation());
    }

    #[test]
    fn parse_formats() {
        assert_eq!(BitMatrix::parse("2 2\n10\n01").unwrap(), BitMatrix::identity(2).unwrap());
        assert_eq!(BitMatrix::parse("10\n01\n").unwrap(), BitMatrix::identity(2).unwrap());
        assert_eq!(BitMatrix::parse("2 2\r\n10\r\n01\r\n").unwrap(), BitMatrix::identity(2).unwrap());
        assert_eq!(BitMatrix::identity(2).unwrap().serialize(), "2 2\n10\n01\n");

        let ragged = BitMatrix::parse("10\n0").unwrap_err();
        assert!(matches!(ragged, Error::Parse { line: 2, .. }), "{ragged}");
        assert!(matches!(BitMatrix::parse("1x\n01"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(BitMatrix::parse("3 2\n10\n01"), Err(Error::Parse { line: 1, .. })));
        assert!(BitMatrix::parse("").is_err());
        assert!(BitMatrix::parse("2 2\n").is_err());
        assert!(BitMatrix::parse("1 1\n\n1").is_err());
    }

    #[test]
    fn position_display_is_one_based() {
        assert_eq!(Position::new(0, 2).to_string(), "(1, 3)");
        assert_eq!(serde_json::to_string(&Position::new(1, 0)).unwrap(), "[2,1]");
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..9, 1usize..70).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]).unwrap())
        })
    }

    proptest! {
        #[test]
        fn counts_and_involutions(a in arb_matrix()) {
            prop_assert!(padding_clear(&a));
            prop_assert_eq!(a.ones_count() + a.zeros_count(), a.rows() * a.cols());
            prop_assert_eq!(a.transpose().transpose(), a.clone());
            prop_assert_eq!(a.reflect_h().reflect_h(), a.clone());
            prop_assert_eq!(a.reflect_v().reflect_v(), a.clone());
            prop_assert_eq!(a.transpose().ones_count(), a.ones_count());
            prop_assert_eq!(a.reflect_h().ones_count(), a.ones_count());
            prop_assert_eq!(a.reflect_v().ones_count(), a.ones_count());
            prop_assert!(padding_clear(&a.reflect_v()));
            prop_assert!(padding_clear(&a.complement()));
        }

        #[test]
        fn text_round_trip(a in arb_matrix()) {
            let text = a.serialize();
            prop_assert_eq!(BitMatrix::parse(&text).unwrap(), a.clone());
            prop_assert_eq!(BitMatrix::parse(&a.body()).unwrap().serialize(), text);
        }

        #[test]
        fn contiguous_submatrix_is_window(a in arb_matrix(), seed in any::<[usize; 4]>()) {
            let r0 = seed[0] % a.rows();
            let c0 = seed[1] % a.cols();
            let s = 1 + seed[2] % (a.rows() - r0);
            let t = 1 + seed[3] % (a.cols() - c0);
            let rows: Vec<usize> = (r0..r0 + s).collect();
            let cols: Vec<usize> = (c0..c0 + t).collect();
            prop_assert_eq!(a.submatrix(&rows, &cols).unwrap(), a.window(r0, c0, s, t).unwrap());
        }
    }
}
