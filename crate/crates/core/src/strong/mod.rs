//! Strongly Q-forcing matrices.
//!
//! `A` is strongly Q-forcing when every 1-entry of `A` lies in some `s x t`
//! submatrix that is *exactly* `Q`. This module holds the witness search and
//! checker; the explicit constructions, bounds, symmetry handling and the
//! exact search for `M(n, Q)` live in the submodules.

pub mod bounds;
pub mod constructions;
pub mod search;
pub mod symmetry;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bitmatrix::{BitMatrix, Position};
use crate::error::{Error, Result};
use crate::forcing::check_fits;

/// Row and column selections realizing an exact copy of the pattern.
///
/// Indices are 0-based and strictly increasing; the JSON form is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WitnessEmbedding {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl WitnessEmbedding {
    /// Whether `submatrix(a, rows, cols) == q`.
    pub fn realizes(&self, a: &BitMatrix, q: &BitMatrix) -> bool {
        a.submatrix(&self.rows, &self.cols).is_ok_and(|sub| &sub == q)
    }

    /// Whether the embedding places a 1-entry of `q` on `pos`.
    pub fn covers(&self, q: &BitMatrix, pos: Position) -> bool {
        match (
            self.rows.iter().position(|&r| r == pos.row),
            self.cols.iter().position(|&c| c == pos.col),
        ) {
            (Some(y), Some(x)) => q.get(y, x),
            _ => false,
        }
    }
}

impl Serialize for WitnessEmbedding {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        let mut st = s.serialize_struct("WitnessEmbedding", 2)?;
        st.serialize_field("rows", &one_based(&self.rows))?;
        st.serialize_field("cols", &one_based(&self.cols))?;
        st.end()
    }
}

fn next_set(bits: &[u64], from: usize, limit: usize) -> Option<usize> {
    let mut c = from;
    while c < limit {
        let w = bits[c / 64] >> (c % 64);
        if w != 0 {
            let found = c + w.trailing_zeros() as usize;
            return (found < limit).then_some(found);
        }
        c = (c / 64 + 1) * 64;
    }
    None
}

fn prev_set(bits: &[u64], below: usize) -> Option<usize> {
    let mut c = below;
    while c > 0 {
        let hi = c - 1;
        let w = bits[hi / 64] & (u64::MAX >> (63 - hi % 64));
        if w != 0 {
            return Some(hi / 64 * 64 + 63 - w.leading_zeros() as usize);
        }
        c = hi / 64 * 64;
    }
    None
}

/// Backtracking over pattern rows with the embedded 1-entry pinned.
///
/// `compat[x]` holds the ambient columns whose entries agree with pattern
/// column `x` on every row chosen so far. A partial row choice survives only
/// while an increasing column chain through `compat` exists with the pinned
/// column at position `x`.
struct RowSearch<'a> {
    a: &'a BitMatrix,
    q: &'a BitMatrix,
    pos: Position,
    y: usize,
    x: usize,
    words: usize,
    full: Vec<u64>,
    rows: Vec<usize>,
}

impl RowSearch<'_> {
    fn compat<'a>(&self, compat: &'a [u64], x: usize) -> &'a [u64] {
        &compat[x * self.words..(x + 1) * self.words]
    }

    /// Greedy chain: leftmost columns for the pattern columns before `x`,
    /// rightmost for those after it.
    fn chain(&self, compat: &[u64]) -> Option<Vec<usize>> {
        let n = self.a.cols();
        let t = self.q.cols();
        let (px, pc) = (self.x, self.pos.col);
        let pinned = self.compat(compat, px);
        if (pinned[pc / 64] >> (pc % 64)) & 1 == 0 {
            return None;
        }
        let mut cols = Vec::with_capacity(t);
        let mut from = 0;
        for x in 0..px {
            let c = next_set(self.compat(compat, x), from, pc)?;
            cols.push(c);
            from = c + 1;
        }
        cols.push(pc);
        let mut right = Vec::with_capacity(t - px - 1);
        let mut below = n;
        for x in (px + 1..t).rev() {
            let c = prev_set(self.compat(compat, x), below)?;
            if c <= pc {
                return None;
            }
            right.push(c);
            below = c;
        }
        cols.extend(right.into_iter().rev());
        Some(cols)
    }

    fn dfs(&mut self, i: usize, min_row: usize, compat: &[u64]) -> Option<Vec<usize>> {
        let s = self.q.rows();
        if i == s {
            return self.chain(compat);
        }
        let m = self.a.rows();
        let candidates = if i == self.y {
            self.pos.row..self.pos.row + 1
        } else if i < self.y {
            min_row..self.pos.row + 1 - (self.y - i)
        } else {
            min_row..m + 1 - (s - i)
        };
        let t = self.q.cols();
        let mut next = vec![0u64; compat.len()];
        for r in candidates {
            if r < min_row {
                continue;
            }
            let row = self.a.row_words(r);
            for x in 0..t {
                let want_one = self.q.get(i, x);
                for w in 0..self.words {
                    let agree = if want_one { row[w] } else { !row[w] & self.full[w] };
                    next[x * self.words + w] = compat[x * self.words + w] & agree;
                }
            }
            if self.chain(&next).is_none() {
                continue;
            }
            self.rows.push(r);
            if let Some(cols) = self.dfs(i + 1, r + 1, &next) {
                return Some(cols);
            }
            self.rows.pop();
        }
        None
    }
}

/// Finds an exact copy of `q` in `a` that places a 1-entry of `q` on `pos`.
///
/// Pattern 1-entries are tried in row-major order and ambient rows in ascending
/// order, so the result is deterministic.
pub fn find_witness(a: &BitMatrix, q: &BitMatrix, pos: Position) -> Result<Option<WitnessEmbedding>> {
    let (m, n) = a.dims();
    check_fits(m, n, q)?;
    if pos.row >= m || pos.col >= n {
        return Err(Error::InvalidSelection(format!("position {pos} outside {m}x{n}")));
    }
    if !a.at(pos) {
        return Err(Error::ZeroEntry { row: pos.row + 1, col: pos.col + 1 });
    }
    let (s, t) = q.dims();
    let full = a.full_row_words();
    let words = a.words_per_row();
    let start: Vec<u64> = full.iter().copied().cycle().take(words * t).collect();
    for p in q.one_positions() {
        let (y, x) = (p.row, p.col);
        if pos.row < y || m - pos.row < s - y || pos.col < x || n - pos.col < t - x {
            continue;
        }
        let mut search = RowSearch {
            a,
            q,
            pos,
            y,
            x,
            words,
            full: full.clone(),
            rows: Vec::with_capacity(s),
        };
        if let Some(cols) = search.dfs(0, 0, &start) {
            let w = WitnessEmbedding { rows: search.rows, cols };
            debug_assert!(w.realizes(a, q) && w.covers(q, pos));
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Whether every 1-entry of `a` lies in an exact copy of `q`. Vacuously true
/// for the all-zero matrix.
pub fn is_strongly_forcing(a: &BitMatrix, q: &BitMatrix) -> Result<bool> {
    let (m, n) = a.dims();
    check_fits(m, n, q)?;
    let mut covered = BitMatrix::zeros(m, n)?;
    for p in a.one_positions() {
        if covered.at(p) {
            continue;
        }
        match find_witness(a, q, p)? {
            None => return Ok(false),
            Some(w) => {
                for qp in q.one_positions() {
                    covered.set(w.rows[qp.row], w.cols[qp.col], true);
                }
            }
        }
    }
    Ok(true)
}

/// One witness lookup per 1-entry of `a`, in row-major order.
pub fn witnesses(a: &BitMatrix, q: &BitMatrix) -> Result<Vec<(Position, Option<WitnessEmbedding>)>> {
    a.one_positions().map(|p| Ok((p, find_witness(a, q, p)?))).collect()
}

/// The 1-entries of `a` that lie in no exact copy of `q`.
pub fn uncovered(a: &BitMatrix, q: &BitMatrix) -> Result<Vec<Position>> {
    Ok(witnesses(a, q)?.into_iter().filter(|(_, w)| w.is_none()).map(|(p, _)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::parse(&rows.join("\n")).unwrap()
    }

    #[test]
    fn bit_scans() {
        let bits = [0b1010u64, 1];
        assert_eq!(next_set(&bits, 0, 70), Some(1));
        assert_eq!(next_set(&bits, 2, 70), Some(3));
        assert_eq!(next_set(&bits, 4, 70), Some(64));
        assert_eq!(next_set(&bits, 4, 64), None);
        assert_eq!(prev_set(&bits, 70), Some(64));
        assert_eq!(prev_set(&bits, 64), Some(3));
        assert_eq!(prev_set(&bits, 3), Some(1));
        assert_eq!(prev_set(&bits, 1), None);
    }

    #[test]
    fn witness_in_complement_of_hankel() {
        let i2 = BitMatrix::identity(2).unwrap();
        for n in 2..7 {
            let a = BitMatrix::hankel(n).unwrap().complement();
            for p in a.one_positions() {
                let w = find_witness(&a, &i2, p).unwrap().expect("J-H is strongly I2-forcing");
                assert!(w.realizes(&a, &i2));
                assert!(w.covers(&i2, p));
            }
        }
    }

    #[test]
    fn witness_absent_or_invalid() {
        let i2 = BitMatrix::identity(2).unwrap();
        let j = BitMatrix::ones(4, 4).unwrap();
        assert_eq!(find_witness(&j, &i2, Position::new(0, 0)).unwrap(), None);
        let a = BitMatrix::identity(3).unwrap();
        assert_eq!(
            find_witness(&a, &i2, Position::new(0, 1)),
            Err(Error::ZeroEntry { row: 1, col: 2 })
        );
        assert!(find_witness(&a, &i2, Position::new(5, 0)).is_err());
        assert!(find_witness(&i2, &a, Position::new(0, 0)).is_err());
    }

    #[test]
    fn witness_for_s5_corner() {
        let s5 = m(&["10000", "01110", "01101", "01011", "00111"]);
        let i3 = BitMatrix::identity(3).unwrap();
        let w = find_witness(&s5, &i3, Position::new(0, 0)).unwrap().unwrap();
        assert_eq!(w.rows[0], 0);
        assert_eq!(w.cols[0], 0);
        assert!(w.rows[1..].iter().all(|&r| (1..5).contains(&r)));
        assert!(w.realizes(&s5, &i3));
        // Deterministic: rows ascend first, columns are chosen greedily.
        assert_eq!(w, WitnessEmbedding { rows: vec![0, 1, 2], cols: vec![0, 3, 4] });
    }

    #[test]
    fn strong_checks() {
        let i2 = BitMatrix::identity(2).unwrap();
        let h2 = BitMatrix::hankel(2).unwrap();
        for n in 2..8 {
            assert!(is_strongly_forcing(&BitMatrix::identity(n).unwrap().complement(), &h2).unwrap());
            assert!(!is_strongly_forcing(&BitMatrix::ones(n, n).unwrap(), &i2).unwrap());
            assert!(is_strongly_forcing(&BitMatrix::zeros(n, n).unwrap(), &i2).unwrap());
        }
        let s5 = m(&["10000", "01110", "01101", "01011", "00111"]);
        assert!(is_strongly_forcing(&s5, &BitMatrix::identity(3).unwrap()).unwrap());
        let mut bad = BitMatrix::hankel(4).unwrap().complement();
        bad.set(1, 2, true);
        assert!(!is_strongly_forcing(&bad, &i2).unwrap());
        assert!(!uncovered(&bad, &i2).unwrap().is_empty());
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        // 2 x 130 ambient, pattern [1 0 1]: every 1 needs a 0 between two 1s.
        let q = m(&["101"]);
        let mut a = BitMatrix::zeros(2, 130).unwrap();
        for c in [0, 70, 129] {
            a.set(1, c, true);
        }
        assert!(is_strongly_forcing(&a, &q).unwrap());
        let w = find_witness(&a, &q, Position::new(1, 129)).unwrap().unwrap();
        assert_eq!(w.cols, vec![0, 1, 129]);
        let mut b = BitMatrix::zeros(2, 130).unwrap();
        b.set(0, 128, true);
        b.set(0, 129, true);
        assert!(!is_strongly_forcing(&b, &q).unwrap());
    }

    #[test]
    fn witness_json_is_one_based() {
        let w = WitnessEmbedding { rows: vec![0, 2], cols: vec![1, 3] };
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"rows":[1,3],"cols":[2,4]}"#);
    }
}
