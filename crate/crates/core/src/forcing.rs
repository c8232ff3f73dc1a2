//! Q-forcing matrices: the minimum-ones construction and its closed forms.
//!
//! A matrix `A` is Q-forcing when every `s x t` submatrix of `A` dominates `Q`
//! entrywise. The per-entry requirements are conjunctive, so there is a unique
//! minimal Q-forcing matrix, obtained by sliding `Q` over every contiguous
//! window and OR-ing its 1-entries into place ([`minimal_forcing`]). For
//! ambients at least twice the pattern size the same matrix can be read off the
//! four corner functions of `Q` ([`corner_functions`], [`construct_a_mnq`]),
//! which gives closed-form counts ([`min_ones`]).

use serde::Serialize;

use crate::bitmatrix::{BitMatrix, Position};
use crate::error::{Error, Result};

/// `p1` dominates `p2` when it is weakly below and weakly right of it.
pub fn dominates(p1: Position, p2: Position) -> bool {
    p1.row >= p2.row && p1.col >= p2.col
}

/// `p1` alt-dominates `p2` when it is weakly above and weakly right of it.
pub fn alt_dominates(p1: Position, p2: Position) -> bool {
    p1.row <= p2.row && p1.col >= p2.col
}

/// The four corner functions of a pattern.
///
/// Each set holds the 0-entries that can be reached from its corner without
/// passing a 1-entry, e.g. `nw` holds the 0-entries that do not dominate any
/// 1-entry. The `*_shape` vectors are the row lengths of each set after flipping
/// its corner to the upper left (`sw` and `se` are read bottom-up), so each one
/// is a Young diagram profile: non-increasing, trailing zero rows dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerReport {
    pub nw: Vec<Position>,
    pub ne: Vec<Position>,
    pub se: Vec<Position>,
    pub sw: Vec<Position>,
    pub nw_shape: Vec<usize>,
    pub ne_shape: Vec<usize>,
    pub se_shape: Vec<usize>,
    pub sw_shape: Vec<usize>,
}

impl CornerReport {
    /// `|NW| + |SW| + |NE| + |SE|`.
    pub fn total(&self) -> usize {
        self.nw.len() + self.sw.len() + self.ne.len() + self.se.len()
    }
}

/// For every cell, whether some 1-entry lies in the quadrant that extends from
/// it towards the given corner (inclusive).
fn quadrant_has_one(q: &BitMatrix, up: bool, left: bool) -> Vec<Vec<bool>> {
    let (s, t) = q.dims();
    let mut seen = vec![vec![false; t]; s];
    let rows: Vec<usize> = if up { (0..s).collect() } else { (0..s).rev().collect() };
    let cols: Vec<usize> = if left { (0..t).collect() } else { (0..t).rev().collect() };
    for (ri, &r) in rows.iter().enumerate() {
        for (ci, &c) in cols.iter().enumerate() {
            let mut v = q.get(r, c);
            if ri > 0 {
                v |= seen[rows[ri - 1]][c];
            }
            if ci > 0 {
                v |= seen[r][cols[ci - 1]];
            }
            seen[r][c] = v;
        }
    }
    seen
}

fn profile(set: &[Position], rows: usize, bottom_up: bool) -> Vec<usize> {
    let mut counts = vec![0usize; rows];
    for p in set {
        counts[p.row] += 1;
    }
    if bottom_up {
        counts.reverse();
    }
    while counts.last() == Some(&0) {
        counts.pop();
    }
    counts
}

pub fn corner_functions(q: &BitMatrix) -> CornerReport {
    let (s, t) = q.dims();
    // nw: no 1 weakly above-left; sw: none weakly below-left;
    // ne: none weakly above-right; se: none weakly below-right.
    let collect = |blocked: Vec<Vec<bool>>| -> Vec<Position> {
        let mut v = Vec::new();
        for (r, row) in blocked.iter().enumerate() {
            for (c, &b) in row.iter().enumerate() {
                if !b {
                    v.push(Position::new(r, c));
                }
            }
        }
        v
    };
    let nw = collect(quadrant_has_one(q, true, true));
    let sw = collect(quadrant_has_one(q, false, true));
    let ne = collect(quadrant_has_one(q, true, false));
    let se = collect(quadrant_has_one(q, false, false));
    debug_assert!(t > 0);
    CornerReport {
        nw_shape: profile(&nw, s, false),
        ne_shape: profile(&ne, s, false),
        se_shape: profile(&se, s, true),
        sw_shape: profile(&sw, s, true),
        nw,
        ne,
        se,
        sw,
    }
}

/// A pattern split into its boundary all-zero bands and the remaining core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreDecomposition {
    pub top_zero_rows: usize,
    pub bottom_zero_rows: usize,
    pub left_zero_cols: usize,
    pub right_zero_cols: usize,
    pub core: BitMatrix,
}

impl CoreDecomposition {
    /// Re-pads the core with its zero bands, giving back the original pattern.
    pub fn restore(&self) -> BitMatrix {
        let (s, t) = self.core.dims();
        let rows = s + self.top_zero_rows + self.bottom_zero_rows;
        let cols = t + self.left_zero_cols + self.right_zero_cols;
        let mut out = BitMatrix::zeros(rows, cols).expect("non-empty core");
        for p in self.core.one_positions() {
            out.set(p.row + self.top_zero_rows, p.col + self.left_zero_cols, true);
        }
        out
    }

    pub fn rows_removed(&self) -> usize {
        self.top_zero_rows + self.bottom_zero_rows
    }

    pub fn cols_removed(&self) -> usize {
        self.left_zero_cols + self.right_zero_cols
    }
}

/// Strips all-zero rows from the top and bottom and all-zero columns from the
/// left and right. Interior all-zero lines stay in the core.
pub fn core(q: &BitMatrix) -> Result<CoreDecomposition> {
    if q.is_all_zero() {
        return Err(Error::AllZeroPattern);
    }
    let (s, t) = q.dims();
    let top = (0..s).take_while(|&r| q.row_ones(r) == 0).count();
    let bottom = (0..s).rev().take_while(|&r| q.row_ones(r) == 0).count();
    let left = (0..t).take_while(|&c| q.col_ones(c) == 0).count();
    let right = (0..t).rev().take_while(|&c| q.col_ones(c) == 0).count();
    let core = q.window(top, left, s - top - bottom, t - left - right)?;
    Ok(CoreDecomposition {
        top_zero_rows: top,
        bottom_zero_rows: bottom,
        left_zero_cols: left,
        right_zero_cols: right,
        core,
    })
}

pub(crate) fn check_fits(m: usize, n: usize, q: &BitMatrix) -> Result<()> {
    let (s, t) = q.dims();
    if m < s || n < t {
        return Err(Error::PatternTooLarge {
            pattern_rows: s,
            pattern_cols: t,
            rows: m,
            cols: n,
        });
    }
    Ok(())
}

/// The unique `m x n` Q-forcing matrix with the fewest 1-entries.
///
/// Every 1-entry `(y, x)` of `Q`, placed in every contiguous window, forces a
/// 1 at `(r0 + y, c0 + x)`. Row `y` of `Q` therefore contributes the union of
/// column intervals `[x, x + n - t]` to every ambient row `r0 + y`; the rows
/// are assembled from those interval masks word by word.
pub fn minimal_forcing(m: usize, n: usize, q: &BitMatrix) -> Result<BitMatrix> {
    check_fits(m, n, q)?;
    let (s, t) = q.dims();
    let mut out = BitMatrix::zeros(m, n)?;
    let slack = n - t;
    let row_masks: Vec<Vec<u64>> = (0..s)
        .map(|y| {
            let mut mask = vec![0u64; out.words_per_row()];
            for x in (0..t).filter(|&x| q.get(y, x)) {
                for c in x..=x + slack {
                    mask[c / 64] |= 1 << (c % 64);
                }
            }
            mask
        })
        .collect();
    for r in 0..m {
        let ys = r.saturating_sub(m - s)..=r.min(s - 1);
        let row = out.row_words_mut(r);
        for y in ys {
            for (w, mw) in row.iter_mut().zip(&row_masks[y]) {
                *w |= mw;
            }
        }
    }
    Ok(out)
}

/// Whether every `s x t` submatrix of `a` dominates `q`.
///
/// Equivalent to `minimal_forcing(m, n, q) <= a` entrywise.
pub fn is_forcing(a: &BitMatrix, q: &BitMatrix) -> Result<bool> {
    let (m, n) = a.dims();
    minimal_forcing(m, n, q)?.entrywise_leq(a)
}

/// Builds the minimal Q-forcing matrix directly from the corner functions and
/// zero bands of `q`: zero the four corner diagrams inside the four `s x t`
/// corner blocks, zero the boundary bands, set everything else to 1.
pub fn construct_a_mnq(m: usize, n: usize, q: &BitMatrix) -> Result<BitMatrix> {
    let (s, t) = q.dims();
    if m < 2 * s || n < 2 * t {
        return Err(Error::Precondition(format!(
            "the corner construction needs m >= 2s and n >= 2t (m={m}, n={n}, s={s}, t={t})"
        )));
    }
    let dec = core(q)?;
    let corners = corner_functions(q);
    let mut a = BitMatrix::ones(m, n)?;
    for r in (0..dec.top_zero_rows).chain(m - dec.bottom_zero_rows..m) {
        for c in 0..n {
            a.set(r, c, false);
        }
    }
    for c in (0..dec.left_zero_cols).chain(n - dec.right_zero_cols..n) {
        for r in 0..m {
            a.set(r, c, false);
        }
    }
    for p in &corners.nw {
        a.set(p.row, p.col, false);
    }
    for p in &corners.ne {
        a.set(p.row, n - t + p.col, false);
    }
    for p in &corners.sw {
        a.set(m - s + p.row, p.col, false);
    }
    for p in &corners.se {
        a.set(m - s + p.row, n - t + p.col, false);
    }
    Ok(a)
}

/// Which closed form produced a [`MinOnes`] value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountFormula {
    /// Pattern has the ambient's dimensions: the count is `|Q|`.
    FullSize,
    AllZero,
    AllOne,
    /// `(m - (s-s'))(n - (t-t'))` minus the corner cardinalities of the core.
    CoreCorners,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MinOnes {
    pub value: u64,
    pub formula: CountFormula,
}

/// `mn - (m-2s)(t-t') - (n-2t)(s-s') - |NW| - |SW| - |NE| - |SE|`, valid for
/// `m >= 2s`, `n >= 2t`.
pub fn banded_count(m: usize, n: usize, q: &BitMatrix) -> Option<u64> {
    let (s, t) = q.dims();
    if m < 2 * s || n < 2 * t || q.is_all_zero() {
        return None;
    }
    let dec = core(q).ok()?;
    let (s2, t2) = dec.core.dims();
    let corners = corner_functions(q).total();
    let v = (m * n) as i128
        - ((m - 2 * s) * (t - t2)) as i128
        - ((n - 2 * t) * (s - s2)) as i128
        - corners as i128;
    Some(v as u64)
}

/// `mn - (|NW| + |SW| + |NE| + |SE|)`, valid when the first and last rows and
/// columns of `q` each hold a 1 and `m >= 2s`, `n >= 2t`.
pub fn corner_count(m: usize, n: usize, q: &BitMatrix) -> Option<u64> {
    let (s, t) = q.dims();
    if m < 2 * s || n < 2 * t {
        return None;
    }
    let bordered = q.row_ones(0) > 0 && q.row_ones(s - 1) > 0 && q.col_ones(0) > 0 && q.col_ones(t - 1) > 0;
    if !bordered {
        return None;
    }
    Some((m * n - corner_functions(q).total()) as u64)
}

/// The count through the core, valid when `m - (s-s') >= 2s'` and
/// `n - (t-t') >= 2t'`.
pub fn core_count(m: usize, n: usize, q: &BitMatrix) -> Option<u64> {
    let (s, t) = q.dims();
    if m < s || n < t {
        return None;
    }
    let dec = core(q).ok()?;
    let (s2, t2) = dec.core.dims();
    let (mm, nn) = (m - (s - s2), n - (t - t2));
    if mm < 2 * s2 || nn < 2 * t2 {
        return None;
    }
    Some((mm * nn - corner_functions(&dec.core).total()) as u64)
}

/// `m(m, n, Q)` by closed form.
///
/// Trivial patterns (full-size, all-zero, all-one) are answered first;
/// otherwise the core-based count is used, whose precondition is implied by
/// that of [`banded_count`]. Returns [`Error::NoFormula`] when neither applies;
/// the popcount of [`minimal_forcing`] is always available as a fallback.
pub fn min_ones(m: usize, n: usize, q: &BitMatrix) -> Result<MinOnes> {
    check_fits(m, n, q)?;
    let (s, t) = q.dims();
    let (value, formula) = if (m, n) == (s, t) {
        (q.ones_count() as u64, CountFormula::FullSize)
    } else if q.is_all_zero() {
        (0, CountFormula::AllZero)
    } else if q.is_all_one() {
        ((m * n) as u64, CountFormula::AllOne)
    } else if let Some(v) = core_count(m, n, q) {
        if let Some(b) = banded_count(m, n, q) {
            debug_assert_eq!(b, v, "closed forms disagree");
        }
        (v, CountFormula::CoreCorners)
    } else {
        let dec = core(q)?;
        let (s2, t2) = dec.core.dims();
        return Err(Error::NoFormula(format!(
            "need m - {} >= {} and n - {} >= {}",
            s - s2,
            2 * s2,
            t - t2,
            2 * t2
        )));
    };
    Ok(MinOnes { value, formula })
}

fn require_permutation(p: &BitMatrix) -> Result<Vec<usize>> {
    p.as_permutation().ok_or(Error::NotPermutation)
}

/// `n^2 - k(k-1)`, the lower bound on `m(n, P)` over `k x k` permutations.
pub fn perm_min_bound(n: usize, k: usize) -> Result<u64> {
    if k == 0 || n < 2 * k {
        return Err(Error::Precondition(format!("need k >= 1 and n >= 2k (n={n}, k={k})")));
    }
    Ok((n * n - k * (k - 1)) as u64)
}

/// Whether `P` attains `n^2 - k(k-1)`: exactly the identity and the
/// anti-identity `H_k`.
///
/// The source statement names "I_k or its transpose", which is `I_k` itself;
/// the corner-sum argument (and exhaustive checks) single out `H_k` as the
/// second extremal matrix.
pub fn perm_min_equality(p: &BitMatrix) -> Result<bool> {
    let perm = require_permutation(p)?;
    let k = perm.len();
    Ok(perm.iter().enumerate().all(|(i, &c)| c == i) || perm.iter().enumerate().all(|(i, &c)| c == k - 1 - i))
}

/// `max_P m(n, P)` over `k x k` permutation matrices.
pub fn perm_max_m(n: usize, k: usize) -> Result<u64> {
    if k == 0 || n < 2 * k {
        return Err(Error::Precondition(format!("need k >= 1 and n >= 2k (n={n}, k={k})")));
    }
    let nn = (n * n) as u64;
    Ok(match k {
        1 => nn,
        2 => nn - 2,
        3 => nn - 5,
        _ => nn - 4 * k as u64 + 8,
    })
}

/// Whether `P` attains [`perm_max_m`].
///
/// For `k >= 4` this is the quadruple test: `p[1,2], p[2,k], p[k,k-1], p[k-1,1]`
/// all 1, or `p[2,1], p[k,2], p[k-1,k], p[1,k-1]` all 1 (1-based). Every
/// permutation is extremal for `k <= 2`; for `k = 3` all but `I_3` and `H_3`.
pub fn perm_max_extremal(p: &BitMatrix) -> Result<bool> {
    let perm = require_permutation(p)?;
    let k = perm.len();
    Ok(match k {
        1 | 2 => true,
        3 => !perm_min_equality(p)?,
        _ => {
            // 0-based: row i has its 1 in column perm[i].
            let first = perm[0] == 1 && perm[1] == k - 1 && perm[k - 1] == k - 2 && perm[k - 2] == 0;
            let second = perm[1] == 0 && perm[k - 1] == 1 && perm[k - 2] == k - 1 && perm[0] == k - 2;
            first || second
        }
    })
}
