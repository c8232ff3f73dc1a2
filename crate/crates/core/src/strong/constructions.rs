//! Explicit strongly-forcing matrices.

use serde::{Deserialize, Serialize};

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};
use crate::forcing::check_fits;

/// Leading all-zero rows of `q` and the column of the leftmost 1 in the first
/// row that has one.
fn duplication_anchor(q: &BitMatrix) -> Result<(usize, usize)> {
    if q.is_all_zero() {
        return Err(Error::AllZeroPattern);
    }
    let s0 = (0..q.rows()).find(|&r| q.row_ones(r) > 0).expect("q has a 1");
    let t1 = (0..q.cols()).find(|&c| q.get(s0, c)).expect("row s0 has a 1");
    Ok((s0, t1))
}

/// An `m x n` strongly Q-forcing matrix with `O(m + n)` zeros.
///
/// Starting from `q`, column `t1` (the leftmost 1 of the first non-zero row
/// `s0`) is repeated `n - t + 1` times, then row `s0` is repeated
/// `m - s + 1` times.
pub fn linear_zero_construction(m: usize, n: usize, q: &BitMatrix) -> Result<BitMatrix> {
    check_fits(m, n, q)?;
    let (s, t) = q.dims();
    let (s0, t1) = duplication_anchor(q)?;
    let (extra_rows, extra_cols) = (m - s, n - t);
    let src_col = |c: usize| {
        if c < t1 {
            c
        } else if c <= t1 + extra_cols {
            t1
        } else {
            c - extra_cols
        }
    };
    let src_row = |r: usize| {
        if r < s0 {
            r
        } else if r <= s0 + extra_rows {
            s0
        } else {
            r - extra_rows
        }
    };
    BitMatrix::from_fn(m, n, |r, c| q.get(src_row(r), src_col(c)))
}

/// Zero count of [`linear_zero_construction`]:
/// `zeros(Q) + (n - t) * z_col + (m - s) * z_row`, with `z_col` the zeros in
/// column `t1` of `Q` and `z_row` the zeros in row `s0` of `Q`. The copies of
/// column `t1` add no zeros to row `s0` since `Q[s0][t1] = 1`.
pub fn linear_zero_count(m: usize, n: usize, q: &BitMatrix) -> Result<usize> {
    check_fits(m, n, q)?;
    let (s, t) = q.dims();
    let (s0, t1) = duplication_anchor(q)?;
    let z_col = s - q.col_ones(t1);
    let z_row = t - q.row_ones(s0);
    Ok(q.zeros_count() + (n - t) * z_col + (m - s) * z_row)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoByTwo {
    /// `I_2`, extremal matrix `J_n - H_n`.
    I2,
    /// `H_2`, extremal matrix `J_n - I_n`.
    H2,
}

impl TwoByTwo {
    pub fn pattern(self) -> BitMatrix {
        match self {
            TwoByTwo::I2 => BitMatrix::identity(2),
            TwoByTwo::H2 => BitMatrix::hankel(2),
        }
        .expect("2x2")
    }
}

/// The unique `n x n` strongly forcing matrix with `n^2 - n` ones for a 2x2
/// permutation pattern.
pub fn extremal_2x2(n: usize, variant: TwoByTwo) -> Result<BitMatrix> {
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2 (n={n})")));
    }
    Ok(match variant {
        TwoByTwo::I2 => BitMatrix::hankel(n)?.complement(),
        TwoByTwo::H2 => BitMatrix::identity(n)?.complement(),
    })
}

fn one() -> BitMatrix {
    BitMatrix::ones(1, 1).expect("1x1")
}

/// `S_n = [1] ⊕ (J_{n-1} - H_{n-1})`, strongly `I_3`-forcing with
/// `n^2 - 3n + 3` ones.
pub fn construct_s(n: usize) -> Result<BitMatrix> {
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3 (n={n})")));
    }
    one().direct_sum(&BitMatrix::hankel(n - 1)?.complement())
}

/// `T_n = [1] ⊕ (J_{n-1} - I_{n-1})` with `n^2 - 3n + 3` ones.
///
/// The leading 1 can only sit at the top-left of an embedded copy, so `T_n` is
/// strongly forcing for the 132 pattern `[[1,0,0],[0,0,1],[0,1,0]]` (and not
/// for 213, whose top-left entry is 0).
pub fn construct_t(n: usize) -> Result<BitMatrix> {
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3 (n={n})")));
    }
    one().direct_sum(&BitMatrix::identity(n - 1)?.complement())
}

/// `S_{n,k} = I_{k-2} ⊕ (J_{n-k+2} - H_{n-k+2})`, strongly `I_k`-forcing with
/// `n^2 - (2k-3)n - (2k - k^2)` ones.
pub fn construct_s_nk(n: usize, k: usize) -> Result<BitMatrix> {
    if k < 3 || n < k {
        return Err(Error::Precondition(format!("need n >= k >= 3 (n={n}, k={k})")));
    }
    BitMatrix::identity(k - 2)?.direct_sum(&BitMatrix::hankel(n - k + 2)?.complement())
}

/// Block-diagonal combination of two witnesses.
pub fn block(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    a.direct_sum(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strong::is_strongly_forcing;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::parse(&rows.join("\n")).unwrap()
    }

    #[test]
    fn linear_zero_degenerate_cases() {
        let q = m(&["010", "101"]);
        assert_eq!(linear_zero_construction(2, 3, &q).unwrap(), q);
        assert_eq!(linear_zero_count(2, 3, &q).unwrap(), q.zeros_count());
        let j = linear_zero_construction(4, 7, &m(&["1"])).unwrap();
        assert_eq!(j, BitMatrix::ones(4, 7).unwrap());
        assert!(linear_zero_construction(1, 3, &q).is_err());
        assert!(linear_zero_construction(4, 4, &BitMatrix::zeros(2, 2).unwrap()).is_err());
    }

    #[test]
    fn linear_zero_identity() {
        let i2 = BitMatrix::identity(2).unwrap();
        let a = linear_zero_construction(10, 10, &i2).unwrap();
        // I_2 has two zeros; column 1 and row 1 of I_2 each hold one.
        assert_eq!(a.zeros_count(), 2 + 8 + 8);
        assert_eq!(linear_zero_count(10, 10, &i2).unwrap(), 18);
        assert!(is_strongly_forcing(&a, &i2).unwrap());
    }

    #[test]
    fn linear_zero_with_top_zero_rows() {
        let q = m(&["000", "001", "110"]);
        let a = linear_zero_construction(6, 7, &q).unwrap();
        assert_eq!(a.zeros_count(), linear_zero_count(6, 7, &q).unwrap());
        assert!(is_strongly_forcing(&a, &q).unwrap());
    }

    #[test]
    fn two_by_two() {
        let a = extremal_2x2(4, TwoByTwo::I2).unwrap();
        assert_eq!(a.ones_count(), 12);
        assert_eq!(extremal_2x2(2, TwoByTwo::I2).unwrap(), BitMatrix::identity(2).unwrap());
        let b = extremal_2x2(5, TwoByTwo::H2).unwrap();
        assert_eq!(b, BitMatrix::identity(5).unwrap().complement());
        assert!(is_strongly_forcing(&b, &TwoByTwo::H2.pattern()).unwrap());
        assert!(extremal_2x2(1, TwoByTwo::H2).is_err());
    }

    #[test]
    fn three_by_three_constructions() {
        assert_eq!(construct_s(5).unwrap(), m(&["10000", "01110", "01101", "01011", "00111"]));
        assert_eq!(construct_t(5).unwrap(), m(&["10000", "00111", "01011", "01101", "01110"]));
        let b3 = BitMatrix::permutation(&[0, 2, 1]).unwrap();
        let c3 = BitMatrix::permutation(&[1, 0, 2]).unwrap();
        let t5 = construct_t(5).unwrap();
        assert!(is_strongly_forcing(&t5, &b3).unwrap());
        assert!(!is_strongly_forcing(&t5, &c3).unwrap());
        assert!(construct_s(2).is_err());
    }

    #[test]
    fn s_nk() {
        let a = construct_s_nk(6, 4).unwrap();
        assert_eq!(a.ones_count(), 14);
        assert!(is_strongly_forcing(&a, &BitMatrix::identity(4).unwrap()).unwrap());
        assert_eq!(construct_s_nk(5, 3).unwrap(), construct_s(5).unwrap());
        assert!(construct_s_nk(3, 4).is_err());
        assert!(construct_s_nk(5, 2).is_err());
    }
}
