//! Brute-force reference implementations.
//!
//! These enumerate every row/column subset or every matrix and apply the
//! definitions literally. They exist to check the fast paths and are capped
//! so a test can never run away.

use itertools::Itertools;

use crate::bitmatrix::{BitMatrix, Position};
use crate::error::{Error, Result};
use crate::forcing::check_fits;

/// Default limit on the number of placements or matrices enumerated.
pub const DEFAULT_CAP: u128 = 10_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn placements(m: usize, n: usize, q: &BitMatrix, cap: u128) -> Result<()> {
    check_fits(m, n, q)?;
    let needed = binomial(m, q.rows()) * binomial(n, q.cols());
    if needed > cap {
        return Err(Error::EnumerationCap { needed, cap });
    }
    Ok(())
}

/// Union over all `C(m,s) * C(n,t)` placements of the 1-entries of `q`.
pub fn oracle_minimal_forcing(m: usize, n: usize, q: &BitMatrix) -> Result<BitMatrix> {
    oracle_minimal_forcing_capped(m, n, q, DEFAULT_CAP)
}

pub fn oracle_minimal_forcing_capped(m: usize, n: usize, q: &BitMatrix, cap: u128) -> Result<BitMatrix> {
    placements(m, n, q, cap)?;
    let mut a = BitMatrix::zeros(m, n)?;
    for rows in (0..m).combinations(q.rows()) {
        for cols in (0..n).combinations(q.cols()) {
            for p in q.one_positions() {
                a.set(rows[p.row], cols[p.col], true);
            }
        }
    }
    Ok(a)
}

/// Every `s x t` submatrix of `a` dominates `q` entrywise.
pub fn oracle_is_forcing(a: &BitMatrix, q: &BitMatrix) -> Result<bool> {
    placements(a.rows(), a.cols(), q, DEFAULT_CAP)?;
    for rows in (0..a.rows()).combinations(q.rows()) {
        for cols in (0..a.cols()).combinations(q.cols()) {
            if !q.entrywise_leq(&a.submatrix(&rows, &cols)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every 1-entry of `a` lies in a submatrix exactly equal to `q`.
pub fn oracle_is_strongly_forcing(a: &BitMatrix, q: &BitMatrix) -> Result<bool> {
    oracle_is_strongly_forcing_capped(a, q, DEFAULT_CAP)
}

pub fn oracle_is_strongly_forcing_capped(a: &BitMatrix, q: &BitMatrix, cap: u128) -> Result<bool> {
    placements(a.rows(), a.cols(), q, cap)?;
    let mut covered = BitMatrix::zeros(a.rows(), a.cols())?;
    for rows in (0..a.rows()).combinations(q.rows()) {
        for cols in (0..a.cols()).combinations(q.cols()) {
            if a.submatrix(&rows, &cols)? == *q {
                for p in q.one_positions() {
                    covered.set(rows[p.row], cols[p.col], true);
                }
            }
        }
    }
    Ok(a.one_positions().all(|p: Position| covered.at(p)))
}

/// Exact `M(n, Q)` and the full extremal level set, by checking all
/// `2^(n^2)` matrices. Limited to `n <= 4`, or `n = 5` with `allow_long`.
pub fn oracle_max_strong(n: usize, q: &BitMatrix, allow_long: bool) -> Result<(u64, Vec<BitMatrix>)> {
    let limit = if allow_long { 5 } else { 4 };
    if n > limit {
        return Err(Error::EnumerationCap { needed: 1u128 << (n * n).min(127), cap: 1u128 << (limit * limit) });
    }
    check_fits(n, n, q)?;
    let cells = n * n;
    let mut best = 0u64;
    let mut level: Vec<BitMatrix> = Vec::new();
    for bits in 0u64..1 << cells {
        let ones = u64::from(bits.count_ones());
        if ones < best {
            continue;
        }
        let a = BitMatrix::from_fn(n, n, |r, c| bits >> (r * n + c) & 1 == 1)?;
        if !oracle_is_strongly_forcing_capped(&a, q, u128::MAX)? {
            continue;
        }
        if ones > best {
            best = ones;
            level.clear();
        }
        level.push(a);
    }
    level.sort_by_key(|m| m.serialize());
    Ok((best, level))
}
