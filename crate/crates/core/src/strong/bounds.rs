//! Closed-form bounds on `M(n, Q)` and the block-diagonal recurrence.

use serde::Serialize;

use crate::error::{Error, Result};

/// `n^2 - (k-1)n`, an upper bound on `M(n, P)` for every `k x k` permutation
/// matrix `P`.
pub fn upper_bound_simple(n: usize, k: usize) -> Result<u64> {
    if k < 1 || n < k {
        return Err(Error::Precondition(format!("need n >= k >= 1 (n={n}, k={k})")));
    }
    let (n, k) = (n as u64, k as u64);
    Ok(n * n - (k - 1) * n)
}

/// `n^2 - 3n + 3`, the exact value of `M(n, P)` for each 3x3 permutation `P`.
pub fn upper_bound_3x3(n: usize) -> Result<u64> {
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3 (n={n})")));
    }
    let n = n as u64;
    Ok(n * n - 3 * n + 3)
}

/// `n^2 - (2k-3)n - (2k - k^2)`, the conjectured value of `M(n, I_k)`.
///
/// Accepted for `k >= 2`; at `k = 2` it reduces to `n^2 - n`.
pub fn conjecture_value(n: usize, k: usize) -> Result<u64> {
    if k < 2 || n < k {
        return Err(Error::Precondition(format!("need n >= k >= 2 (n={n}, k={k})")));
    }
    let (n, k) = (n as i128, k as i128);
    let v = n * n - (2 * k - 3) * n - (2 * k - k * k);
    Ok(u64::try_from(v).expect("non-negative for n >= k >= 2"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Split {
    pub n1: usize,
    pub k1: usize,
    pub n2: usize,
    pub k2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecurrenceBound {
    pub value: u64,
    /// The first split (in `k1`, then `n1` order) attaining `value`.
    pub split: Split,
}

/// Block-diagonal lower bound for `M(n, I_k)`:
/// `max M(n1, I_k1) + M(n2, I_k2)` over `n1 + n2 = n`, `k1 + k2 = k`,
/// `1 <= ki <= ni`, with values drawn from `table`.
///
/// Returns `Ok(None)` when no split exists (`k = 1`).
pub fn recurrence_lower_bound(
    n: usize,
    k: usize,
    table: impl Fn(usize, usize) -> Option<u64>,
) -> Result<Option<RecurrenceBound>> {
    if k < 1 || n < k {
        return Err(Error::Precondition(format!("need n >= k >= 1 (n={n}, k={k})")));
    }
    let mut best: Option<RecurrenceBound> = None;
    for k1 in 1..k {
        let k2 = k - k1;
        for n1 in k1..=n - k2 {
            let n2 = n - n1;
            let v1 = table(n1, k1).ok_or(Error::MissingTableEntry { n: n1, k: k1 })?;
            let v2 = table(n2, k2).ok_or(Error::MissingTableEntry { n: n2, k: k2 })?;
            let value = v1 + v2;
            if best.is_none_or(|b| value > b.value) {
                best = Some(RecurrenceBound { value, split: Split { n1, k1, n2, k2 } });
            }
        }
    }
    Ok(best)
}

/// Known lower bounds on `M(n, I_k)`: exact for `k <= 2`, the `S_{n,k}`
/// construction for `k >= 3`. Suitable as a `table` for
/// [`recurrence_lower_bound`].
pub fn known_identity_lower_bound(n: usize, k: usize) -> Option<u64> {
    if k == 0 || n < k {
        return None;
    }
    let n64 = n as u64;
    match k {
        1 => Some(n64 * n64),
        _ => conjecture_value(n, k).ok(),
    }
}
