//! Named built-in patterns.
//!
//! | name | matrix |
//! |------|--------|
//! | `i<k>` | identity `I_k` (permutation 12..k) |
//! | `h<k>` | anti-identity `H_k` (permutation k..21) |
//! | `j<k>` | all-ones `J_k` |
//! | `b3`, `c3`, `d3`, `e3` | permutations 132, 213, 231, 312 |
//! | `p<digits>` | permutation in one-line notation, e.g. `p2413` |
//!
//! A permutation `w` places its 1-entries at `(i, w(i))`.

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};

fn one_line(digits: &str) -> Option<BitMatrix> {
    let perm: Vec<usize> = digits
        .chars()
        .map(|ch| ch.to_digit(10).map(|d| d as usize))
        .collect::<Option<Vec<_>>>()?;
    let k = perm.len();
    if k == 0 || perm.iter().any(|&d| d == 0 || d > k) {
        return None;
    }
    BitMatrix::permutation(&perm.iter().map(|d| d - 1).collect::<Vec<_>>()).ok()
}

/// Resolves a built-in pattern name (case-insensitive).
pub fn builtin(name: &str) -> Option<BitMatrix> {
    let name = name.to_ascii_lowercase();
    let named = match name.as_str() {
        "b3" => Some("132"),
        "c3" => Some("213"),
        "d3" => Some("231"),
        "e3" => Some("312"),
        _ => None,
    };
    if let Some(d) = named {
        return one_line(d);
    }
    let (head, rest) = name.split_at(name.chars().next()?.len_utf8());
    if head == "p" {
        return one_line(rest);
    }
    let k: usize = rest.parse().ok().filter(|&k| (1..=64).contains(&k))?;
    match head {
        "i" => BitMatrix::identity(k).ok(),
        "h" => BitMatrix::hankel(k).ok(),
        "j" => BitMatrix::ones(k, k).ok(),
        _ => None,
    }
}

/// [`builtin`], with an error naming the unknown pattern.
pub fn resolve_builtin(name: &str) -> Result<BitMatrix> {
    builtin(name).ok_or_else(|| Error::Precondition(format!("unknown built-in pattern '{name}'")))
}

/// The six 3x3 permutation patterns in the order 123, 132, 213, 231, 312, 321.
pub fn three_by_three() -> Vec<(&'static str, BitMatrix)> {
    ["i3", "b3", "c3", "d3", "e3", "h3"]
        .into_iter()
        .map(|n| (n, builtin(n).expect("built-in")))
        .collect()
}
