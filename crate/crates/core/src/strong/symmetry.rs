//! The dihedral group generated by transposition and row/column reversal.

use serde::Serialize;

use crate::bitmatrix::{BitMatrix, Position};

/// One of the eight symmetries: optional transpose, then optional row
/// reversal, then optional column reversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Symmetry {
    pub transpose: bool,
    pub flip_rows: bool,
    pub flip_cols: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry { transpose: false, flip_rows: false, flip_cols: false };

    pub const ALL: [Symmetry; 8] = {
        let mut out = [Symmetry::IDENTITY; 8];
        let mut i = 0;
        while i < 8 {
            out[i] = Symmetry { transpose: i & 4 != 0, flip_rows: i & 2 != 0, flip_cols: i & 1 != 0 };
            i += 1;
        }
        out
    };

    /// The four symmetries that keep the shape.
    pub fn reflections() -> impl Iterator<Item = Symmetry> {
        Self::ALL.into_iter().filter(|g| !g.transpose)
    }

    pub fn apply(self, a: &BitMatrix) -> BitMatrix {
        let mut out = if self.transpose { a.transpose() } else { a.clone() };
        if self.flip_rows {
            out = out.reflect_h();
        }
        if self.flip_cols {
            out = out.reflect_v();
        }
        out
    }

    pub fn inverse(self) -> Symmetry {
        if self.transpose {
            Symmetry { transpose: true, flip_rows: self.flip_cols, flip_cols: self.flip_rows }
        } else {
            self
        }
    }

    /// Image of `p` in a `rows x cols` matrix under `self`.
    pub fn map_position(self, p: Position, rows: usize, cols: usize) -> Position {
        let (mut r, mut c, mut h, mut w) = (p.row, p.col, rows, cols);
        if self.transpose {
            std::mem::swap(&mut r, &mut c);
            std::mem::swap(&mut h, &mut w);
        }
        if self.flip_rows {
            r = h - 1 - r;
        }
        if self.flip_cols {
            c = w - 1 - c;
        }
        Position { row: r, col: c }
    }
}

fn sorted_class(images: impl Iterator<Item = BitMatrix>) -> Vec<BitMatrix> {
    let mut v: Vec<(String, BitMatrix)> = images.map(|m| (m.serialize(), m)).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v.dedup_by(|a, b| a.0 == b.0);
    v.into_iter().map(|(_, m)| m).collect()
}

/// Distinct images of `q` under all eight symmetries, sorted by serialized
/// form. For non-square `q` this includes the transposed shapes, which is
/// what square-ambient problems such as `M(n, Q)` need.
pub fn dihedral_class(q: &BitMatrix) -> Vec<BitMatrix> {
    sorted_class(Symmetry::ALL.into_iter().map(|g| g.apply(q)))
}

/// Distinct images of `q` under the four shape-preserving reflections.
pub fn reflection_class(q: &BitMatrix) -> Vec<BitMatrix> {
    sorted_class(Symmetry::reflections().map(|g| g.apply(q)))
}

/// The member of [`dihedral_class`] with the least serialization.
pub fn canonical_form(q: &BitMatrix) -> BitMatrix {
    dihedral_class(q).swap_remove(0)
}
