//! Forcing and strongly forcing (0,1)-matrices.
//!
//! An `m x n` matrix `A` is *Q-forcing* when every `s x t` submatrix of `A`
//! dominates the pattern `Q`, and *strongly Q-forcing* when each 1-entry of
//! `A` sits inside a submatrix exactly equal to `Q`. [`forcing`] computes the
//! least number of ones a Q-forcing matrix can have; [`strong`] handles the
//! greatest number a strongly Q-forcing matrix can have.

pub mod bitmatrix;
pub mod cache;
pub mod error;
pub mod forcing;
pub mod oracle;
pub mod patterns;
pub mod strong;
pub mod verify;

pub use bitmatrix::{BitMatrix, Fill, Position, MAX_DIM};
pub use error::{Error, Result};
pub use forcing::{
    construct_a_mnq, core, corner_functions, is_forcing, min_ones, minimal_forcing, CoreDecomposition,
    CornerReport, CountFormula, MinOnes,
};
pub use strong::bounds::{conjecture_value, recurrence_lower_bound, upper_bound_3x3, upper_bound_simple};
pub use strong::constructions::{
    construct_s, construct_s_nk, construct_t, extremal_2x2, linear_zero_construction, TwoByTwo,
};
pub use strong::search::{search_max, SearchConfig, SearchOutcome, SearchStatus};
pub use strong::symmetry::{canonical_form, dihedral_class, Symmetry};
pub use strong::{find_witness, is_strongly_forcing, WitnessEmbedding};
