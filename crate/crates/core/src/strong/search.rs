//! Exact branch-and-bound search for `M(n, Q)`.
//!
//! Target levels `T` (number of 1-entries) are tried from a necessary-condition
//! cap downward. Each level is a DFS over `n x n` boards that places exactly
//! `n^2 - T` zeros in row-major order, zero before one. Every row needs at
//! least `z_r` zeros, where `z_r` is the fewest zeros in a pattern row holding
//! a 1 (a 1-entry's row contains an exact copy of such a row); columns
//! likewise. Complete boards are checked for strong forcing on 64-bit boards.
//!
//! Boards are `u64` bitmasks with bit `r * n + c` set for a 1-entry, so the
//! exact search is limited to `n <= 8`.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constructions::{construct_s_nk, construct_t, extremal_2x2, linear_zero_construction, TwoByTwo};
use super::is_strongly_forcing;
use super::symmetry::Symmetry;
use crate::bitmatrix::{BitMatrix, Position};
use crate::error::{Error, Result};

/// Largest ambient size handled by the exact search.
pub const MAX_SEARCH_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Only check boards that are least in their orbit under the symmetries
    /// fixing `Q`.
    pub use_dihedral_reduction: bool,
    /// Collect the whole extremal level set instead of stopping at the first
    /// witness.
    pub enumerate_all_extremal: bool,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: None,
            time_budget: None,
            use_dihedral_reduction: true,
            enumerate_all_extremal: false,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// `best_ones = M(n, Q)`.
    Exact,
    /// `n` exceeds [`MAX_SEARCH_N`]; `best_ones` comes from constructions.
    LowerBoundOnly,
    /// A budget ran out; `best_ones` is the best verified lower bound.
    BudgetExhausted,
}

/// Result of [`search_max`]. Every witness is strongly Q-forcing with
/// `best_ones` ones; witnesses are sorted by serialized form.
///
/// `status`, `best_ones` and `witnesses` do not depend on the thread count.
/// `nodes_explored` can vary slightly when parallel tasks are cancelled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "OutcomeRecord", from = "OutcomeRecord")]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub best_ones: u64,
    pub witnesses: Vec<BitMatrix>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

#[derive(Serialize, Deserialize)]
struct OutcomeRecord {
    status: SearchStatus,
    best_ones: u64,
    witnesses: Vec<BitMatrix>,
    nodes_explored: u64,
    elapsed_ms: u64,
}

impl From<SearchOutcome> for OutcomeRecord {
    fn from(o: SearchOutcome) -> Self {
        OutcomeRecord {
            status: o.status,
            best_ones: o.best_ones,
            witnesses: o.witnesses,
            nodes_explored: o.nodes_explored,
            elapsed_ms: o.elapsed.as_millis() as u64,
        }
    }
}

impl From<OutcomeRecord> for SearchOutcome {
    fn from(r: OutcomeRecord) -> Self {
        SearchOutcome {
            status: r.status,
            best_ones: r.best_ones,
            witnesses: r.witnesses,
            nodes_explored: r.nodes_explored,
            elapsed: Duration::from_millis(r.elapsed_ms),
        }
    }
}

/// Fewest zeros among pattern rows (resp. columns) that contain a 1.
fn zero_requirements(q: &BitMatrix) -> (usize, usize) {
    let (s, t) = q.dims();
    let z_r = (0..s).filter(|&r| q.row_ones(r) > 0).map(|r| t - q.row_ones(r)).min().unwrap_or(0);
    let z_c = (0..t).filter(|&c| q.col_ones(c) > 0).map(|c| s - q.col_ones(c)).min().unwrap_or(0);
    (z_r, z_c)
}

/// Upper bound on `M(n, Q)` from the per-row and per-column zero requirement.
pub fn level_cap(n: usize, q: &BitMatrix) -> u64 {
    let (z_r, z_c) = zero_requirements(q);
    let n = n as u64;
    n * n - (z_r.max(z_c) as u64) * n
}

/// Known strongly Q-forcing `n x n` matrices: the linear-zero construction
/// and symmetry images of `J_n - H_n`, `S_{n,k}` and `T_n`. Returns the ones
/// count and the distinct seeds attaining it, sorted.
pub fn seed_witnesses(n: usize, q: &BitMatrix) -> Result<(u64, Vec<BitMatrix>)> {
    let mut candidates = vec![linear_zero_construction(n, n, q)?];
    if q.is_permutation() {
        let k = q.rows();
        let mut bases = Vec::new();
        if k == 2 {
            bases.push(extremal_2x2(n, TwoByTwo::I2)?);
        }
        if k >= 3 {
            bases.push(construct_s_nk(n, k)?);
        }
        if k == 3 {
            bases.push(construct_t(n)?);
        }
        for base in &bases {
            candidates.extend(Symmetry::ALL.iter().map(|g| g.apply(base)));
        }
    }
    let mut best = 0u64;
    let mut seeds: Vec<BitMatrix> = Vec::new();
    for cand in candidates {
        let ones = cand.ones_count() as u64;
        if ones < best || !is_strongly_forcing(&cand, q)? {
            continue;
        }
        if ones > best {
            best = ones;
            seeds.clear();
        }
        seeds.push(cand);
    }
    seeds.sort_by_key(|m| m.serialize());
    seeds.dedup();
    Ok((best, seeds))
}

/// Maximum number of 1-entries in an `n x n` strongly Q-forcing matrix.
pub fn search_max(n: usize, q: &BitMatrix, config: &SearchConfig) -> Result<SearchOutcome> {
    let start = Instant::now();
    if config.node_budget == Some(0) || config.time_budget == Some(Duration::ZERO) {
        return Err(Error::Precondition("budgets must be positive".into()));
    }
    if q.is_all_zero() {
        return Err(Error::AllZeroPattern);
    }
    let (lower, seeds) = seed_witnesses(n, q)?;
    if n > MAX_SEARCH_N {
        return Ok(SearchOutcome {
            status: SearchStatus::LowerBoundOnly,
            best_ones: lower,
            witnesses: seeds,
            nodes_explored: 0,
            elapsed: start.elapsed(),
        });
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let shared = Shared {
        nodes: AtomicU64::new(0),
        abort: AtomicBool::new(false),
        found_min: AtomicUsize::new(usize::MAX),
        node_budget: config.node_budget,
        deadline: config.time_budget.map(|d| start + d),
    };
    let (z_r, z_c) = zero_requirements(q);
    let searcher = Searcher {
        n,
        cells: n * n,
        z_row: z_r as u8,
        z_col: z_c as u8,
        checker: Checker::new(n, q),
        symmetries: if config.use_dihedral_reduction { stabilizer_tables(n, q) } else { Vec::new() },
        enumerate: config.enumerate_all_extremal,
        shared: &shared,
    };

    let cap = level_cap(n, q);
    debug_assert!(cap >= lower);
    let mut outcome = SearchOutcome {
        status: SearchStatus::Exact,
        best_ones: lower,
        witnesses: seeds.clone(),
        nodes_explored: 0,
        elapsed: Duration::ZERO,
    };
    for target in (lower..=cap).rev() {
        if target == lower && !config.enumerate_all_extremal {
            break;
        }
        let level = pool.install(|| searcher.run_level(searcher.cells - target as usize));
        if !level.boards.is_empty() {
            outcome.best_ones = target;
            outcome.witnesses = searcher.finish(level.boards);
        }
        if level.aborted {
            outcome.status = SearchStatus::BudgetExhausted;
            break;
        }
        if outcome.best_ones == target {
            break;
        }
    }
    debug_assert!(outcome.status != SearchStatus::Exact || outcome.best_ones >= lower);
    debug_assert!(outcome
        .witnesses
        .iter()
        .all(|w| w.ones_count() as u64 == outcome.best_ones && is_strongly_forcing(w, q).unwrap()));
    outcome.nodes_explored = shared.nodes.load(Ordering::Relaxed);
    outcome.elapsed = start.elapsed();
    Ok(outcome)
}

/// Strong-forcing test on `n x n` boards (`n <= 8`).
///
/// For each choice of `s` rows, a column is usable if its restriction equals
/// some pattern column `j` and the pattern columns before and after `j` can
/// be matched to its left and right. The 1-entries in usable columns of the
/// chosen rows are exactly the ones covered by some copy of `Q` on those rows.
struct Checker {
    n: usize,
    t: usize,
    row_mask: u64,
    col_sigs: Vec<u32>,
    row_sets: Vec<Vec<usize>>,
}

impl Checker {
    fn new(n: usize, q: &BitMatrix) -> Self {
        let (s, t) = q.dims();
        let col_sigs = (0..t)
            .map(|c| (0..s).filter(|&r| q.get(r, c)).fold(0u32, |acc, r| acc | 1 << r))
            .collect();
        Checker {
            n,
            t,
            row_mask: (1u64 << n) - 1,
            col_sigs,
            row_sets: (0..n).combinations(s).collect(),
        }
    }

    fn row(&self, board: u64, r: usize) -> u64 {
        (board >> (r * self.n)) & self.row_mask
    }

    fn check(&self, board: u64) -> bool {
        if board == 0 {
            return true;
        }
        let (n, t) = (self.n, self.t);
        let mut covered = 0u64;
        let mut sig = [0u32; MAX_SEARCH_N];
        let mut left = [0usize; MAX_SEARCH_N];
        let mut right = [0usize; MAX_SEARCH_N];
        for rows in &self.row_sets {
            sig[..n].fill(0);
            for (i, &r) in rows.iter().enumerate() {
                let bits = self.row(board, r);
                for (c, v) in sig[..n].iter_mut().enumerate() {
                    *v |= ((bits >> c & 1) as u32) << i;
                }
            }
            let mut j = 0;
            for (c, &sc) in sig[..n].iter().enumerate() {
                if j < t && sc == self.col_sigs[j] {
                    left[j] = c;
                    j += 1;
                }
            }
            if j < t {
                continue;
            }
            let mut j = t;
            for c in (0..n).rev() {
                if j > 0 && sig[c] == self.col_sigs[j - 1] {
                    right[j - 1] = c;
                    j -= 1;
                }
            }
            let mut usable = 0u64;
            for (c, &sc) in sig[..n].iter().enumerate() {
                let ok = (0..t).any(|j| {
                    sc == self.col_sigs[j]
                        && (j == 0 || left[j - 1] < c)
                        && (j + 1 == t || right[j + 1] > c)
                });
                if ok {
                    usable |= 1 << c;
                }
            }
            for &r in rows {
                covered |= (self.row(board, r) & usable) << (r * n);
            }
            if covered == board {
                return true;
            }
        }
        false
    }
}

/// Cell permutation tables for the non-identity symmetries fixing `q`.
fn stabilizer_tables(n: usize, q: &BitMatrix) -> Vec<Vec<u8>> {
    Symmetry::ALL
        .iter()
        .filter(|&&g| g != Symmetry::IDENTITY && g.apply(q) == *q)
        .map(|&g| {
            (0..n * n)
                .map(|i| {
                    let p = g.map_position(Position { row: i / n, col: i % n }, n, n);
                    (p.row * n + p.col) as u8
                })
                .collect()
        })
        .collect()
}

fn permute_board(board: u64, table: &[u8]) -> u64 {
    let mut out = 0u64;
    let mut b = board;
    while b != 0 {
        let i = b.trailing_zeros() as usize;
        out |= 1 << table[i];
        b &= b - 1;
    }
    out
}

struct Shared {
    nodes: AtomicU64,
    abort: AtomicBool,
    /// Lowest task index that produced a witness, in existence mode.
    found_min: AtomicUsize,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
}

#[derive(Clone)]
struct State {
    pos: usize,
    zeros_left: usize,
    board: u64,
    row_zeros: [u8; MAX_SEARCH_N],
    col_zeros: [u8; MAX_SEARCH_N],
}

struct Local {
    task: usize,
    pending: u64,
    boards: Vec<u64>,
    stopped: bool,
}

const FLUSH_EVERY: u64 = 4096;

impl Local {
    fn new(task: usize) -> Self {
        Local { task, pending: 0, boards: Vec::new(), stopped: false }
    }
}

struct LevelResult {
    boards: Vec<u64>,
    aborted: bool,
}

struct Searcher<'a> {
    n: usize,
    cells: usize,
    z_row: u8,
    z_col: u8,
    checker: Checker,
    symmetries: Vec<Vec<u8>>,
    enumerate: bool,
    shared: &'a Shared,
}

impl Searcher<'_> {
    fn run_level(&self, zeros: usize) -> LevelResult {
        self.shared.found_min.store(usize::MAX, Ordering::Relaxed);
        let root = State {
            pos: 0,
            zeros_left: zeros,
            board: 0,
            row_zeros: [0; MAX_SEARCH_N],
            col_zeros: [0; MAX_SEARCH_N],
        };
        let split_rows = if self.n >= 5 { 2 } else { 1 };
        let mut frontier = Vec::new();
        let mut local = Local::new(0);
        self.expand(&mut root.clone(), split_rows * self.n, &mut frontier, &mut local);
        self.flush(&mut local);

        let results: Vec<Local> = frontier
            .into_par_iter()
            .enumerate()
            .map(|(task, mut st)| {
                let mut local = Local::new(task);
                self.dfs(&mut st, &mut local);
                self.flush(&mut local);
                local
            })
            .collect();
        let aborted = self.shared.abort.load(Ordering::Relaxed);
        let boards = if self.enumerate {
            results.into_iter().flat_map(|l| l.boards).collect()
        } else {
            results.into_iter().find(|l| !l.boards.is_empty()).map(|l| l.boards).unwrap_or_default()
        };
        LevelResult { boards, aborted }
    }

    /// Converts found boards into sorted witnesses, expanding symmetry orbits
    /// in enumeration mode.
    fn finish(&self, boards: Vec<u64>) -> Vec<BitMatrix> {
        let mut all = boards.clone();
        if self.enumerate {
            for &b in &boards {
                all.extend(self.symmetries.iter().map(|t| permute_board(b, t)));
            }
        }
        let n = self.n;
        let mut out: Vec<BitMatrix> = all
            .into_iter()
            .map(|b| BitMatrix::from_fn(n, n, |r, c| b >> (r * n + c) & 1 == 1).expect("n >= 1"))
            .collect();
        out.sort_by_key(|m| m.serialize());
        out.dedup();
        out
    }

    fn flush(&self, local: &mut Local) {
        let total = self.shared.nodes.fetch_add(local.pending, Ordering::Relaxed) + local.pending;
        local.pending = 0;
        let over_nodes = self.shared.node_budget.is_some_and(|b| total > b);
        let over_time = self.shared.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.shared.abort.store(true, Ordering::Relaxed);
        }
    }

    /// Counts a node; returns true when the search must stop.
    fn tick(&self, local: &mut Local) -> bool {
        local.pending += 1;
        if local.pending >= FLUSH_EVERY {
            self.flush(local);
        }
        if self.shared.abort.load(Ordering::Relaxed) {
            return true;
        }
        !self.enumerate && local.task > self.shared.found_min.load(Ordering::Relaxed)
    }

    /// Places `value` at the current cell if the necessary conditions still
    /// hold afterwards.
    fn place(&self, st: &mut State, zero: bool) -> bool {
        let n = self.n;
        let (r, c) = (st.pos / n, st.pos % n);
        if zero {
            st.row_zeros[r] += 1;
            st.col_zeros[c] += 1;
            st.zeros_left -= 1;
        } else {
            st.board |= 1 << st.pos;
        }
        st.pos += 1;
        let ok = self.feasible(st, r, c);
        if !ok {
            self.unplace(st, zero);
        }
        ok
    }

    fn unplace(&self, st: &mut State, zero: bool) {
        st.pos -= 1;
        let (r, c) = (st.pos / self.n, st.pos % self.n);
        if zero {
            st.row_zeros[r] -= 1;
            st.col_zeros[c] -= 1;
            st.zeros_left += 1;
        } else {
            st.board &= !(1 << st.pos);
        }
    }

    fn feasible(&self, st: &State, r: usize, c: usize) -> bool {
        let n = self.n;
        if st.zeros_left > self.cells - st.pos {
            return false;
        }
        let row_left = (n - 1 - c) as u8;
        if st.row_zeros[r] + row_left < self.z_row || st.col_zeros[c] + ((n - 1 - r) as u8) < self.z_col {
            return false;
        }
        let row_deficit = self.z_row.saturating_sub(st.row_zeros[r]) as usize
            * usize::from(row_left > 0)
            + (n - 1 - r) * self.z_row as usize;
        if row_deficit > st.zeros_left {
            return false;
        }
        let col_deficit: usize = st.col_zeros[..n]
            .iter()
            .map(|&z| self.z_col.saturating_sub(z) as usize)
            .sum();
        col_deficit <= st.zeros_left
    }

    /// Collects the states reached after `depth` cells, in DFS order.
    fn expand(&self, st: &mut State, depth: usize, out: &mut Vec<State>, local: &mut Local) {
        local.pending += 1;
        if st.pos == depth || st.pos == self.cells {
            out.push(st.clone());
            return;
        }
        for zero in [true, false] {
            if (zero && st.zeros_left == 0) || (!zero && st.zeros_left == self.cells - st.pos) {
                continue;
            }
            if self.place(st, zero) {
                self.expand(st, depth, out, local);
                self.unplace(st, zero);
            }
        }
    }

    /// Returns true when the search should unwind.
    fn dfs(&self, st: &mut State, local: &mut Local) -> bool {
        if local.stopped || self.tick(local) {
            local.stopped = true;
            return true;
        }
        if st.pos == self.cells {
            return self.leaf(st.board, local);
        }
        for zero in [true, false] {
            if (zero && st.zeros_left == 0) || (!zero && st.zeros_left == self.cells - st.pos) {
                continue;
            }
            if self.place(st, zero) {
                let stop = self.dfs(st, local);
                self.unplace(st, zero);
                if stop {
                    return true;
                }
            }
        }
        false
    }

    fn leaf(&self, board: u64, local: &mut Local) -> bool {
        if self.symmetries.iter().any(|t| permute_board(board, t) < board) {
            return false;
        }
        if !self.checker.check(board) {
            return false;
        }
        local.boards.push(board);
        if self.enumerate {
            return false;
        }
        self.shared.found_min.fetch_min(local.task, Ordering::Relaxed);
        local.stopped = true;
        true
    }
}
