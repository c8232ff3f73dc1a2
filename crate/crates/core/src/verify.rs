//! Verification suites behind `mforce verify`.
//!
//! Each suite returns one [`VerifyRow`] per checked instance. Rows with
//! status [`RowStatus::Info`] carry evidence without a verdict.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use serde::Serialize;

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};
use crate::forcing::{banded_count, core_count, corner_count, minimal_forcing, perm_max_extremal, perm_max_m,
    perm_min_bound, perm_min_equality};
use crate::oracle::{oracle_is_strongly_forcing, oracle_max_strong, oracle_minimal_forcing};
use crate::patterns::three_by_three;
use crate::strong::bounds::{conjecture_value, known_identity_lower_bound, recurrence_lower_bound,
    upper_bound_3x3, upper_bound_simple};
use crate::strong::constructions::{construct_s, construct_s_nk, construct_t, extremal_2x2, TwoByTwo};
use crate::strong::is_strongly_forcing;
use crate::strong::search::{search_max, SearchConfig, SearchStatus};
use crate::strong::symmetry::{dihedral_class, Symmetry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::Info => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub theorem_id: String,
    pub instance: String,
    pub expected: String,
    pub actual: String,
    pub status: RowStatus,
    pub millis: u64,
}

impl VerifyRow {
    pub const CSV_HEADER: &'static str = "theorem_id,instance,expected,actual,status,millis";

    pub fn to_csv(&self) -> String {
        [&self.theorem_id, &self.instance, &self.expected, &self.actual]
            .iter()
            .map(|f| csv_field(f))
            .chain([self.status.to_string(), self.millis.to_string()])
            .join(",")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma21,
    Formulas,
    PermBounds,
    TwoByTwo,
    ThreeByThree,
    Dihedral,
    Conjecture,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lemma21,
        Suite::Formulas,
        Suite::PermBounds,
        Suite::TwoByTwo,
        Suite::ThreeByThree,
        Suite::Dihedral,
        Suite::Conjecture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma21 => "lemma21",
            Suite::Formulas => "formulas",
            Suite::PermBounds => "perm-bounds",
            Suite::TwoByTwo => "2x2",
            Suite::ThreeByThree => "3x3",
            Suite::Dihedral => "dihedral",
            Suite::Conjecture => "conjecture",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n_max: usize,
    pub k_max: usize,
    /// Node budget for each search in the conjecture suite.
    pub node_budget: u64,
    pub threads: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { n_max: 5, k_max: 4, node_budget: 50_000_000, threads: None }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    match suite {
        Suite::Lemma21 => window_vs_subsets(opts),
        Suite::Formulas => count_formulas(opts),
        Suite::PermBounds => perm_bounds(opts),
        Suite::TwoByTwo => two_by_two(opts),
        Suite::ThreeByThree => three_by_three_suite(opts),
        Suite::Dihedral => dihedral(opts),
        Suite::Conjecture => conjecture(opts),
    }
}

struct Recorder {
    rows: Vec<VerifyRow>,
    clock: Instant,
}

impl Recorder {
    fn new() -> Self {
        Recorder { rows: Vec::new(), clock: Instant::now() }
    }

    fn push(&mut self, id: &str, instance: String, expected: impl ToString, actual: impl ToString, status: RowStatus) {
        let millis = self.clock.elapsed().as_millis() as u64;
        self.rows.push(VerifyRow {
            theorem_id: id.into(),
            instance,
            expected: expected.to_string(),
            actual: actual.to_string(),
            status,
            millis,
        });
        self.clock = Instant::now();
    }

    fn check(&mut self, id: &str, instance: String, expected: impl ToString, actual: impl ToString) {
        let (e, a) = (expected.to_string(), actual.to_string());
        let status = if e == a { RowStatus::Pass } else { RowStatus::Fail };
        self.push(id, instance, e, a, status);
    }
}

/// Every non-zero pattern with at most `max` rows and columns.
pub fn small_patterns(max: usize) -> Vec<BitMatrix> {
    let mut out = Vec::new();
    for s in 1..=max {
        for t in 1..=max {
            for bits in 1u32..1 << (s * t) {
                out.push(BitMatrix::from_fn(s, t, |r, c| bits >> (r * t + c) & 1 == 1).expect("small"));
            }
        }
    }
    out
}

fn window_vs_subsets(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let patterns = small_patterns(3);
    let mut rec = Recorder::new();
    for (m, n) in (4..=opts.n_max).cartesian_product(4..=opts.n_max) {
        let mut agree = 0;
        for q in &patterns {
            if minimal_forcing(m, n, q)? == oracle_minimal_forcing(m, n, q)? {
                agree += 1;
            }
        }
        rec.check("window-equals-subsets", format!("m={m} n={n}"), patterns.len(), agree);
    }
    Ok(rec.rows)
}

fn count_formulas(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let patterns = small_patterns(3);
    let mut rec = Recorder::new();
    for (m, n) in (4..=opts.n_max).cartesian_product(4..=opts.n_max) {
        let (mut applied, mut agree) = (0, 0);
        for q in patterns.iter().filter(|q| m >= 2 * q.rows() && n >= 2 * q.cols()) {
            let truth = minimal_forcing(m, n, q)?.ones_count() as u64;
            for v in [banded_count(m, n, q), corner_count(m, n, q), core_count(m, n, q)].into_iter().flatten() {
                applied += 1;
                agree += usize::from(v == truth);
            }
        }
        rec.check("count-formulas", format!("m={m} n={n}"), applied, agree);
    }
    Ok(rec.rows)
}

fn perms(k: usize) -> Vec<BitMatrix> {
    (0..k)
        .permutations(k)
        .map(|p| BitMatrix::permutation(&p).expect("permutation"))
        .collect()
}

fn one_line(p: &BitMatrix) -> String {
    p.as_permutation().expect("permutation").iter().map(|c| (c + 1).to_string()).join("")
}

fn perm_bounds(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let mut rec = Recorder::new();
    for k in 2..=opts.k_max.clamp(2, 4) {
        let n = 2 * k;
        let bound = perm_min_bound(n, k)?;
        let mut attaining = Vec::new();
        let mut below = 0;
        for p in perms(k) {
            let ones = minimal_forcing(n, n, &p)?.ones_count() as u64;
            below += usize::from(ones < bound);
            if ones == bound {
                attaining.push(one_line(&p));
            }
            if (ones == bound) != perm_min_equality(&p)? {
                below += 1;
            }
        }
        rec.check("perm-min-bound", format!("k={k} n={n} violations"), 0, below);
        let expected = [one_line(&BitMatrix::identity(k)?), one_line(&BitMatrix::hankel(k)?)].join(" ");
        rec.check("perm-min-equality", format!("k={k} n={n}"), expected, attaining.join(" "));
    }
    for k in 1..=opts.k_max.max(1) {
        let n = 2 * k + 2;
        let values: Vec<(BitMatrix, u64)> = perms(k)
            .into_iter()
            .map(|p| minimal_forcing(n, n, &p).map(|a| (p, a.ones_count() as u64)))
            .collect::<Result<_>>()?;
        let max = values.iter().map(|v| v.1).max().expect("k >= 1");
        rec.check("perm-max", format!("k={k} n={n}"), perm_max_m(n, k)?, max);
        let by_search: Vec<String> = values.iter().filter(|v| v.1 == max).map(|v| one_line(&v.0)).collect();
        let by_rule: Vec<String> = values
            .iter()
            .filter(|v| perm_max_extremal(&v.0).unwrap_or(false))
            .map(|v| one_line(&v.0))
            .collect();
        rec.check("perm-max-extremal", format!("k={k} n={n}"), by_rule.join(" "), by_search.join(" "));
    }
    Ok(rec.rows)
}

fn exact_config(opts: &VerifyOptions, enumerate: bool) -> SearchConfig {
    SearchConfig { enumerate_all_extremal: enumerate, threads: opts.threads, ..SearchConfig::default() }
}

fn describe(status: SearchStatus, best: u64) -> String {
    match status {
        SearchStatus::Exact => best.to_string(),
        _ => format!("{best} ({status:?})"),
    }
}

fn two_by_two(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let mut rec = Recorder::new();
    for variant in [TwoByTwo::I2, TwoByTwo::H2] {
        let q = variant.pattern();
        for n in 2..=opts.n_max.max(2) {
            let expected = extremal_2x2(n, variant)?;
            let tag = format!("{variant:?}").to_lowercase();
            let out = search_max(n, &q, &exact_config(opts, true))?;
            rec.check("two-by-two-max", format!("{tag} n={n} search"), n * n - n, describe(out.status, out.best_ones));
            let unique = out.witnesses == [expected.clone()];
            rec.check("two-by-two-unique", format!("{tag} n={n} search"), true, unique);
            if n <= 4 {
                let (best, level) = oracle_max_strong(n, &q, false)?;
                rec.check("two-by-two-max", format!("{tag} n={n} oracle"), n * n - n, best);
                rec.check("two-by-two-unique", format!("{tag} n={n} oracle"), true, level == [expected]);
            }
        }
    }
    Ok(rec.rows)
}

fn three_by_three_suite(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let mut rec = Recorder::new();
    for (name, q) in three_by_three() {
        for n in 3..=opts.n_max.max(3) {
            let out = search_max(n, &q, &exact_config(opts, false))?;
            let expected = upper_bound_3x3(n)?;
            rec.check("three-by-three-max", format!("{name} n={n} search"), expected, describe(out.status, out.best_ones));
            if n <= 4 {
                let (best, _) = oracle_max_strong(n, &q, false)?;
                rec.check("three-by-three-max", format!("{name} n={n} oracle"), expected, best);
            }
        }
    }
    // Lower-bound constructions, checked rather than assumed. T_n serves 132.
    let i3 = BitMatrix::identity(3)?;
    let b3 = BitMatrix::permutation(&[0, 2, 1])?;
    for n in 3..=12 {
        let expected = upper_bound_3x3(n)?;
        for (name, a, q) in [("S", construct_s(n)?, &i3), ("T", construct_t(n)?, &b3)] {
            let ok = is_strongly_forcing(&a, q)?;
            let actual = if ok { a.ones_count().to_string() } else { "not strongly forcing".into() };
            rec.check("three-by-three-construction", format!("{name}_{n}"), expected, actual);
        }
    }
    Ok(rec.rows)
}

/// Dihedral classes of the 2x2 and 3x3 permutation patterns, plus one
/// non-square pattern.
fn dihedral_families() -> Vec<Vec<BitMatrix>> {
    let mut seeds: Vec<BitMatrix> = perms(2);
    seeds.extend(perms(3));
    seeds.push(BitMatrix::parse("110\n001").expect("literal"));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for q in seeds {
        let class = dihedral_class(&q);
        if seen.insert(class[0].serialize()) {
            out.push(class);
        }
    }
    out
}

fn dihedral(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let mut rec = Recorder::new();
    let n = opts.n_max.clamp(3, 5);
    for class in dihedral_families() {
        let base = &class[0];
        let reference = search_max(n, base, &exact_config(opts, true))?;
        for q in &class {
            let out = search_max(n, q, &exact_config(opts, true))?;
            let label = format!("n={n} {} -> {}", base.body().trim().replace('\n', "/"), q.body().trim().replace('\n', "/"));
            rec.check("dihedral-max", label.clone(), reference.best_ones, out.best_ones);
            // Some symmetry carrying the base pattern to q must also carry the
            // witness set across.
            let mapped = Symmetry::ALL.iter().filter(|g| g.apply(base) == *q).any(|g| {
                let mut images: Vec<BitMatrix> = reference.witnesses.iter().map(|w| g.apply(w)).collect();
                images.sort_by_key(|m| m.serialize());
                images == out.witnesses
            });
            rec.check("dihedral-witnesses", label, true, mapped);
        }
    }
    Ok(rec.rows)
}

fn conjecture(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let mut rec = Recorder::new();
    for k in 3..=opts.k_max.max(3) {
        for n in k..=opts.n_max.max(k) {
            let value = conjecture_value(n, k)?;
            let a = construct_s_nk(n, k)?;
            let ok = is_strongly_forcing(&a, &BitMatrix::identity(k)?)? && a.ones_count() as u64 == value;
            rec.check("identity-construction", format!("k={k} n={n}"), value, if ok { value.to_string() } else { "invalid".into() });
            let recurrence = recurrence_lower_bound(n, k, known_identity_lower_bound)?
                .map_or("-".to_string(), |b| b.value.to_string());
            let upper = upper_bound_simple(n, k)?;
            let search = if n <= crate::strong::search::MAX_SEARCH_N {
                let cfg = SearchConfig { node_budget: Some(opts.node_budget), ..exact_config(opts, false) };
                Some(search_max(n, &BitMatrix::identity(k)?, &cfg)?)
            } else {
                None
            };
            let summary = format!(
                "construction={value} recurrence={recurrence} upper={upper} search={}",
                search.as_ref().map_or("-".to_string(), |o| describe(o.status, o.best_ones))
            );
            match search.filter(|o| o.status == SearchStatus::Exact) {
                Some(o) => rec.check("identity-conjecture", format!("k={k} n={n}"), value, o.best_ones),
                None => rec.push("identity-conjecture", format!("k={k} n={n}"), value, summary, RowStatus::Info),
            }
        }
    }
    Ok(rec.rows)
}

/// Oracle cross-check of search witnesses, used by tests.
pub fn witnesses_pass_oracle(q: &BitMatrix, witnesses: &[BitMatrix]) -> Result<bool> {
    for w in witnesses {
        if !oracle_is_strongly_forcing(w, q)? {
            return Ok(false);
        }
    }
    Ok(true)
}
