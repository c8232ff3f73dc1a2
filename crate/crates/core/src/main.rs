use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use mforce::cache::ResultsCache;
use mforce::forcing::{self, CountFormula};
use mforce::patterns;
use mforce::strong::{self, constructions, search};
use mforce::verify::{self, RowStatus, Suite, VerifyOptions, VerifyRow};
use mforce::BitMatrix;

/// Forcing and strongly forcing (0,1)-matrices.
///
/// Patterns and matrices are text files of 0/1 rows (optionally preceded by
/// an "m n" header), `-` for stdin, or a built-in name: i<k>, h<k>, j<k>,
/// b3 (132), c3 (213), d3 (231), e3 (312), p<one-line permutation>.
#[derive(Parser)]
#[command(name = "mforce", version)]
struct Cli {
    /// Worker threads for search (defaults to MFORCE_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Least number of ones in an m x n Q-forcing matrix.
    Min(MinArgs),
    /// Test whether a matrix is Q-forcing or strongly Q-forcing.
    Check(CheckArgs),
    /// Build one of the explicit matrices.
    Construct(ConstructArgs),
    /// Exact search for the most ones in an n x n strongly Q-forcing matrix.
    Search(SearchArgs),
    /// Run a verification suite and print one row per instance.
    Verify(VerifyArgs),
    /// Corner functions and core of a pattern, as JSON.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Count,
    Matrix,
    Both,
}

#[derive(Args)]
struct MinArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    pattern: String,
    #[arg(long, value_enum, default_value = "count")]
    emit: Emit,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also report corner cardinalities and core offsets.
    #[arg(long)]
    explain: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Forcing,
    Strong,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    kind: CheckKind,
    #[arg(long)]
    ambient: String,
    #[arg(long)]
    pattern: String,
    /// Emit one witness embedding per 1-entry (strong) or the missing
    /// required entries (forcing) as JSON.
    #[arg(long)]
    witness: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "a-mnq")]
    AMnq,
    #[value(name = "s-n")]
    SN,
    #[value(name = "t-n")]
    TN,
    SNk,
    LinearZero,
    #[value(name = "extremal-2x2")]
    Extremal2x2,
    Block,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    I2,
    H2,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    which: Which,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    /// Upper-left block for `block`.
    #[arg(long)]
    left: Option<String>,
    /// Lower-right block for `block`.
    #[arg(long)]
    right: Option<String>,
    /// Write the matrix here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    pattern: String,
    /// Maximum DFS nodes, e.g. 1000000, 1e6 or 10^6.
    #[arg(long, value_parser = parse_count)]
    node_budget: Option<u64>,
    /// Wall-clock limit, e.g. 90, 90s, 1500ms or 5m.
    #[arg(long, value_parser = parse_duration)]
    time_budget: Option<Duration>,
    /// Collect every matrix attaining the maximum.
    #[arg(long)]
    all_extremal: bool,
    /// Disable symmetry reduction.
    #[arg(long)]
    no_dihedral: bool,
    /// Results cache to read from and update.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Also write the search outcome JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    /// Node budget per search in the conjecture suite.
    #[arg(long, value_parser = parse_count)]
    node_budget: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    pattern: String,
}

/// Single JSON object describing one invocation.
#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: Value,
    outputs: Value,
    elapsed_ms: u64,
    passed: bool,
}

/// Outcome of a command: exit code 0 (success or true), 1 (false or failed
/// checks).
struct Done {
    passed: bool,
}

fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    let err = || format!("not a count: '{s}'");
    if let Some((b, e)) = s.split_once('^') {
        let (b, e): (u64, u32) = (b.parse().map_err(|_| err())?, e.parse().map_err(|_| err())?);
        return b.checked_pow(e).ok_or_else(err);
    }
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let (m, e): (u64, u32) = (m.parse().map_err(|_| err())?, e.parse().map_err(|_| err())?);
        return 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(err);
    }
    s.parse().map_err(|_| err())
}

fn parse_duration(s: &str) -> Result<Duration, String> {
    let s = s.trim();
    let err = || format!("not a duration: '{s}'");
    let (num, scale) = if let Some(v) = s.strip_suffix("ms") {
        (v, 0.001)
    } else if let Some(v) = s.strip_suffix('s') {
        (v, 1.0)
    } else if let Some(v) = s.strip_suffix('m') {
        (v, 60.0)
    } else if let Some(v) = s.strip_suffix('h') {
        (v, 3600.0)
    } else {
        (s, 1.0)
    };
    let v: f64 = num.parse().map_err(|_| err())?;
    Duration::try_from_secs_f64(v * scale).map_err(|_| err())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: mforce::Error| e.to_string())
}

/// Reads a matrix from a file, stdin (`-`) or a built-in name.
fn load_matrix(spec: &str) -> anyhow::Result<BitMatrix> {
    if spec == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading stdin")?;
        return BitMatrix::parse(&text).map_err(|e| anyhow!("<stdin>: {e}"));
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return BitMatrix::parse(&text).map_err(|e| anyhow!("{spec}: {e}"));
    }
    patterns::builtin(spec).ok_or_else(|| anyhow!("'{spec}' is neither a readable file nor a built-in pattern"))
}

fn emit(format: Format, report: RunReport, text: &str) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Text => write!(out, "{text}")?,
    }
    Ok(())
}

fn cmd_min(a: &MinArgs, start: Instant) -> anyhow::Result<Done> {
    let q = load_matrix(&a.pattern)?;
    let matrix = forcing::minimal_forcing(a.m, a.n, &q)?;
    let (count, formula) = match forcing::min_ones(a.m, a.n, &q) {
        Ok(v) => (v.value, Some(v.formula)),
        Err(mforce::Error::NoFormula(_)) => (matrix.ones_count() as u64, None),
        Err(e) => return Err(e.into()),
    };
    let mut text = String::new();
    if matches!(a.emit, Emit::Count | Emit::Both) {
        text += &format!("{count}\n");
    }
    if matches!(a.emit, Emit::Matrix | Emit::Both) {
        text += &matrix.body();
    }
    let mut outputs = json!({ "count": count });
    if matches!(a.emit, Emit::Matrix | Emit::Both) {
        outputs["matrix"] = json!(matrix);
    }
    if a.explain {
        let corners = forcing::corner_functions(&q);
        let formula_name = formula.map_or("window".to_string(), |f: CountFormula| {
            serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
        });
        text += &format!(
            "formula: {formula_name}\ncorners: nw={} ne={} se={} sw={} total={}\n",
            corners.nw.len(),
            corners.ne.len(),
            corners.se.len(),
            corners.sw.len(),
            corners.total()
        );
        outputs["formula"] = json!(formula_name);
        outputs["corners"] = json!(corners);
        if let Ok(dec) = forcing::core(&q) {
            text += &format!(
                "core: {}x{} top={} bottom={} left={} right={}\n",
                dec.core.rows(),
                dec.core.cols(),
                dec.top_zero_rows,
                dec.bottom_zero_rows,
                dec.left_zero_cols,
                dec.right_zero_cols
            );
            outputs["core"] = json!(dec);
        }
    }
    let report = RunReport {
        command: "min".into(),
        inputs: json!({ "m": a.m, "n": a.n, "pattern": a.pattern }),
        outputs,
        elapsed_ms: start.elapsed().as_millis() as u64,
        passed: true,
    };
    emit(a.format, report, &text)?;
    Ok(Done { passed: true })
}

fn cmd_check(a: &CheckArgs, start: Instant) -> anyhow::Result<Done> {
    let ambient = load_matrix(&a.ambient)?;
    let q = load_matrix(&a.pattern)?;
    let (result, detail) = match a.kind {
        CheckKind::Forcing => {
            let required = forcing::minimal_forcing(ambient.rows(), ambient.cols(), &q)?;
            let missing: Vec<_> = required.one_positions().filter(|&p| !ambient.at(p)).collect();
            (missing.is_empty(), json!({ "missing": missing }))
        }
        CheckKind::Strong => {
            if a.witness {
                let all = strong::witnesses(&ambient, &q)?;
                let ok = all.iter().all(|(_, w)| w.is_some());
                let list: Vec<Value> =
                    all.iter().map(|(p, w)| json!({ "position": p, "witness": w })).collect();
                (ok, json!({ "witnesses": list }))
            } else {
                let uncovered = strong::uncovered(&ambient, &q)?;
                (uncovered.is_empty(), json!({ "uncovered": uncovered }))
            }
        }
    };
    let kind = match a.kind {
        CheckKind::Forcing => "forcing",
        CheckKind::Strong => "strong",
    };
    let mut text = format!("{result}\n");
    if a.witness {
        text += &serde_json::to_string_pretty(&detail)?;
        text.push('\n');
    }
    let report = RunReport {
        command: format!("check {kind}"),
        inputs: json!({ "ambient": a.ambient, "pattern": a.pattern }),
        outputs: json!({ "result": result, "detail": detail }),
        elapsed_ms: start.elapsed().as_millis() as u64,
        passed: result,
    };
    emit(a.format, report, &text)?;
    Ok(Done { passed: result })
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| anyhow!("--{flag} is required here"))
}

fn cmd_construct(a: &ConstructArgs, start: Instant) -> anyhow::Result<Done> {
    let pattern = || load_matrix(a.pattern.as_deref().ok_or_else(|| anyhow!("--pattern is required here"))?);
    let matrix = match a.which {
        Which::AMnq => forcing::construct_a_mnq(need(a.m, "m")?, need(a.n, "n")?, &pattern()?)?,
        Which::SN => constructions::construct_s(need(a.n, "n")?)?,
        Which::TN => constructions::construct_t(need(a.n, "n")?)?,
        Which::SNk => constructions::construct_s_nk(need(a.n, "n")?, need(a.k, "k")?)?,
        Which::LinearZero => {
            constructions::linear_zero_construction(need(a.m, "m")?, need(a.n, "n")?, &pattern()?)?
        }
        Which::Extremal2x2 => {
            let variant = match need(a.variant, "variant")? {
                Variant::I2 => constructions::TwoByTwo::I2,
                Variant::H2 => constructions::TwoByTwo::H2,
            };
            constructions::extremal_2x2(need(a.n, "n")?, variant)?
        }
        Which::Block => {
            let left = load_matrix(a.left.as_deref().ok_or_else(|| anyhow!("--left is required here"))?)?;
            let right = load_matrix(a.right.as_deref().ok_or_else(|| anyhow!("--right is required here"))?)?;
            constructions::block(&left, &right)?
        }
    };
    let name = Which::value_variants()
        .iter()
        .find(|w| **w == a.which)
        .and_then(|w| w.to_possible_value())
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let mut text = matrix.serialize();
    if let Some(path) = &a.out {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
        text = format!("{}\n", path.display());
    }
    let report = RunReport {
        command: format!("construct {name}"),
        inputs: json!({ "m": a.m, "n": a.n, "k": a.k, "pattern": a.pattern }),
        outputs: json!({ "matrix": matrix, "ones": matrix.ones_count(), "path": a.out }),
        elapsed_ms: start.elapsed().as_millis() as u64,
        passed: true,
    };
    emit(a.format, report, &text)?;
    Ok(Done { passed: true })
}

fn cmd_search(a: &SearchArgs, threads: Option<usize>, start: Instant) -> anyhow::Result<Done> {
    let q = load_matrix(&a.pattern)?;
    let config = search::SearchConfig {
        node_budget: a.node_budget,
        time_budget: a.time_budget,
        use_dihedral_reduction: !a.no_dihedral,
        enumerate_all_extremal: a.all_extremal,
        threads,
    };
    let outcome = search::search_max(a.n, &q, &config)?;
    if let Some(path) = &a.cache {
        let mut cache = ResultsCache::load(path)?;
        if cache.insert(a.n, &q, outcome.clone()) {
            cache.save(path)?;
        }
    }
    if let Some(path) = &a.out {
        std::fs::write(path, serde_json::to_string_pretty(&outcome)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let status = serde_json::to_value(outcome.status)?;
    let mut text = format!(
        "status: {}\nbest_ones: {}\nnodes_explored: {}\nelapsed_ms: {}\nwitnesses: {}\n",
        status.as_str().unwrap_or_default(),
        outcome.best_ones,
        outcome.nodes_explored,
        outcome.elapsed.as_millis(),
        outcome.witnesses.len()
    );
    for w in &outcome.witnesses {
        text.push('\n');
        text += &w.body();
    }
    let report = RunReport {
        command: "search".into(),
        inputs: json!({ "n": a.n, "pattern": a.pattern, "node_budget": a.node_budget,
            "time_budget_ms": a.time_budget.map(|d| d.as_millis() as u64),
            "all_extremal": a.all_extremal, "dihedral": !a.no_dihedral }),
        outputs: serde_json::to_value(&outcome)?,
        elapsed_ms: start.elapsed().as_millis() as u64,
        passed: true,
    };
    emit(a.format, report, &text)?;
    Ok(Done { passed: true })
}

fn cmd_verify(a: &VerifyArgs, threads: Option<usize>, start: Instant) -> anyhow::Result<Done> {
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        n_max: a.n_max.unwrap_or(defaults.n_max),
        k_max: a.k_max.unwrap_or(defaults.k_max),
        node_budget: a.node_budget.unwrap_or(defaults.node_budget),
        threads,
    };
    let rows = verify::run_suite(a.suite, &opts)?;
    let passed = rows.iter().all(|r| r.status != RowStatus::Fail);
    let mut out = io::stdout().lock();
    match a.format {
        TableFormat::Csv => {
            writeln!(out, "{}", VerifyRow::CSV_HEADER)?;
            for r in &rows {
                writeln!(out, "{}", r.to_csv())?;
            }
        }
        TableFormat::Json => {
            let report = RunReport {
                command: "verify".into(),
                inputs: json!({ "suite": a.suite.name(), "n_max": opts.n_max, "k_max": opts.k_max,
                    "node_budget": opts.node_budget }),
                outputs: json!({ "rows": rows }),
                elapsed_ms: start.elapsed().as_millis() as u64,
                passed,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
    }
    Ok(Done { passed })
}

fn cmd_inspect(a: &InspectArgs) -> anyhow::Result<Done> {
    let q = load_matrix(&a.pattern)?;
    let core = match forcing::core(&q) {
        Ok(dec) => json!(dec),
        Err(mforce::Error::AllZeroPattern) => Value::Null,
        Err(e) => bail!(e),
    };
    let value = json!({
        "rows": q.rows(),
        "cols": q.cols(),
        "ones": q.ones_count(),
        "corners": forcing::corner_functions(&q),
        "core": core,
    });
    writeln!(io::stdout().lock(), "{}", serde_json::to_string_pretty(&value)?)?;
    Ok(Done { passed: true })
}

fn threads_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var("MFORCE_THREADS") {
        Ok(v) if !v.trim().is_empty() => {
            let n: usize = v.trim().parse().map_err(|_| anyhow!("MFORCE_THREADS must be a positive integer"))?;
            if n == 0 {
                bail!("MFORCE_THREADS must be a positive integer");
            }
            Ok(Some(n))
        }
        _ => Ok(None),
    }
}

fn run(cli: Cli) -> anyhow::Result<Done> {
    let start = Instant::now();
    let threads = match cli.threads {
        Some(0) => bail!("--threads must be positive"),
        Some(n) => Some(n),
        None => threads_from_env()?,
    };
    match &cli.command {
        Command::Min(a) => cmd_min(a, start),
        Command::Check(a) => cmd_check(a, start),
        Command::Construct(a) => cmd_construct(a, start),
        Command::Search(a) => cmd_search(a, threads, start),
        Command::Verify(a) => cmd_verify(a, threads, start),
        Command::Inspect(a) => cmd_inspect(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Done { passed: true }) => ExitCode::SUCCESS,
        Ok(Done { passed: false }) => ExitCode::from(1),
        // Output cut short by a closed pipe (e.g. `| head`).
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
