//! Command-line front end. Every verb renders one report as JSON, CSV or an
//! aligned plain-text table; output depends only on the arguments.
//!
//! Exit codes: 0 success, 1 a checked mathematical invariant failed, 2 usage
//! or input error.

use std::cmp::Ordering;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Integer, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::BoundsEngine;
use crate::count::{count_by_size, Backend, CountOptions, IndSetSequence, SequenceDocument};
use crate::cube::{scattered_counts, small_set_profile, structure_stats, VertexSet};
use crate::error::{Error, Result};
use crate::estimates::{half_order, EstimateEngine};
use crate::graph::{bipartition, generate, hypercube, Graph, GraphFamily};
use crate::numeric::{cmp_log2, float_string, log2_integer, log2_rational, parse_rational, Side, DEFAULT_PRECISION};
use crate::percolation::{run_experiment, PercolationConfig, SRule};
use crate::report::FLOAT_DIGITS;
use crate::seq::{
    check_final_third, check_property_bgs, check_sstep_with, check_unimodal, transition_g, transition_limit,
    transition_ratio, Direction, Strictness,
};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest cube dimension for which `transition` and `cube-window --exact`
/// count `Q_d` exactly.
const MAX_EXACT_CUBE: u32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "stableseq",
    version,
    about = "Exact independent-set sequences, their bounds, and hypercube estimates"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Plain)]
    pub format: Format,
    /// Worker threads for parallel stages (defaults to all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Mantissa bits for transcendental evaluations.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Constant c in the activity threshold c log2(d) / d^(1/3) of the hypercube ranges.
    #[arg(long, global = true, default_value = "1")]
    pub c_constant: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count independent sets of each size exactly.
    Count(CountArgs),
    /// Per-size entropy sandwich and partition-function bounds against exact counts.
    Bounds(BoundsArgs),
    /// Check a shape property (unimodality, s-step monotonicity, the (β,γ,s)
    /// property, final-third decrease) of a graph's sequence or a given sequence.
    Check(CheckArgs),
    /// Central estimate of i_t(Q_d) with its multiplicative error window.
    CubeWindow(CubeWindowArgs),
    /// Neighbourhood, closure and 2-component structure of subsets of the even side of Q_d.
    CubeStructure(CubeStructureArgs),
    /// Ratio i_t(Q_d) / (2 C(2^(d-1), t)) next to its predicted limit exp{e^(-2g)/2}.
    Transition(TransitionArgs),
    /// Bond-percolation experiment checking the (ε,ε,s) property on each sample.
    Percolate(PercolateArgs),
    /// Run the built-in verification criteria; exits 1 if any fails.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Graph spec: qd:D, knn:A,B, cycle:N, path:N, empty:N, circulant:N,o1,..., aems, file:PATH.
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Auto,
    General,
    SideProfile,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Auto => Backend::Auto,
            BackendArg::General => Backend::General,
            BackendArg::SideProfile => Backend::SideProfile,
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Bipartite graph spec.
    #[arg(long)]
    pub graph: String,
    /// Degree parameter d (rational); defaults to the maximum degree.
    #[arg(long)]
    pub degree: Option<String>,
    /// Activities at which the partition-function bounds are compared (repeatable).
    #[arg(long = "lambda", default_values_t = vec!["1".to_string()])]
    pub lambdas: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Graph spec whose sequence is checked.
    #[arg(long, conflicts_with = "sequence", required_unless_present = "sequence")]
    pub graph: Option<String>,
    /// Comma-separated sequence a_0,a_1,... to check instead of a graph.
    #[arg(long)]
    pub sequence: Option<String>,
    #[arg(long, value_enum)]
    pub property: Property,
    /// Direction for `sstep`.
    #[arg(long, value_enum, default_value_t = DirectionArg::Increasing)]
    pub direction: DirectionArg,
    /// Left end of the `sstep` interval (default 0).
    #[arg(long)]
    pub lo: Option<usize>,
    /// Right end of the `sstep` interval (default: last index).
    #[arg(long)]
    pub hi: Option<usize>,
    /// Step s for `sstep` and `bgs`.
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Demand strict inequalities in `sstep`.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, default_value = "1/10")]
    pub beta: String,
    #[arg(long, default_value = "1/10")]
    pub gamma: String,
    /// Half order n for `bgs` on a raw sequence (graphs use |V|/2).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Unimodal,
    FinalThird,
    Sstep,
    Bgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Increasing,
    Decreasing,
}

#[derive(Debug, Args)]
pub struct CubeWindowArgs {
    #[arg(long)]
    pub d: u32,
    /// Sizes t to evaluate (repeatable).
    #[arg(long = "t", conflicts_with = "grid")]
    pub ts: Vec<String>,
    /// Evaluate an evenly spaced grid of this many points over 1..2^(d-1)-1.
    #[arg(long)]
    pub grid: Option<u32>,
    /// Also count i_t(Q_d) exactly (d <= 5).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct CubeStructureArgs {
    #[arg(long)]
    pub d: u32,
    /// Comma-separated vertex labels (integers below 2^d) of one subset.
    #[arg(long, conflicts_with_all = ["small_sets", "scattered"], required_unless_present_any = ["small_sets", "scattered"])]
    pub set: Option<String>,
    /// Profile of all small subsets of the even side (d <= 5) with weighted sums.
    #[arg(long)]
    pub small_sets: bool,
    /// Number of even-side subsets of each size with pairwise distance at least 4 (d <= 6).
    #[arg(long)]
    pub scattered: bool,
    /// Activity for the weighted sums of `--small-sets`.
    #[arg(long, default_value = "1")]
    pub lambda: String,
}

#[derive(Debug, Args)]
pub struct TransitionArgs {
    #[arg(long)]
    pub d: u32,
    /// Single size t (default: every t from 0 to 2^(d-1) when d <= 5, else 2^(d-2)).
    #[arg(long)]
    pub t: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PercolateArgs {
    /// Balanced bipartite base graph spec.
    #[arg(long, default_value = "knn:16,16")]
    pub base: String,
    /// Edge retention probability (rational or decimal).
    #[arg(long, default_value = "1/2")]
    pub p: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value = "1/10")]
    pub epsilon: String,
    /// `almost-regular` or `fixed:S`.
    #[arg(long, default_value = "almost-regular")]
    pub s_rule: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `small` skips the percolation run; `full` runs every criterion.
    #[arg(long, default_value = "small")]
    pub suite: String,
}

/// A rendered verb result.
struct Report {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    /// Leading `key: value` lines of the plain rendering.
    summary: Vec<(String, String)>,
    failed: bool,
}

impl Report {
    fn new(json: Value) -> Self {
        Self {
            json,
            header: Vec::new(),
            rows: Vec::new(),
            summary: Vec::new(),
            failed: false,
        }
    }

    fn note(&mut self, k: &str, v: impl ToString) {
        self.summary.push((k.to_string(), v.to_string()));
    }

    fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let s = serde_json::to_string_pretty(&self.json).map_err(std::io::Error::other)?;
                writeln!(out, "{s}")
            }
            Format::Csv => {
                writeln!(out, "{}", self.header.join(","))?;
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
                Ok(())
            }
            Format::Plain => {
                for (k, v) in &self.summary {
                    writeln!(out, "{k}: {v}")?;
                }
                if !self.header.is_empty() {
                    if !self.summary.is_empty() {
                        writeln!(out)?;
                    }
                    let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
                    for r in &self.rows {
                        for (w, c) in widths.iter_mut().zip(r) {
                            *w = (*w).max(c.chars().count());
                        }
                    }
                    let line = |cells: Vec<&str>| {
                        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                        parts.join("  ").trim_end().to_string()
                    };
                    writeln!(out, "{}", line(self.header.clone()))?;
                    for r in &self.rows {
                        writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn fmt_float(f: &Float) -> String {
    float_string(f, FLOAT_DIGITS)
}

fn opt_float(f: &Option<Float>) -> String {
    f.as_ref().map(fmt_float).unwrap_or_default()
}

fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

struct Context {
    format: Format,
    workers: Option<usize>,
    precision: u32,
    c_constant: Rational,
}

/// Parses `args` (including the program name) and runs the verb, writing the
/// report to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli) {
        Ok((report, format)) => {
            if let Err(e) = report.render(format, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            if report.failed {
                EXIT_INVARIANT
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli) -> Result<(Report, Format)> {
    let ctx = Context {
        format: cli.format,
        workers: cli.workers,
        precision: cli.precision,
        c_constant: parse_rational(&cli.c_constant)?,
    };
    if let Some(w) = ctx.workers {
        if w == 0 {
            return Err(Error::InvalidParameter("--workers must be at least 1".into()));
        }
        // Ignored if the global pool already exists (e.g. repeated in-process runs).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let report = match &cli.command {
        Command::Count(a) => count(a)?,
        Command::Bounds(a) => bounds(&ctx, a)?,
        Command::Check(a) => check(a)?,
        Command::CubeWindow(a) => cube_window(&ctx, a)?,
        Command::CubeStructure(a) => cube_structure(a)?,
        Command::Transition(a) => transition(a)?,
        Command::Percolate(a) => percolate(&ctx, a)?,
        Command::VerifyPaper(a) => verify(a)?,
    };
    Ok((report, ctx.format))
}

fn load_graph(spec: &str) -> Result<Graph> {
    generate(&spec.parse::<GraphFamily>()?)
}

fn count(a: &CountArgs) -> Result<Report> {
    let g = load_graph(&a.graph)?;
    let seq = count_by_size(&g, &CountOptions::with_backend(a.backend.into()))?;
    let mut r = Report::new(to_json(&SequenceDocument::new(&a.graph, &seq))?);
    r.note("graph", &a.graph);
    r.note("alpha", seq.alpha());
    r.note("total", seq.total());
    r.header = vec!["t", "count"];
    r.rows = seq.counts().iter().enumerate().map(|(t, c)| vec![t.to_string(), c.to_string()]).collect();
    Ok(r)
}

#[derive(Serialize)]
struct PartitionRow {
    lambda: String,
    exact_log2: String,
    regular_log2: Option<String>,
    almost_regular_log2: String,
    holds: bool,
}

fn bounds(ctx: &Context, a: &BoundsArgs) -> Result<Report> {
    let g = load_graph(&a.graph)?;
    let b = bipartition(&g)?;
    let d = match &a.degree {
        Some(s) => parse_rational(s)?,
        None => Rational::from(g.max_degree()),
    };
    if d <= 0 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    let engine = BoundsEngine::new(ctx.precision);
    let seq = count_by_size(&g, &CountOptions::default())?;
    let table = engine.bound_table(&g, &b, &d, Some(&seq))?;
    let violations = table.violations();

    let regular = g.is_regular().filter(|&r| r > 0 && Rational::from(r) == d);
    let mut partition = Vec::new();
    let mut partition_failed = false;
    for l in &a.lambdas {
        let lambda = parse_rational(l)?;
        if lambda <= 0 {
            return Err(Error::InvalidParameter(format!("activity {l} must be positive")));
        }
        let p = seq.eval(&lambda);
        let exact_log2 = log2_rational(&p, ctx.precision, Side::Nearest);
        let reg = match regular {
            Some(r) => Some(engine.regular_partition_bound(g.order() as u64, r as u64, &lambda)?),
            None => None,
        };
        let almost = engine.almost_regular_partition_bound(&g, &b, &d, &lambda)?;
        let holds = reg.as_ref().is_none_or(|v| cmp_log2(&p, v) != Ordering::Greater)
            && cmp_log2(&p, &almost.log2) != Ordering::Greater;
        partition_failed |= !holds;
        partition.push(PartitionRow {
            lambda: lambda.to_string(),
            exact_log2: fmt_float(&exact_log2),
            regular_log2: reg.as_ref().map(fmt_float),
            almost_regular_log2: fmt_float(&almost.log2),
            holds,
        });
    }

    let mut r = Report::new(json!({
        "graph": a.graph,
        "degree": d.to_string(),
        "table": to_json(&table)?,
        "violations": to_json(&violations)?,
        "partition": to_json(&partition)?,
    }));
    r.failed = !violations.is_empty() || partition_failed;
    r.note("graph", &a.graph);
    r.note("degree", &d);
    r.note("violations", violations.len());
    for row in &partition {
        r.note(
            &format!("partition at λ = {}", row.lambda),
            format!(
                "log2 P = {}, regular bound {}, almost-regular bound {}{}",
                row.exact_log2,
                row.regular_log2.as_deref().unwrap_or("n/a"),
                row.almost_regular_log2,
                if row.holds { "" } else { " VIOLATED" }
            ),
        );
    }
    r.header = vec!["t", "lower_log2", "upper_log2", "exact_log2", "sources"];
    r.rows = table
        .rows
        .iter()
        .map(|row| {
            vec![
                row.t.to_string(),
                opt_float(&row.lower_log2),
                opt_float(&row.upper_log2),
                opt_float(&row.exact_log2),
                row.sources.join(";"),
            ]
        })
        .collect();
    Ok(r)
}

fn parse_sequence(s: &str) -> Result<Vec<Integer>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<Integer>()
                .map_err(|_| Error::Parse(format!("not an integer: {x:?}")))
        })
        .collect()
}

fn witness_text(w: &Option<(usize, usize)>) -> String {
    match w {
        Some((i, j)) => format!("({i}, {j})"),
        None => "none".into(),
    }
}

fn check(a: &CheckArgs) -> Result<Report> {
    let (source, seq, half, bipartite) = match (&a.graph, &a.sequence) {
        (Some(spec), _) => {
            let g = load_graph(spec)?;
            let seq = count_by_size(&g, &CountOptions::default())?;
            let bip = bipartition(&g).is_ok();
            (spec.clone(), seq.counts().to_vec(), Some(g.order() / 2), bip)
        }
        (None, Some(s)) => (s.clone(), parse_sequence(s)?, a.n, false),
        (None, None) => return Err(Error::InvalidParameter("give --graph or --sequence".into())),
    };
    if seq.is_empty() {
        return Err(Error::InvalidParameter("empty sequence".into()));
    }
    let mut r;
    match a.property {
        Property::Unimodal => {
            let rep = check_unimodal(&seq)?;
            let verdict = if rep.holds { "unimodal" } else { "not unimodal" };
            let mut j = to_json(&rep)?;
            j["verdict"] = json!(verdict);
            r = Report::new(j);
            r.note("verdict", verdict);
            r.note("mode", rep.mode);
            r.note("witness", witness_text(&rep.witness));
        }
        Property::FinalThird => {
            let rep = check_final_third(&seq)?;
            let verdict = if rep.holds { "decreasing on final third" } else { "not decreasing on final third" };
            let mut j = to_json(&rep)?;
            j["verdict"] = json!(verdict);
            r = Report::new(j);
            // The final-third decrease is a theorem for bipartite graphs.
            r.failed = bipartite && !rep.holds;
            r.note("verdict", verdict);
            r.note("start", rep.start);
            r.note("alpha", rep.alpha);
            r.note("witness", witness_text(&rep.witness));
        }
        Property::Sstep => {
            let kind = match a.direction {
                DirectionArg::Increasing => Direction::Increasing,
                DirectionArg::Decreasing => Direction::Decreasing,
            };
            let strictness = if a.strict { Strictness::Strict } else { Strictness::NonStrict };
            let lo = a.lo.unwrap_or(0);
            let hi = a.hi.unwrap_or(seq.len() - 1);
            let rep = check_sstep_with(&seq, kind, lo, hi, a.s, strictness)?;
            let verdict = format!(
                "{}{}-step {} on [{lo}, {hi}]",
                if rep.holds { "" } else { "not " },
                a.s,
                if kind == Direction::Increasing { "increasing" } else { "decreasing" }
            );
            let mut j = to_json(&rep)?;
            j["verdict"] = json!(verdict);
            r = Report::new(j);
            r.note("verdict", verdict);
            r.note("witness", witness_text(&rep.witness));
        }
        Property::Bgs => {
            let n = half.ok_or_else(|| Error::InvalidParameter("--n is required for a raw sequence".into()))?;
            let beta = parse_rational(&a.beta)?;
            let gamma = parse_rational(&a.gamma)?;
            let rep = check_property_bgs(&seq, n, &beta, &gamma, a.s)?;
            let verdict = format!("property ({beta}, {gamma}, {}) {}", a.s, if rep.holds { "holds" } else { "fails" });
            let mut j = to_json(&rep)?;
            j["verdict"] = json!(verdict);
            r = Report::new(j);
            r.note("verdict", verdict);
            r.note(
                "increasing part",
                format!("[{}, {}] witness {}", rep.increasing.lo, rep.increasing.hi, witness_text(&rep.increasing.witness)),
            );
            r.note(
                "decreasing part",
                format!("[{}, {}] witness {}", rep.decreasing.lo, rep.decreasing.hi, witness_text(&rep.decreasing.witness)),
            );
        }
    }
    r.summary.insert(0, ("source".into(), source));
    r.header = vec!["t", "count"];
    r.rows = seq.iter().enumerate().map(|(t, c)| vec![t.to_string(), c.to_string()]).collect();
    Ok(r)
}

fn exact_cube(d: u32) -> Result<IndSetSequence> {
    if d > MAX_EXACT_CUBE {
        return Err(Error::SizeCap {
            what: "cube dimension for exact counting",
            limit: MAX_EXACT_CUBE as usize,
            actual: d as usize,
        });
    }
    count_by_size(&hypercube(d), &CountOptions::default())
}

fn cube_window(ctx: &Context, a: &CubeWindowArgs) -> Result<Report> {
    let engine = EstimateEngine::new(ctx.precision, ctx.c_constant.clone());
    if a.d < 2 {
        return Err(Error::InvalidParameter("dimension must be at least 2".into()));
    }
    let n = half_order(a.d);
    let ts: Vec<Integer> = match a.grid {
        Some(k) => {
            if k < 2 {
                return Err(Error::InvalidParameter("--grid needs at least 2 points".into()));
            }
            let last = Integer::from(&n - 2u32);
            let mut v: Vec<Integer> = (0..k).map(|i| 1u32 + Integer::from(&last * i) / (k - 1)).collect();
            v.dedup();
            v
        }
        None if a.ts.is_empty() => vec![Integer::from(&n >> 1u32)],
        None => a
            .ts
            .iter()
            .map(|s| s.parse::<Integer>().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))))
            .collect::<Result<_>>()?,
    };
    let exact = if a.exact { Some(exact_cube(a.d)?) } else { None };
    let mut estimates = Vec::new();
    let mut rows = Vec::new();
    let mut missing_window = false;
    for t in &ts {
        let w = engine.cube_window(a.d, t)?;
        missing_window |= w.e1_lower.is_none();
        let exact_log2 = exact.as_ref().and_then(|s| {
            let it = s.get(t.to_usize()?);
            (it > 0).then(|| fmt_float(&log2_integer(&it, ctx.precision, Side::Nearest)))
        });
        let mut j = to_json(&w)?;
        if let Some(e) = &exact_log2 {
            j["exact_log2"] = json!(e);
        }
        estimates.push(j);
        rows.push(vec![
            t.to_string(),
            to_json(&w.range)?.as_str().unwrap_or_default().to_string(),
            fmt_float(&w.central_log2),
            opt_float(&w.e1_lower),
            opt_float(&w.e2_upper),
            exact_log2.unwrap_or_default(),
        ]);
    }
    let mut r = Report::new(json!({ "d": a.d, "c_constant": ctx.c_constant.to_string(), "estimates": estimates }));
    r.note("d", a.d);
    r.note("c constant", &ctx.c_constant);
    if missing_window {
        r.note(
            "caveat",
            "lower error factor not applicable at some t; only the central value is meaningful there",
        );
    }
    r.header = vec!["t", "range", "central_log2", "e1_lower", "e2_upper", "exact_log2"];
    r.rows = rows;
    Ok(r)
}

fn parse_vertices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("not a vertex label: {x:?}"))))
        .collect()
}

fn cube_structure(a: &CubeStructureArgs) -> Result<Report> {
    if let Some(s) = &a.set {
        let set = VertexSet::from_vertices(a.d, parse_vertices(s)?)?;
        let st = structure_stats(&set)?;
        let mut r = Report::new(to_json(&st)?);
        r.header = vec!["d", "size", "nbhd", "closure", "small", "comps", "max_comp"];
        r.rows = vec![vec![
            st.d.to_string(),
            st.size.to_string(),
            st.nbhd.to_string(),
            st.closure.to_string(),
            st.small.to_string(),
            st.comps.to_string(),
            st.max_comp.to_string(),
        ]];
        return Ok(r);
    }
    if a.scattered {
        let counts = scattered_counts(a.d)?;
        let mut r = Report::new(json!({
            "d": a.d,
            "counts": counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }));
        r.note("d", a.d);
        r.header = vec!["k", "count"];
        r.rows = counts.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.to_string()]).collect();
        return Ok(r);
    }
    let lambda = parse_rational(&a.lambda)?;
    if lambda <= 0 {
        return Err(Error::InvalidParameter("activity must be positive".into()));
    }
    let profile = small_set_profile(a.d)?;
    let total: Integer = profile.all.iter().map(|(_, _, c)| c).sum();
    let linked: Integer = profile.linked.iter().map(|(_, _, c)| c).sum();
    let sum = profile.weight_sum(&lambda);
    let linked_sums: Vec<(usize, Rational)> = [1usize, 2, 6].iter().map(|&k| (k, profile.linked_weight_sum(&lambda, k))).collect();
    let mut r = Report::new(json!({
        "d": a.d,
        "lambda": lambda.to_string(),
        "small_sets": total.to_string(),
        "small_linked_sets": linked.to_string(),
        "weight_sum": sum.to_string(),
        "linked_weight_sums": linked_sums.iter().map(|(k, v)| json!({"k": k, "sum": v.to_string()})).collect::<Vec<_>>(),
        "profile": profile.all.iter().map(|(a, g, c)| json!([a, g, c.to_string()])).collect::<Vec<_>>(),
    }));
    r.note("d", a.d);
    r.note("lambda", &lambda);
    r.note("small sets", &total);
    r.note("small 2-linked sets", &linked);
    r.note("weight sum", fmt_float(&Float::with_val(DEFAULT_PRECISION, &sum)));
    for (k, v) in &linked_sums {
        r.note(&format!("linked weight sum, |A| >= {k}"), fmt_float(&Float::with_val(DEFAULT_PRECISION, v)));
    }
    r.header = vec!["size", "nbhd", "count"];
    r.rows = profile.all.iter().map(|(a, g, c)| vec![a.to_string(), g.to_string(), c.to_string()]).collect();
    Ok(r)
}

fn transition(a: &TransitionArgs) -> Result<Report> {
    if a.d < 2 || a.d > 63 {
        return Err(Error::InvalidParameter(format!("dimension {} outside 2..=63", a.d)));
    }
    let n = 1u64 << (a.d - 1);
    let exact = if a.d <= MAX_EXACT_CUBE { Some(exact_cube(a.d)?) } else { None };
    let ts: Vec<u64> = match a.t {
        Some(t) if t > n => return Err(Error::InvalidParameter(format!("t = {t} exceeds 2^(d-1) = {n}"))),
        Some(t) => vec![t],
        None if exact.is_some() => (0..=n).collect(),
        None => vec![n / 2],
    };
    let mut rows_json = Vec::new();
    let mut rows = Vec::new();
    for &t in &ts {
        let g = transition_g(a.d, &Integer::from(t));
        let limit = transition_limit(&g);
        let ratio_log2 = match &exact {
            Some(seq) => Some(transition_ratio(a.d, t, &seq.get(t as usize))?),
            None => None,
        };
        let ratio = ratio_log2.as_ref().map(|l| Float::with_val(DEFAULT_PRECISION, l.exp2_ref()));
        rows_json.push(json!({
            "t": t,
            "g": g.to_string(),
            "predicted_limit": fmt_float(&limit),
            "ratio_log2": ratio_log2.as_ref().map(fmt_float),
            "ratio": ratio.as_ref().map(fmt_float),
        }));
        rows.push(vec![
            t.to_string(),
            g.to_string(),
            fmt_float(&limit),
            opt_float(&ratio_log2),
            opt_float(&ratio),
        ]);
    }
    let mut r = Report::new(json!({ "d": a.d, "rows": rows_json }));
    r.note("d", a.d);
    if exact.is_none() {
        r.note("exact ratio", format!("not computed above d = {MAX_EXACT_CUBE}"));
    }
    r.header = vec!["t", "g", "predicted_limit", "ratio_log2", "ratio"];
    r.rows = rows;
    Ok(r)
}

fn percolate(ctx: &Context, a: &PercolateArgs) -> Result<Report> {
    let base: GraphFamily = a.base.parse()?;
    let p = parse_rational(&a.p)?;
    let eps = parse_rational(&a.epsilon)?;
    let rule: SRule = a.s_rule.parse()?;
    let mut cfg = PercolationConfig::new(base, p, a.seed, a.trials);
    cfg.workers = ctx.workers;
    let summary = run_experiment(&cfg, &eps, rule)?;
    let mut r = Report::new(to_json(&summary)?);
    r.note("base", &summary.base);
    r.note("p", &summary.p);
    r.note("seed", summary.seed);
    r.note("epsilon", &summary.epsilon);
    r.note("s rule", &summary.s_rule);
    r.note("d'", format!("{} ({})", summary.d_prime, summary.d_prime_rule));
    r.note("successes", format!("{} / {}", summary.successes, summary.trials));
    r.note("success rate", &summary.success_rate);
    r.header = vec!["trial", "edges", "alpha", "h", "s", "holds"];
    r.rows = summary
        .per_trial
        .iter()
        .map(|t| {
            vec![
                t.stream.to_string(),
                t.edges.to_string(),
                t.alpha.to_string(),
                t.h_value.to_string(),
                t.s.to_string(),
                t.holds.to_string(),
            ]
        })
        .collect();
    Ok(r)
}

fn verify(a: &VerifyArgs) -> Result<Report> {
    let suite: Suite = a.suite.parse()?;
    let outcomes = run_suite(suite);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let mut r = Report::new(json!({
        "suite": a.suite,
        "passed": passed,
        "total": outcomes.len(),
        "criteria": to_json(&outcomes)?,
    }));
    r.failed = passed != outcomes.len();
    r.note("suite", &a.suite);
    r.note("passed", format!("{passed} / {}", outcomes.len()));
    r.header = vec!["id", "status", "criterion", "detail"];
    r.rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.id.to_string(),
                if o.passed { "PASS" } else { "FAIL" }.to_string(),
                o.title.to_string(),
                o.detail.clone(),
            ]
        })
        .collect();
    Ok(r)
}
