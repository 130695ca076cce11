//! The `sachs` command line: per-graph queries, per-`(n, m)` searches,
//! range verification and fuzzing.
//!
//! Exit codes: 0 success, 1 discrepancy or violation found, 2 usage error,
//! 3 input error, 4 scale error. Data goes to stdout (or `--out`), the
//! human summary to stderr.

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use sachs_core::coefficients::{
    count_2_matchings, count_short_cycles, SACHS_MAX_N as SACHS_ENUM_MAX_N,
};
use sachs_core::compression::{
    audit_corner_theorem, audit_vertex_compression, cell_edge, compress, corner_matching_count,
    corner_move_record, corner_sets, free_matchings_through, legal_moves,
};
use sachs_core::difference::find_induced_p5;
use sachs_core::partition::{objective, solve, RowSumVector};
use sachs_core::random::{random_connected_bipartite, random_graph, rng};
use sachs_core::search::{
    search_cell, verify_range, SearchConfig, SearchMode, SearchReport, VerifyOutcome,
    DEFAULT_EXHAUSTIVE_MAX_N,
};
use sachs_core::{
    a4_by_blocks, a4_by_char_matrix, a4_by_row_sums, a4_fast, characteristic_matrix,
    charpoly_coefficients, count_matchings, difference_complement, eigenvector_of, is_difference,
    is_difference_by_p5, realize, sachs_coefficient, young_matrix, Error, Graph, GraphFormat,
    VertexEigenvector, YoungMatrix,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISCREPANCY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_SCALE: i32 = 4;

/// Environment variable overriding the exhaustive-enumeration bound.
pub const MAX_N_ENV: &str = "SACHS_MAX_N";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    /// Data section; empty when written to `--out`.
    pub stdout: String,
    /// Human-readable summary or error message.
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "sachs",
    version,
    about = "Exact a4 combinatorics of connected bipartite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic-polynomial coefficients of a graph.
    Coeffs(CoeffsArgs),
    /// a4 together with its 2-matching and quadrangle counts.
    A4(A4Args),
    /// Matching counts m_0..m_k.
    Matchings(MatchingsArgs),
    /// Difference-graph structure and the three structural a4 formulas.
    Difference(DifferenceArgs),
    /// Vertex compression G_{u->v} with its audit.
    Compress(CompressArgs),
    /// Young-matrix corners and corner moves, or the full corner audit.
    Corners(CornersArgs),
    /// Minimal a4 over connected bipartite (n, m)-graphs.
    Search(SearchArgs),
    /// The row-sum program for (n, m), or the objective of one vector.
    Partition(PartitionArgs),
    /// Search every feasible (n, m) in a range and audit the closed forms.
    Verify(VerifyArgs),
    /// Seeded random checks of compression and coefficient identities.
    Fuzz(FuzzArgs),
}

#[derive(Args, Debug)]
struct GraphInput {
    /// Graph file, or `-` for stdin.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "edgelist")]
    format: String,
}

#[derive(Args, Debug, Default)]
struct Output {
    /// Write data here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON output (the default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// CSV output where supported.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[command(flatten)]
    input: GraphInput,
    /// charpoly, sachs or both.
    #[arg(long, default_value = "both")]
    method: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct A4Args {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct MatchingsArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Largest matching size reported (default: ⌊n/2⌋).
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct DifferenceArgs {
    /// Vertex eigenvector, e.g. "2,2;1,1".
    #[arg(long, conflicts_with_all = ["rows", "graph"])]
    ev: Option<String>,
    /// Young-matrix row sums, e.g. "2,2,1,1".
    #[arg(long, conflicts_with = "graph")]
    rows: Option<String>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value = "edgelist")]
    format: String,
    /// Also report the difference complement at this index.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CompressArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
    /// Largest matching size compared.
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CornersArgs {
    /// Young-matrix row sums, e.g. "3,1,1".
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    rows: Option<String>,
    /// Audit every Young matrix with h + r_1 ≤ n.
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// brute, difference, partition or all.
    #[arg(long, default_value = "all")]
    mode: String,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    #[arg(long, requires = "m", required_unless_present = "rows")]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, conflicts_with_all = ["n", "m"])]
    rows: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value = "all")]
    mode: String,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    timing: bool,
    /// Stop starting new cells after this many milliseconds.
    #[arg(long)]
    time_budget_ms: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    #[arg(long)]
    seed: u64,
    /// compression or coefficients.
    #[arg(long, default_value = "compression")]
    kind: String,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Largest order drawn.
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Input(String),
    Scale(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Input(_) => EXIT_INPUT,
            Failure::Scale(_) => EXIT_SCALE,
            Failure::Core(e) if e.is_scale() => EXIT_SCALE,
            Failure::Core(Error::Internal(_)) => EXIT_DISCREPANCY,
            Failure::Core(_) => EXIT_INPUT,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Scale(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

/// What a subcommand produced: the data document, its exit code, and a
/// one-line summary.
struct Produced {
    data: String,
    code: i32,
    summary: String,
}

type Outcome = std::result::Result<Produced, Failure>;

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandOutcome {
                    exit_code: code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CommandOutcome {
                    exit_code: code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let (result, out) = dispatch(cli.command);
    match result {
        Ok(p) => {
            let mut stdout = String::new();
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &p.data) {
                    return CommandOutcome {
                        exit_code: EXIT_INPUT,
                        stdout,
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    };
                }
            } else {
                stdout = p.data;
            }
            CommandOutcome {
                exit_code: p.code,
                stdout,
                stderr: format!("{}\n", p.summary),
            }
        }
        Err(f) => CommandOutcome {
            exit_code: f.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message()),
        },
    }
}

fn dispatch(cmd: Command) -> (Outcome, Option<PathBuf>) {
    match cmd {
        Command::Coeffs(a) => {
            let out = a.output.out.clone();
            (coeffs(a), out)
        }
        Command::A4(a) => {
            let out = a.output.out.clone();
            (a4(a), out)
        }
        Command::Matchings(a) => {
            let out = a.output.out.clone();
            (matchings(a), out)
        }
        Command::Difference(a) => {
            let out = a.output.out.clone();
            (difference(a), out)
        }
        Command::Compress(a) => {
            let out = a.output.out.clone();
            (compress_cmd(a), out)
        }
        Command::Corners(a) => {
            let out = a.output.out.clone();
            (corners(a), out)
        }
        Command::Search(a) => {
            let out = a.output.out.clone();
            (search(a), out)
        }
        Command::Partition(a) => {
            let out = a.output.out.clone();
            (partition(a), out)
        }
        Command::Verify(a) => {
            let out = a.output.out.clone();
            (verify(a), out)
        }
        Command::Fuzz(a) => {
            let out = a.output.out.clone();
            (fuzz(a), out)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable report");
    s.push('\n');
    s
}

fn produced(value: &impl Serialize, code: i32, summary: String) -> Outcome {
    Ok(Produced {
        data: to_json(value),
        code,
        summary,
    })
}

fn no_csv(output: &Output, command: &str) -> std::result::Result<(), Failure> {
    if output.csv {
        Err(Failure::Usage(format!("{command} has no CSV output")))
    } else {
        Ok(())
    }
}

fn read_text(path: &PathBuf) -> std::result::Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Input(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
    }
}

fn parse_format(s: &str) -> std::result::Result<GraphFormat, Failure> {
    GraphFormat::from_str(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn load_graph(path: &PathBuf, format: &str) -> std::result::Result<Graph, Failure> {
    let format = parse_format(format)?;
    Ok(Graph::parse(&read_text(path)?, format)?)
}

fn parse_mode(s: &str) -> std::result::Result<SearchMode, Failure> {
    SearchMode::from_str(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_arg<T: FromStr<Err = Error>>(s: &str) -> std::result::Result<T, Failure> {
    s.parse().map_err(Failure::Core)
}

/// Exhaustive bound from the environment, defaulting to 10.
fn exhaustive_max_n() -> std::result::Result<usize, Failure> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{MAX_N_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_EXHAUSTIVE_MAX_N),
    }
}

fn with_jobs<T: Send>(
    jobs: usize,
    f: impl FnOnce() -> T + Send,
) -> std::result::Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}

fn big_number(b: &impl std::fmt::Display) -> Value {
    Value::Number(serde_json::Number::from_str(&b.to_string()).expect("decimal integer"))
}

fn coeffs(a: CoeffsArgs) -> Outcome {
    no_csv(&a.output, "coeffs")?;
    let g = load_graph(&a.input.graph, &a.input.format)?;
    let (want_charpoly, want_sachs) = match a.method.as_str() {
        "charpoly" => (true, false),
        "sachs" => (false, true),
        "both" => (true, true),
        other => return Err(Failure::Usage(format!("unknown method {other:?}"))),
    };
    if a.method == "sachs" && g.n() > SACHS_ENUM_MAX_N {
        return Err(Failure::Scale(format!(
            "Sachs enumeration is limited to n ≤ {SACHS_ENUM_MAX_N}, got n = {}",
            g.n()
        )));
    }
    let charpoly = want_charpoly.then(|| charpoly_coefficients(&g));
    let sachs: Option<Vec<i64>> = if want_sachs && g.n() <= SACHS_ENUM_MAX_N {
        Some(
            (0..=g.n())
                .map(|i| sachs_coefficient(&g, i))
                .collect::<sachs_core::Result<_>>()?,
        )
    } else {
        None
    };
    let agree = match (&charpoly, &sachs) {
        (Some(c), Some(s)) => Some(s.iter().enumerate().all(|(i, &v)| c.get_i64(i) == Some(v))),
        _ => None,
    };
    let value = json!({
        "n": g.n(),
        "m": g.m(),
        "charpoly": charpoly.as_ref().map(|c| c.as_slice().iter().map(big_number).collect::<Vec<_>>()),
        "sachs": sachs,
        "agree": agree,
    });
    let code = if agree == Some(false) {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    };
    let summary = match agree {
        Some(true) => format!(
            "coefficients of a graph on {} vertices; both methods agree",
            g.n()
        ),
        Some(false) => "coefficient methods DISAGREE".to_string(),
        None => format!("coefficients of a graph on {} vertices", g.n()),
    };
    produced(&value, code, summary)
}

#[derive(Serialize)]
struct A4Report {
    a4: i64,
    m2: u64,
    c4: u64,
}

fn a4(a: A4Args) -> Outcome {
    no_csv(&a.output, "a4")?;
    let g = load_graph(&a.input.graph, &a.input.format)?;
    let report = A4Report {
        a4: a4_fast(&g),
        m2: count_2_matchings(&g),
        c4: count_short_cycles(&g).c4,
    };
    let summary = format!(
        "a4 = {} (m2 = {}, c4 = {})",
        report.a4, report.m2, report.c4
    );
    produced(&report, EXIT_OK, summary)
}

fn matchings(a: MatchingsArgs) -> Outcome {
    no_csv(&a.output, "matchings")?;
    let g = load_graph(&a.input.graph, &a.input.format)?;
    let k_max = a.k.unwrap_or(g.n() / 2);
    let counts: Vec<Value> = (0..=k_max)
        .map(|k| json!({"k": k, "count": count_matchings(&g, k)}))
        .collect();
    let value = json!({"n": g.n(), "m": g.m(), "matchings": counts});
    produced(
        &value,
        EXIT_OK,
        format!("matching counts up to k = {k_max}"),
    )
}

#[derive(Serialize)]
struct FormulaValues {
    blocks: i64,
    char_matrix: i64,
    row_sums: i64,
    graph: i64,
}

#[derive(Serialize)]
struct EigenvectorReport {
    eigenvector: VertexEigenvector,
    canonical: VertexEigenvector,
    order: usize,
    size: usize,
    character: usize,
    young_rows: YoungMatrix,
    characteristic_matrix: Vec<Vec<u64>>,
    a4: FormulaValues,
    agree: bool,
    complement: Option<VertexEigenvector>,
    edge_list: String,
}

fn eigenvector_report(
    ev: &VertexEigenvector,
    k: Option<usize>,
) -> sachs_core::Result<EigenvectorReport> {
    let g = realize(ev)?;
    let a4 = FormulaValues {
        blocks: a4_by_blocks(ev),
        char_matrix: a4_by_char_matrix(ev),
        row_sums: a4_by_row_sums(&young_matrix(ev)),
        graph: a4_fast(&g),
    };
    let agree = a4.blocks == a4.graph && a4.char_matrix == a4.graph && a4.row_sums == a4.graph;
    Ok(EigenvectorReport {
        eigenvector: ev.clone(),
        canonical: ev.canonical(),
        order: ev.order(),
        size: ev.size(),
        character: ev.character(),
        young_rows: young_matrix(ev),
        characteristic_matrix: characteristic_matrix(ev).entries().to_vec(),
        a4,
        agree,
        complement: k.map(|i| difference_complement(ev, i)).transpose()?,
        edge_list: g.to_edge_list(),
    })
}

fn difference(a: DifferenceArgs) -> Outcome {
    no_csv(&a.output, "difference")?;
    if let Some(path) = &a.graph {
        let g = load_graph(path, &a.format)?;
        let chain = is_difference(&g)?;
        let by_p5 = is_difference_by_p5(&g)?;
        let structure = if chain {
            Some(eigenvector_report(&eigenvector_of(&g)?, a.k)?)
        } else {
            None
        };
        let agree = chain == by_p5 && structure.as_ref().is_none_or(|s| s.agree);
        let value = json!({
            "n": g.n(),
            "m": g.m(),
            "difference": chain,
            "difference_by_p5": by_p5,
            "induced_p5": find_induced_p5(&g),
            "structure": structure,
            "agree": agree,
        });
        let summary = if chain {
            format!("difference graph with eigenvector {}", eigenvector_of(&g)?)
        } else {
            "not a difference graph".to_string()
        };
        let code = if agree { EXIT_OK } else { EXIT_DISCREPANCY };
        return produced(&value, code, summary);
    }
    let ev = match (&a.ev, &a.rows) {
        (Some(s), _) => parse_arg::<VertexEigenvector>(s)?,
        (None, Some(r)) => parse_arg::<YoungMatrix>(r)?.eigenvector(),
        (None, None) => {
            return Err(Failure::Usage(
                "one of --ev, --rows or --graph is required".into(),
            ))
        }
    };
    let report = eigenvector_report(&ev, a.k)?;
    let code = if report.agree {
        EXIT_OK
    } else {
        EXIT_DISCREPANCY
    };
    let summary = format!(
        "{}: n = {}, m = {}, a4 = {}{}",
        ev,
        report.order,
        report.size,
        report.a4.graph,
        if report.agree {
            ""
        } else {
            " (formulas DISAGREE)"
        }
    );
    produced(&report, code, summary)
}

fn compress_cmd(a: CompressArgs) -> Outcome {
    no_csv(&a.output, "compress")?;
    let g = load_graph(&a.input.graph, &a.input.format)?;
    let h = compress(&g, a.from, a.to)?;
    let audit = audit_vertex_compression(&g, a.from, a.to, a.k)?;
    let code = if audit.violations.any() {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    };
    let summary = format!(
        "compressed {} -> {}: a4 {} -> {}{}",
        a.from,
        a.to,
        audit.a4_before,
        audit.a4_after,
        if audit.violations.any() {
            " (VIOLATION)"
        } else {
            ""
        }
    );
    let value = json!({"audit": audit, "compressed": h.to_edge_list()});
    produced(&value, code, summary)
}

fn corners(a: CornersArgs) -> Outcome {
    no_csv(&a.output, "corners")?;
    if let Some(n) = a.n {
        let audit = audit_corner_theorem(n)?;
        let s = &audit.summary;
        let summary = format!(
            "{} instances, {} moves; failures: forward {}, converse {}, strict {}, identity {}; {} two-move sequences, {} without a strict drop",
            s.instances, s.moves, s.forward_failures, s.converse_failures, s.strict_failures,
            s.identity_failures, s.sequences, s.sequence_failures
        );
        return produced(&audit, EXIT_OK, summary);
    }
    let y: YoungMatrix = parse_arg(a.rows.as_deref().expect("clap requires --rows or --n"))?;
    let g = y.realize()?;
    let sets = corner_sets(&y);
    let moves = legal_moves(&y)
        .into_iter()
        .map(|(o, i)| corner_move_record(&y, o, i))
        .collect::<sachs_core::Result<Vec<_>>>()?;
    let mut counts_agree = true;
    let counts = sets
        .out_corners
        .iter()
        .map(|&c| {
            let formula = corner_matching_count(&y, c)?;
            let direct = free_matchings_through(&g, cell_edge(&y, c))? as i64;
            counts_agree &= formula == direct;
            Ok(json!({"corner": c, "formula": formula, "direct": direct}))
        })
        .collect::<sachs_core::Result<Vec<_>>>()?;
    let value = json!({
        "rows": y,
        "a4": a4_by_row_sums(&y),
        "corners": sets,
        "matching_counts": counts,
        "moves": moves,
    });
    let code = if counts_agree {
        EXIT_OK
    } else {
        EXIT_DISCREPANCY
    };
    produced(
        &value,
        code,
        format!("{} legal corner moves on {y}", moves.len()),
    )
}

#[derive(Serialize)]
struct CsvRow {
    n: usize,
    m: usize,
    min_a4: Option<i64>,
    brute_min: Option<i64>,
    difference_min: Option<i64>,
    partition_min: Option<i64>,
    paper_case: &'static str,
    paper_value: Option<i64>,
    derived_value: Option<i64>,
    discrepancy: bool,
    t46: bool,
    t47: bool,
    witnesses: usize,
    difference_witnesses: usize,
    timing_ms: Option<u64>,
}

impl From<&SearchReport> for CsvRow {
    fn from(r: &SearchReport) -> Self {
        CsvRow {
            n: r.n,
            m: r.m,
            min_a4: r.min_a4,
            brute_min: r.brute_min,
            difference_min: r.difference_min,
            partition_min: r.partition.as_ref().and_then(|p| p.min),
            paper_case: r.paper_case.tag(),
            paper_value: r.paper_value,
            derived_value: r.derived_value,
            discrepancy: r.discrepancy,
            t46: r.structural.t46,
            t47: r.structural.t47,
            witnesses: r.witnesses.len(),
            difference_witnesses: r.difference_witnesses.len(),
            timing_ms: r.timing_ms,
        }
    }
}

fn csv_rows<'a>(
    reports: impl IntoIterator<Item = &'a SearchReport>,
) -> std::result::Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(CsvRow::from(r))
            .map_err(|e| Failure::Input(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn search_config(mode: &str, timing: bool) -> std::result::Result<SearchConfig, Failure> {
    Ok(SearchConfig {
        mode: parse_mode(mode)?,
        max_exhaustive_n: exhaustive_max_n()?,
        record_timing: timing,
    })
}

fn search(a: SearchArgs) -> Outcome {
    let cfg = search_config(&a.mode, a.timing)?;
    let report = with_jobs(a.jobs, || search_cell(a.n, a.m, &cfg))??;
    let summary = format!(
        "({}, {}): min a4 = {}, published {} ({}){}",
        a.n,
        a.m,
        fmt_opt(report.min_a4),
        fmt_opt(report.paper_value),
        report.paper_case.tag(),
        if report.discrepancy {
            ", DISCREPANCY"
        } else {
            ""
        }
    );
    let data = if a.output.csv {
        csv_rows([&report])?
    } else {
        to_json(&report)
    };
    Ok(Produced {
        data,
        code: EXIT_OK,
        summary,
    })
}

fn fmt_opt(v: Option<i64>) -> String {
    v.map_or("none".to_string(), |v| v.to_string())
}

fn partition(a: PartitionArgs) -> Outcome {
    no_csv(&a.output, "partition")?;
    if let Some(rows) = &a.rows {
        let r: RowSumVector = parse_arg(rows)?;
        let ev = r.young_matrix().eigenvector();
        let value = json!({
            "rows": r,
            "order": r.order(),
            "size": r.sum(),
            "objective": objective(&r),
            "eigenvector": ev,
        });
        return produced(
            &value,
            EXIT_OK,
            format!("objective({r}) = {}", objective(&r)),
        );
    }
    let (n, m) = (
        a.n.expect("clap requires --n"),
        a.m.expect("clap requires --m"),
    );
    let s = solve(n, m);
    let summary = match s.min {
        Some(v) => format!("({n}, {m}): minimum {v} over {} candidates", s.candidates),
        None => format!("({n}, {m}): infeasible"),
    };
    produced(&s, EXIT_OK, summary)
}

fn verify(a: VerifyArgs) -> Outcome {
    let cfg = search_config(&a.mode, a.timing)?;
    let budget = a.time_budget_ms.map(Duration::from_millis);
    let outcome: VerifyOutcome =
        with_jobs(a.jobs, || verify_range(a.n_min, a.n_max, &cfg, budget))??;
    let flagged: Vec<String> = outcome
        .reports
        .iter()
        .filter(|r| r.discrepancy)
        .map(|r| format!("({},{})", r.n, r.m))
        .collect();
    let mut summary = format!(
        "verified {} cells for n in {}..={}: {} with discrepancies",
        outcome.reports.len(),
        a.n_min,
        a.n_max,
        flagged.len()
    );
    if !flagged.is_empty() {
        summary.push_str(&format!(" [{}]", flagged.join(" ")));
    }
    if outcome.truncated {
        summary.push_str(&format!(
            "; TRUNCATED, {} cells skipped",
            outcome.skipped_cells.len()
        ));
    }
    if !outcome.block_inequality.failures.is_empty() {
        summary.push_str(&format!(
            "; block inequality fails in {} cases",
            outcome.block_inequality.failures.len()
        ));
    }
    let code = if outcome.discrepancy() {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    };
    let data = if a.output.csv {
        csv_rows(&outcome.reports)?
    } else {
        to_json(&outcome)
    };
    Ok(Produced {
        data,
        code,
        summary,
    })
}

const FUZZ_EXAMPLES: usize = 20;

fn fuzz(a: FuzzArgs) -> Outcome {
    no_csv(&a.output, "fuzz")?;
    if a.n < 2 || a.n > 64 {
        return Err(Failure::Usage(format!(
            "--n must lie in 2..=64, got {}",
            a.n
        )));
    }
    let mut r = rng(a.seed);
    let mut violations = 0usize;
    let mut examples = Vec::new();
    match a.kind.as_str() {
        "compression" => {
            for _ in 0..a.count {
                let n = r.gen_range(2..=a.n);
                let p = r.gen_range(0.1..0.9);
                let g = random_connected_bipartite(&mut r, n, p);
                let u = r.gen_range(0..n);
                let v = (u + r.gen_range(1..n)) % n;
                let audit = audit_vertex_compression(&g, u, v, 4)?;
                if audit.violations.any() {
                    violations += 1;
                    if examples.len() < FUZZ_EXAMPLES {
                        examples.push(json!({"graph": g.to_edge_list(), "audit": audit}));
                    }
                }
            }
        }
        "coefficients" => {
            if a.n > SACHS_ENUM_MAX_N {
                return Err(Failure::Scale(format!(
                    "coefficient fuzzing enumerates Sachs subgraphs, n ≤ {SACHS_ENUM_MAX_N}"
                )));
            }
            for _ in 0..a.count {
                let n = r.gen_range(2..=a.n);
                let p = r.gen_range(0.1..0.9);
                let g = random_graph(&mut r, n, p);
                let c = charpoly_coefficients(&g);
                let mut bad = Vec::new();
                for i in 0..=n {
                    if c.get_i64(i) != Some(sachs_coefficient(&g, i)?) {
                        bad.push(i);
                    }
                }
                if n >= 4 && c.get_i64(4) != Some(a4_fast(&g)) {
                    bad.push(4);
                }
                if !bad.is_empty() {
                    violations += 1;
                    if examples.len() < FUZZ_EXAMPLES {
                        examples.push(json!({"graph": g.to_edge_list(), "indices": bad}));
                    }
                }
            }
        }
        other => return Err(Failure::Usage(format!("unknown fuzz kind {other:?}"))),
    }
    let value = json!({
        "kind": a.kind,
        "seed": a.seed,
        "count": a.count,
        "n_max": a.n,
        "violations": violations,
        "examples": examples,
    });
    let code = if violations > 0 {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    };
    produced(
        &value,
        code,
        format!("{} {} cases, {violations} violations", a.count, a.kind),
    )
}
