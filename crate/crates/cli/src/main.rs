//! Command-line front end. Exit codes: 0 success, 1 property refuted or
//! configuration found, 2 usage or input error, 3 node budget exhausted
//! (partial result still printed).

use berge::{
    balanced_3partite, certify_extremal, check_toomany, discrepancy_report, find_berge,
    graph_max_edges, max_edges, BergeEmbedding, CertificationRecord, DetectMode, ForbiddenSpec,
    PatternGraph, SearchConfig, SearchError, SearchResult, TraceMultigraph, TripleSystem, Witness,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "berge", version, about = "Berge-K4-free triple systems: construction, detection, trace analysis and certified extremal search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the balanced 3-partite system on n vertices.
    Construct(ConstructArgs),
    /// Search a system for a Berge copy of a pattern; finding one exits 1.
    Detect(DetectArgs),
    /// Print the trace multigraph of a system over a core set.
    Trace(TraceArgs),
    /// Exhaustively maximize the number of edges avoiding a forbidden spec.
    Extremal(ExtremalArgs),
    /// Certify a claimed extremal value; a refuted claim exits 1.
    Certify(CertifyArgs),
    /// Check the threshold polynomial and report difference-table gaps.
    Inequality(InequalityArgs),
    /// Recompute the certified value table.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PatternArg {
    K3,
    K4,
}

impl PatternArg {
    fn graph(self) -> PatternGraph {
        match self {
            PatternArg::K3 => PatternGraph::k3(),
            PatternArg::K4 => PatternGraph::k4(),
        }
    }

    fn clique_order(self) -> usize {
        match self {
            PatternArg::K3 => 3,
            PatternArg::K4 => 4,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Any,
    NonExpansion,
}

impl From<ModeArg> for DetectMode {
    fn from(m: ModeArg) -> DetectMode {
        match m {
            ModeArg::Any => DetectMode::Any,
            ModeArg::NonExpansion => DetectMode::NonExpansion,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpecArg {
    Berge,
    BergeMinusExpansion,
    GraphClique,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DetectArgs {
    /// Input file in the text format; `-` reads standard input.
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value_t = PatternArg::K4)]
    pattern: PatternArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Any)]
    mode: ModeArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, default_value = "-")]
    input: String,
    /// Core vertices, comma separated, e.g. `--core 0,2,4`.
    #[arg(long, value_delimiter = ',', required = true)]
    core: Vec<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExtremalArgs {
    /// Vertex count of the triple system (or of the graph for graph-clique).
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = SpecArg::Berge)]
    spec: SpecArg,
    /// Forbidden pattern; for graph-clique this picks the clique order.
    #[arg(long, value_enum, default_value_t = PatternArg::K4)]
    pattern: PatternArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    node_budget: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = SpecArg::Berge)]
    spec: SpecArg,
    #[arg(long, value_enum, default_value_t = PatternArg::K4)]
    pattern: PatternArg,
    /// The extremal value the run must confirm.
    #[arg(long)]
    claimed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    node_budget: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct InequalityArgs {
    /// Largest n checked and reported.
    #[arg(long, default_value_t = 300)]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Skip the n = 7 Berge-K4 certification.
    #[arg(long)]
    fast: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes early, like `| head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Detect(a) => cmd_detect(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Extremal(a) => cmd_extremal(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Inequality(a) => cmd_inequality(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    outcome.unwrap_or_else(|message| {
        eprintln!("error: {message}");
        ExitCode::from(2)
    })
}

type Outcome = Result<ExitCode, String>;

fn read_system(path: &str) -> Result<TripleSystem, String> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading standard input: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?
    };
    TripleSystem::parse(&text).map_err(|e| e.to_string())
}

fn search_config(workers: usize, node_budget: Option<u64>) -> SearchConfig {
    SearchConfig { workers, node_budget, ..SearchConfig::default() }
}

fn forbidden(spec: SpecArg, pattern: PatternArg) -> ForbiddenSpec {
    match spec {
        SpecArg::Berge => ForbiddenSpec::BergePattern(pattern.graph()),
        SpecArg::BergeMinusExpansion => ForbiddenSpec::BergeMinusExpansion(pattern.graph()),
        SpecArg::GraphClique => ForbiddenSpec::GraphClique(pattern.clique_order()),
    }
}

fn cmd_construct(a: ConstructArgs) -> Outcome {
    let h = balanced_3partite(a.n);
    if a.json {
        println!("{}", serde_json::to_string_pretty(&h).unwrap());
    } else {
        print!("{}", h.serialize());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_detect(a: DetectArgs) -> Outcome {
    let h = read_system(&a.input)?;
    let pattern = a.pattern.graph();
    let mode: DetectMode = a.mode.into();
    match find_berge(&h, &pattern, mode) {
        Some(embedding) => {
            print_embedding(&embedding, pattern.k(), a.json);
            Ok(ExitCode::from(1))
        }
        None => {
            if a.json {
                println!("null");
            } else {
                println!("no Berge copy of K{} (mode: {})", pattern.k(), mode_name(a.mode));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn mode_name(m: ModeArg) -> &'static str {
    match m {
        ModeArg::Any => "any",
        ModeArg::NonExpansion => "non-expansion",
    }
}

fn print_embedding(embedding: &BergeEmbedding, k: usize, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(embedding).unwrap());
        return;
    }
    println!("Berge copy of K{k} found");
    let core: Vec<String> = embedding.core.iter().map(|v| v.to_string()).collect();
    println!("core: {}", core.join(" "));
    for item in &embedding.assignment {
        println!(
            "pair {{{}, {}}} -> triple {{{}, {}, {}}}",
            embedding.core[item.pair[0]],
            embedding.core[item.pair[1]],
            item.triple[0],
            item.triple[1],
            item.triple[2]
        );
    }
}

fn cmd_trace(a: TraceArgs) -> Outcome {
    let h = read_system(&a.input)?;
    let t = TraceMultigraph::from_system(&h, &a.core).map_err(|e| e.to_string())?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&t).unwrap());
        return Ok(ExitCode::SUCCESS);
    }
    let core: Vec<String> = t.core().iter().map(|v| v.to_string()).collect();
    println!(
        "trace over core {{{}}}: {} outer vertices, {} loops, {} links, surplus {}",
        core.join(", "),
        t.outer().len(),
        t.loops().len(),
        t.links().len(),
        t.surplus()
    );
    for l in t.loops() {
        println!("loop at {} labeled {{{}, {}}}", l.vertex, l.label[0], l.label[1]);
    }
    for l in t.links() {
        println!("link {} -- {} labeled {{{}}}", l.u, l.v, l.label[0]);
    }
    println!("simple reduction: {} edges", t.simple_reduction().edge_count());
    for c in t.components() {
        let verts: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
        println!(
            "component {{{}}}: surplus {}{}",
            verts.join(", "),
            c.surplus,
            if c.bad { " (bad)" } else { "" }
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn print_search_result(r: &SearchResult, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(r).unwrap());
        return;
    }
    println!("value: {} (exhausted: {})", r.value, r.exhausted);
    println!(
        "nodes: {}, bound prunes: {}, canonical prunes: {}, wall: {} ms",
        r.stats.nodes, r.stats.bound_prunes, r.stats.canonical_prunes, r.stats.wall_ms
    );
    match &r.witness {
        Witness::Triples(t) => print!("witness:\n{}", t.serialize()),
        Witness::Graph(g) => {
            println!("witness graph on {} vertices, {} edges:", g.n(), g.edge_count());
            for &(u, v) in g.edges() {
                println!("{u} {v}");
            }
        }
    }
}

fn cmd_extremal(a: ExtremalArgs) -> Outcome {
    let cfg = search_config(a.workers, a.node_budget);
    let result = match a.spec {
        SpecArg::GraphClique => graph_max_edges(a.n, a.pattern.clique_order(), &cfg),
        _ => max_edges(a.n, &forbidden(a.spec, a.pattern), &cfg),
    }
    .map_err(|e| e.to_string())?;
    print_search_result(&result, a.json);
    if result.exhausted {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(3))
    }
}

fn cmd_certify(a: CertifyArgs) -> Outcome {
    let cfg = search_config(a.workers, a.node_budget);
    let outcome = match a.spec {
        SpecArg::GraphClique => certify_graph(a.n, a.pattern.clique_order(), a.claimed, &cfg),
        _ => certify_extremal(a.n, &forbidden(a.spec, a.pattern), a.claimed, &cfg),
    };
    match outcome {
        Ok(record) => {
            if a.json {
                println!("{}", serde_json::to_string_pretty(&record).unwrap());
            } else {
                println!(
                    "certified: {} has extremal value {} at n = {} ({} nodes)",
                    record.spec, record.value, record.n, record.nodes
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ (SearchError::RefutedNoWitness { .. } | SearchError::RefutedLargerExists { .. })) => {
            println!("{e}");
            Ok(ExitCode::from(1))
        }
        Err(e @ SearchError::BudgetExhausted { .. }) => {
            println!("{e}");
            Ok(ExitCode::from(3))
        }
        Err(e) => Err(e.to_string()),
    }
}

/// Clique certification mirrors [`certify_extremal`] on the graph searcher.
fn certify_graph(
    m: usize,
    r: usize,
    claimed: u64,
    cfg: &SearchConfig,
) -> Result<CertificationRecord, SearchError> {
    let result = graph_max_edges(m, r, cfg)?;
    if !result.exhausted {
        return Err(SearchError::BudgetExhausted { nodes: result.stats.nodes, best: result.value });
    }
    if result.value > claimed {
        return Err(SearchError::RefutedLargerExists { claimed, actual: result.value });
    }
    if result.value < claimed {
        return Err(SearchError::RefutedNoWitness { claimed, actual: result.value });
    }
    let witness = match &result.witness {
        Witness::Graph(g) => g.edges().iter().map(|&(u, v)| vec![u, v]).collect(),
        Witness::Triples(_) => unreachable!("graph searches produce graph witnesses"),
    };
    Ok(CertificationRecord {
        n: m,
        spec: ForbiddenSpec::GraphClique(r).to_string(),
        value: result.value,
        witness,
        exhausted: true,
        nodes: result.stats.nodes,
        config: cfg.clone(),
    })
}

#[derive(Serialize)]
struct InequalityReport {
    n_max: usize,
    threshold_nonnegative: bool,
    discrepancies: Vec<berge::system::DiffDiscrepancy>,
}

fn cmd_inequality(a: InequalityArgs) -> Outcome {
    let report = InequalityReport {
        n_max: a.n,
        threshold_nonnegative: check_toomany(a.n),
        discrepancies: discrepancy_report(a.n),
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!(
            "threshold polynomial nonnegative on [0, 1] for n in [6, {}]: {}",
            report.n_max,
            if report.threshold_nonnegative { "yes" } else { "NO" }
        );
        println!("difference-table gaps in [1, {}] (n: table vs direct):", report.n_max);
        for d in &report.discrepancies {
            println!("{}: {} vs {}", d.n, d.table, d.direct);
        }
    }
    if report.threshold_nonnegative {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

#[derive(Serialize)]
struct ReproduceRow {
    family: String,
    n: usize,
    expected: u64,
    value: u64,
    exhausted: bool,
    nodes: u64,
    wall_ms: u64,
    ok: bool,
}

fn cmd_reproduce(a: ReproduceArgs) -> Outcome {
    let cfg = search_config(a.workers, None);
    let mut rows: Vec<ReproduceRow> = Vec::new();

    let mut push = |family: String, n: usize, expected: u64, result: SearchResult| {
        rows.push(ReproduceRow {
            family,
            n,
            expected,
            value: result.value,
            exhausted: result.exhausted,
            nodes: result.stats.nodes,
            wall_ms: result.stats.wall_ms,
            ok: result.exhausted && result.value == expected,
        });
    };

    let k4 = ForbiddenSpec::BergePattern(PatternGraph::k4());
    for (n, expected) in [(3u64, 1u64), (4, 4), (5, 5), (6, 8), (7, 12)] {
        if a.fast && n == 7 {
            continue;
        }
        let r = max_edges(n as usize, &k4, &cfg).map_err(|e| e.to_string())?;
        push(k4.to_string(), n as usize, expected, r);
    }

    let k3 = ForbiddenSpec::BergePattern(PatternGraph::k3());
    for (n, expected) in [(3u64, 1u64), (4, 2), (5, 3), (6, 4), (7, 6)] {
        let r = max_edges(n as usize, &k3, &cfg).map_err(|e| e.to_string())?;
        push(k3.to_string(), n as usize, expected, r);
    }

    let minus = ForbiddenSpec::BergeMinusExpansion(PatternGraph::k4());
    let r = max_edges(6, &minus, &cfg).map_err(|e| e.to_string())?;
    push(minus.to_string(), 6, 8, r);

    for m in 4..=8usize {
        let r = graph_max_edges(m, 4, &cfg).map_err(|e| e.to_string())?;
        push(ForbiddenSpec::GraphClique(4).to_string(), m, (m * m / 3) as u64, r);
    }

    let all_ok = rows.iter().all(|r| r.ok);
    if a.json {
        println!("{}", serde_json::to_string_pretty(&rows).unwrap());
    } else {
        println!(
            "{:<28} {:>3} {:>9} {:>6} {:>10} {:>8}  ok",
            "family", "n", "expected", "value", "nodes", "ms"
        );
        for r in &rows {
            println!(
                "{:<28} {:>3} {:>9} {:>6} {:>10} {:>8}  {}",
                r.family,
                r.n,
                r.expected,
                r.value,
                r.nodes,
                r.wall_ms,
                if r.ok { "ok" } else { "MISMATCH" }
            );
        }
        println!("{}", if all_ok { "all values certified" } else { "MISMATCH detected" });
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
