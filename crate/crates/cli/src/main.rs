mod report;

use std::io::{self, BufWriter, Read, Write};
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use trireg::constructions::{ConstructionRecipe, Recipe};
use trireg::enumeration::{enumerate_regular, for_each_regular, EnumSpec, DEFAULT_ENUM_CAP, HARD_ENUM_CAP};
use trireg::feasibility::{admissibility_table, classify, Verdict};
use trireg::formats::{decode_edge_list, decode_graph6, encode_edge_list, encode_graph6, GraphFormat};
use trireg::search::{run_search, SearchConfig, SearchStatus};
use trireg::Graph;

use report::*;

#[derive(Parser)]
#[command(name = "trireg", version, about = "Regular graphs with regular triangle degree")]
struct Cli {
    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    G6,
    El,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Report degrees, triangle degrees and connectivity of a graph file ("-" for stdin).
    Check {
        file: PathBuf,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Classify a parameter pair.
    Classify { r2: usize, r3: usize },
    /// Render the admissibility grid.
    Table {
        #[arg(long, default_value_t = 8)]
        max_r2: usize,
        #[arg(long, default_value_t = 17)]
        max_r3: usize,
        #[arg(long, value_enum, default_value = "md")]
        format: TableFormat,
    },
    /// Hill-climb over 2-switches towards a graph with the given parameters.
    Search {
        r2: usize,
        r3: usize,
        /// Vertex count; without it, feasible counts are scanned upwards.
        #[arg(long, conflicts_with = "n_scan")]
        n: Option<usize>,
        /// Scan vertex counts explicitly; same as omitting --n.
        #[arg(long)]
        n_scan: bool,
        /// Largest vertex count tried when scanning (default 4 (r2 + 1)).
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value_t = trireg::search::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = trireg::search::DEFAULT_MAX_ITERATIONS)]
        iters: u64,
        #[arg(long, default_value_t = trireg::search::DEFAULT_RESTARTS)]
        restarts: u32,
        #[arg(long, default_value_t = trireg::search::DEFAULT_PLATEAU_LIMIT)]
        plateau: u64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print one graph6 line per isomorphism class of r2-regular graphs on n vertices.
    Enumerate {
        n: usize,
        r2: usize,
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        r3: Option<usize>,
        #[arg(long)]
        limit: Option<usize>,
        /// Raise the vertex cap from 12 to 14.
        #[arg(long)]
        allow_large: bool,
    },
    /// Evaluate a recipe such as "K5 x K3" or "T6,3 x (K2 x K2)".
    Construct { expr: String },
    /// Convert graphs between graph6 and edge-list text on stdin/stdout.
    Convert {
        #[arg(long)]
        from: Option<Format>,
        #[arg(long)]
        to: Option<Format>,
    },
}

enum Failure {
    Usage(String),
    Domain(trireg::Error),
    Io(io::Error),
}

impl From<trireg::Error> for Failure {
    fn from(e: trireg::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// `true`: success or affirmative answer (exit 0); `false`: negative answer (exit 1).
type Outcome = Result<bool, Failure>;

fn print_json<T: Serialize>(out: &mut impl Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

fn read_input(path: &PathBuf) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

/// Edge lists start with a line of two integers; anything else is graph6.
fn detect(text: &str) -> Format {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(line) if line.split_whitespace().all(|t| t.parse::<usize>().is_ok()) => Format::El,
        _ => Format::G6,
    }
}

fn decode_all(text: &str, format: Format) -> trireg::Result<Vec<Graph>> {
    match format {
        Format::El => Ok(vec![decode_edge_list(text)?]),
        Format::G6 => text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(decode_graph6)
            .collect(),
    }
}

fn histogram_line(h: &std::collections::BTreeMap<usize, usize>) -> String {
    h.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ")
}

fn check(json: bool, out: &mut impl Write, file: &PathBuf, format: Option<Format>) -> Outcome {
    let text = read_input(file)?;
    let format = format.unwrap_or_else(|| detect(&text));
    let graphs = decode_all(&text, format)?;
    let g = match graphs.as_slice() {
        [g] => g,
        [] => return Err(trireg::Error::FormatError("no graph in input".into()).into()),
        _ => return Err(trireg::Error::FormatError("expected exactly one graph".into()).into()),
    };
    let rep = CheckReport::new(g)?;
    let ok = rep.parameters.is_some();
    if json {
        print_json(out, &rep)?;
    } else {
        writeln!(out, "vertices: {}", rep.n)?;
        writeln!(out, "edges: {}", rep.edges)?;
        writeln!(out, "degrees: {}", histogram_line(&rep.degree_histogram))?;
        writeln!(out, "triangle degrees: {}", histogram_line(&rep.triangle_degree_histogram))?;
        writeln!(out, "connected: {}", if rep.connected { "yes" } else { "no" })?;
        match rep.parameters {
            Some(p) => writeln!(out, "parameters: {p}")?,
            None => writeln!(out, "parameters: none (not regular K3-regular)")?,
        }
    }
    Ok(ok)
}

fn classify_cmd(json: bool, out: &mut impl Write, r2: usize, r3: usize) -> Outcome {
    let verdict = classify(r2, r3);
    if json {
        print_json(out, &ClassifyReport::new(r2, r3, &verdict))?;
    } else {
        match &verdict {
            Verdict::Forbidden(rule) => writeln!(out, "({r2}, {r3}): forbidden by {rule}")?,
            Verdict::Exists(recipe) => writeln!(out, "({r2}, {r3}): exists, witness {recipe}")?,
            Verdict::Unknown => writeln!(out, "({r2}, {r3}): unknown")?,
        }
    }
    Ok(matches!(verdict, Verdict::Exists(_)))
}

fn table(json: bool, out: &mut impl Write, max_r2: usize, max_r3: usize, format: TableFormat) -> Outcome {
    if max_r2 < 2 || max_r3 < 1 {
        return Err(Failure::Usage("table needs --max-r2 >= 2 and --max-r3 >= 1".into()));
    }
    let t = admissibility_table(max_r2, max_r3);
    if json {
        print_json(out, &TableReport::new(&t))?;
    } else {
        match format {
            TableFormat::Md => out.write_all(t.to_markdown().as_bytes())?,
            TableFormat::Csv => out.write_all(t.to_csv().as_bytes())?,
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn search(
    json: bool,
    out: &mut impl Write,
    r2: usize,
    r3: usize,
    n: Option<usize>,
    max_n: Option<usize>,
    seed: u64,
    iters: u64,
    restarts: u32,
    plateau: u64,
    report_path: Option<&PathBuf>,
) -> Outcome {
    let make = |n: usize| SearchConfig {
        r2,
        r3,
        n,
        max_iterations: iters,
        restarts,
        plateau_limit: plateau,
        seed,
    };
    let candidates: Vec<usize> = match n {
        Some(n) => vec![n],
        None => {
            let hi = max_n.unwrap_or(4 * (r2 + 1));
            ((r2 + 1)..=hi).filter(|n| n * r2 % 2 == 0).collect()
        }
    };
    if candidates.is_empty() {
        return Err(Failure::Usage(format!("no feasible vertex count for r2 = {r2} in the scan range")));
    }
    let mut scanned = Vec::new();
    let mut last = None;
    for &n in &candidates {
        let cfg = make(n);
        cfg.validate()?;
        let res = run_search(&cfg)?;
        if !json {
            writeln!(out, "n = {n}: {:?}, best fitness {}", res.status, res.best_fitness)?;
        }
        if res.status == SearchStatus::Found || n == *candidates.last().expect("non-empty") {
            last = Some((cfg, res));
            break;
        }
        scanned.push(ScanEntry {
            n,
            status: res.status,
            best_fitness: res.best_fitness.to_string(),
            iterations_used: res.iterations_used,
        });
    }
    let (cfg, res) = last.expect("at least one candidate");
    let rep = SearchReport::new(cfg, &res, scanned)?;
    if let Some(path) = report_path {
        let mut file = BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(&mut file, &rep)?;
        writeln!(file)?;
        file.flush()?;
    }
    if json {
        print_json(out, &rep)?;
    } else {
        writeln!(out, "status: {}", if res.status == SearchStatus::Found { "found" } else { "exhausted" })?;
        writeln!(out, "n: {}", cfg.n)?;
        writeln!(out, "seed: {}", cfg.seed)?;
        writeln!(out, "best fitness: {}", rep.best_fitness)?;
        writeln!(out, "iterations: {} (best from restart {})", rep.iterations_used, rep.best_restart)?;
        writeln!(out, "graph6: {}", rep.witness_graph6)?;
    }
    Ok(res.status == SearchStatus::Found)
}

fn enumerate(
    json: bool,
    out: &mut impl Write,
    spec: EnumSpec,
    limit: Option<usize>,
) -> Outcome {
    spec.validate()?;
    if spec.n > DEFAULT_ENUM_CAP {
        eprintln!("warning: n = {} is above the default cap of {DEFAULT_ENUM_CAP}; this may take a while", spec.n);
    }
    let mut lines = Vec::new();
    let mut truncated = false;
    match limit {
        Some(k) => {
            let mut err = None;
            for_each_regular(&spec, |g| {
                if lines.len() == k {
                    truncated = true;
                    return ControlFlow::Break(());
                }
                match encode_graph6(g) {
                    Ok(s) => lines.push(s),
                    Err(e) => {
                        err = Some(e);
                        return ControlFlow::Break(());
                    }
                }
                if !json {
                    if let Err(e) = writeln!(out, "{}", lines.last().expect("just pushed")) {
                        err = Some(trireg::Error::FormatError(e.to_string()));
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            })?;
            if let Some(e) = err {
                return Err(e.into());
            }
        }
        None => {
            for g in enumerate_regular(&spec)? {
                let s = encode_graph6(&g)?;
                if !json {
                    writeln!(out, "{s}")?;
                }
                lines.push(s);
            }
        }
    }
    if json {
        print_json(
            out,
            &EnumerateReport {
                schema: ENUMERATE_SCHEMA,
                n: spec.n,
                r2: spec.r2,
                connected_only: spec.connected_only,
                filter_r3: spec.filter_r3,
                count: lines.len(),
                truncated,
                graphs: lines,
            },
        )?;
    }
    Ok(true)
}

fn construct(json: bool, out: &mut impl Write, expr: &str) -> Outcome {
    let recipe: Recipe = expr.parse().map_err(|e: trireg::Error| Failure::Usage(e.to_string()))?;
    let recipe = ConstructionRecipe::new(recipe)?;
    let vertices = recipe.expr.vertex_count();
    if vertices > trireg::graph::MAX_VERTICES {
        return Err(trireg::Error::TooManyVertices(vertices).into());
    }
    let g = recipe.evaluate()?;
    let rep = ConstructReport {
        schema: CONSTRUCT_SCHEMA,
        recipe: recipe.to_string(),
        n: g.n(),
        edges: g.edge_count(),
        expected_parameters: recipe.expected_parameters,
        parameters: g.regularity_parameters(),
        graph6: encode_graph6(&g)?,
    };
    if json {
        print_json(out, &rep)?;
    } else {
        writeln!(out, "recipe: {}", rep.recipe)?;
        writeln!(out, "vertices: {}", rep.n)?;
        match rep.parameters {
            Some(p) => writeln!(out, "parameters: {p}")?,
            None => writeln!(out, "parameters: none (not regular K3-regular)")?,
        }
        writeln!(out, "graph6: {}", rep.graph6)?;
    }
    Ok(rep.parameters == Some(rep.expected_parameters))
}

fn convert(json: bool, out: &mut impl Write, from: Option<Format>, to: Option<Format>) -> Outcome {
    let mut text = String::new();
    io::stdin().read_to_string(&mut text)?;
    let from = from.unwrap_or_else(|| detect(&text));
    let to = to.unwrap_or(match from {
        Format::G6 => Format::El,
        Format::El => Format::G6,
    });
    let graphs = decode_all(&text, from)?;
    let mut encoded = Vec::with_capacity(graphs.len());
    for g in &graphs {
        encoded.push(match to {
            Format::G6 => encode_graph6(g)? + "\n",
            Format::El => encode_edge_list(g),
        });
    }
    if json {
        let format = match to {
            Format::G6 => GraphFormat::Graph6,
            Format::El => GraphFormat::EdgeList,
        };
        let graphs = encoded.into_iter().map(|s| s.trim_end().to_string()).collect();
        print_json(out, &ConvertReport { schema: CONVERT_SCHEMA, format, graphs })?;
    } else {
        for s in encoded {
            out.write_all(s.as_bytes())?;
        }
    }
    Ok(true)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("TRIREG_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| Failure::Usage(format!("TRIREG_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    configure_threads()?;
    let json = cli.json;
    match cli.command {
        Command::Check { file, format } => check(json, out, &file, format),
        Command::Classify { r2, r3 } => classify_cmd(json, out, r2, r3),
        Command::Table { max_r2, max_r3, format } => table(json, out, max_r2, max_r3, format),
        Command::Search { r2, r3, n, n_scan: _, max_n, seed, iters, restarts, plateau, out: path } => {
            search(json, out, r2, r3, n, max_n, seed, iters, restarts, plateau, path.as_ref())
        }
        Command::Enumerate { n, r2, connected, r3, limit, allow_large } => {
            let cap = if allow_large { HARD_ENUM_CAP } else { DEFAULT_ENUM_CAP };
            let spec = EnumSpec::new(n, r2).connected(connected).with_r3(r3).with_cap(cap);
            enumerate(json, out, spec, limit)
        }
        Command::Construct { expr } => construct(json, out, &expr),
        Command::Convert { from, to } => convert(json, out, from, to),
    }
}

fn report_failure(json: bool, message: String) {
    if json {
        let mut stdout = io::stdout().lock();
        let _ = print_json(&mut stdout, &ErrorReport { schema: ERROR_SCHEMA, error: message });
    } else {
        eprintln!("error: {message}");
    }
}

fn main() -> ExitCode {
    let json = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if json {
                let rendered = e.render().to_string();
                let first = rendered.lines().next().unwrap_or_default();
                report_failure(true, format!("usage: {}", first.trim_start_matches("error: ")));
            }
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    drop(out);
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => ExitCode::from(1),
        (Err(Failure::Usage(msg)), _) => {
            report_failure(json, format!("usage: {msg}"));
            ExitCode::from(2)
        }
        (Err(Failure::Domain(e)), _) => {
            report_failure(json, format!("{}: {e}", e.kind()));
            ExitCode::from(1)
        }
        (Err(Failure::Io(e)), _) | (Ok(_), Err(e)) => {
            if e.kind() == io::ErrorKind::BrokenPipe {
                return ExitCode::SUCCESS;
            }
            report_failure(json, format!("Io: {e}"));
            ExitCode::from(1)
        }
    }
}
