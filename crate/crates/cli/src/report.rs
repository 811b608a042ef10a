//! JSON documents emitted with `--json` or `search --out`.
//!
//! Each document carries a `schema` field naming a file under `docs/schemas/`.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;
use trireg::feasibility::{AdmissibilityTable, Verdict};
use trireg::search::{SearchConfig, SearchResult, SearchStatus};
use trireg::{Graph, Parameters};

pub const CHECK_SCHEMA: &str = "trireg.check.v1";
pub const CLASSIFY_SCHEMA: &str = "trireg.classify.v1";
pub const TABLE_SCHEMA: &str = "trireg.table.v1";
pub const SEARCH_SCHEMA: &str = "trireg.search.v1";
pub const ENUMERATE_SCHEMA: &str = "trireg.enumerate.v1";
pub const CONSTRUCT_SCHEMA: &str = "trireg.construct.v1";
pub const CONVERT_SCHEMA: &str = "trireg.convert.v1";
pub const ERROR_SCHEMA: &str = "trireg.error.v1";

/// Longest fitness trace written to a report.
pub const TRACE_POINTS: usize = 64;

#[derive(Serialize)]
pub struct ErrorReport {
    pub schema: &'static str,
    pub error: String,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub schema: &'static str,
    pub n: usize,
    pub edges: usize,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub triangle_degree_histogram: BTreeMap<usize, usize>,
    pub connected: bool,
    pub parameters: Option<Parameters>,
}

fn histogram(values: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

impl CheckReport {
    pub fn new(g: &Graph) -> trireg::Result<CheckReport> {
        Ok(CheckReport {
            schema: CHECK_SCHEMA,
            n: g.n(),
            edges: g.edge_count(),
            degree_histogram: histogram(&g.degrees()),
            triangle_degree_histogram: histogram(&g.triangle_degrees()),
            connected: g.is_connected()?,
            parameters: g.regularity_parameters(),
        })
    }
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub schema: &'static str,
    pub r2: usize,
    pub r3: usize,
    pub status: &'static str,
    pub rule: Option<String>,
    pub witness: Option<String>,
}

impl ClassifyReport {
    pub fn new(r2: usize, r3: usize, verdict: &Verdict) -> ClassifyReport {
        ClassifyReport {
            schema: CLASSIFY_SCHEMA,
            r2,
            r3,
            status: verdict.status(),
            rule: match verdict {
                Verdict::Forbidden(rule) => Some(rule.to_string()),
                _ => None,
            },
            witness: verdict.witness().map(ToString::to_string),
        }
    }
}

#[derive(Serialize)]
pub struct TableCellReport {
    pub r2: usize,
    pub r3: usize,
    pub status: &'static str,
    pub rule: Option<String>,
    pub witness: Option<String>,
    pub blow_up: bool,
}

#[derive(Serialize)]
pub struct TableReport {
    pub schema: &'static str,
    pub max_r2: usize,
    pub max_r3: usize,
    pub cells: Vec<TableCellReport>,
}

impl TableReport {
    pub fn new(table: &AdmissibilityTable) -> TableReport {
        TableReport {
            schema: TABLE_SCHEMA,
            max_r2: table.max_r2,
            max_r3: table.max_r3,
            cells: table
                .cells
                .iter()
                .map(|c| {
                    let base = ClassifyReport::new(c.r2, c.r3, &c.verdict);
                    TableCellReport {
                        r2: c.r2,
                        r3: c.r3,
                        status: base.status,
                        rule: base.rule,
                        witness: base.witness,
                        blow_up: c.blow_up,
                    }
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Clone)]
pub struct TracePoint {
    pub iteration: u64,
    pub fitness: String,
}

#[derive(Serialize)]
pub struct ScanEntry {
    pub n: usize,
    pub status: SearchStatus,
    pub best_fitness: String,
    pub iterations_used: u64,
}

#[derive(Serialize)]
pub struct SearchReport {
    pub schema: &'static str,
    pub config: SearchConfig,
    pub status: SearchStatus,
    /// Exact value as `p/q` (or `1`).
    pub best_fitness: String,
    pub best_fitness_approx: f64,
    pub best_restart: u32,
    pub iterations_used: u64,
    pub parameters: Option<Parameters>,
    pub witness_graph6: String,
    /// At most [`TRACE_POINTS`] evenly spaced entries, first and last kept.
    pub fitness_trace: Vec<TracePoint>,
    /// Vertex counts tried before this one when scanning.
    pub scanned: Vec<ScanEntry>,
}

fn subsample<T: Clone>(items: &[T], keep: usize) -> Vec<T> {
    if items.len() <= keep {
        return items.to_vec();
    }
    let last = items.len() - 1;
    let mut idx: Vec<usize> = (0..keep).map(|i| i * last / (keep - 1)).collect();
    idx.dedup();
    idx.into_iter().map(|i| items[i].clone()).collect()
}

impl SearchReport {
    pub fn new(config: SearchConfig, result: &SearchResult, scanned: Vec<ScanEntry>) -> trireg::Result<SearchReport> {
        let trace: Vec<TracePoint> = result
            .fitness_trace
            .iter()
            .map(|(it, f)| TracePoint { iteration: *it, fitness: f.to_string() })
            .collect();
        Ok(SearchReport {
            schema: SEARCH_SCHEMA,
            config,
            status: result.status,
            best_fitness: result.best_fitness.to_string(),
            best_fitness_approx: result.best_fitness.to_f64().unwrap_or(f64::NAN),
            best_restart: result.best_restart,
            iterations_used: result.iterations_used,
            parameters: result.best_graph.regularity_parameters(),
            witness_graph6: trireg::encode_graph6(&result.best_graph)?,
            fitness_trace: subsample(&trace, TRACE_POINTS),
            scanned,
        })
    }
}

#[derive(Serialize)]
pub struct EnumerateReport {
    pub schema: &'static str,
    pub n: usize,
    pub r2: usize,
    pub connected_only: bool,
    pub filter_r3: Option<usize>,
    pub count: usize,
    pub truncated: bool,
    pub graphs: Vec<String>,
}

#[derive(Serialize)]
pub struct ConstructReport {
    pub schema: &'static str,
    pub recipe: String,
    pub n: usize,
    pub edges: usize,
    pub expected_parameters: Parameters,
    pub parameters: Option<Parameters>,
    pub graph6: String,
}

#[derive(Serialize)]
pub struct ConvertReport {
    pub schema: &'static str,
    pub format: trireg::GraphFormat,
    pub graphs: Vec<String>,
}
