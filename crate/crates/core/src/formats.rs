//! Text encodings: graph6 and a sorted plain edge list.
//!
//! graph6 is the standard printable format: a size prefix followed by the
//! upper triangle of the adjacency matrix read column by column
//! (`(0,1), (0,2), (1,2), (0,3), ...`), packed six bits per character with
//! 63 added to each group.
//!
//! The edge-list format is `n m` on the first line followed by `m` lines
//! `u v` with `u < v`, sorted. Lines starting with `#` are comments.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Supported text formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    Graph6,
    EdgeList,
}

/// A graph serialized in one of the supported formats.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub format: GraphFormat,
    pub payload: String,
}

impl GraphDocument {
    pub fn encode(graph: &Graph, format: GraphFormat) -> Result<GraphDocument> {
        let payload = match format {
            GraphFormat::Graph6 => encode_graph6(graph)?,
            GraphFormat::EdgeList => encode_edge_list(graph),
        };
        Ok(GraphDocument { format, payload })
    }

    pub fn decode(&self) -> Result<Graph> {
        match self.format {
            GraphFormat::Graph6 => decode_graph6(&self.payload),
            GraphFormat::EdgeList => decode_edge_list(&self.payload),
        }
    }
}

const BIAS: u8 = 63;

fn push_size(out: &mut String, n: usize) {
    let push6 = |out: &mut String, x: usize| out.push((BIAS + (x & 0x3f) as u8) as char);
    if n <= 62 {
        push6(out, n);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            push6(out, n >> shift);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            push6(out, n >> shift);
        }
    }
}

/// Encodes a non-empty graph as a single graph6 line (no trailing newline).
pub fn encode_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut out = String::new();
    push_size(&mut out, n);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + BIAS) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + BIAS) as char);
    }
    Ok(out)
}

fn sextets(bytes: &[u8]) -> Result<Vec<u8>> {
    bytes
        .iter()
        .map(|&b| {
            if (63..=126).contains(&b) {
                Ok(b - BIAS)
            } else {
                Err(Error::FormatError(format!("byte {b} outside the printable range 63..=126")))
            }
        })
        .collect()
}

/// Decodes one graph6 line. A leading `>>graph6<<` header and surrounding
/// whitespace are ignored.
pub fn decode_graph6(line: &str) -> Result<Graph> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let data = sextets(line.as_bytes())?;
    let (n, body) = match data.as_slice() {
        [] => return Err(Error::FormatError("empty graph6 string".into())),
        [63, 63, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Error::FormatError("truncated 8-byte size prefix".into()));
            }
            let n = rest[..6].iter().fold(0usize, |acc, &x| (acc << 6) | x as usize);
            (n, &rest[6..])
        }
        [63, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Error::FormatError("truncated 4-byte size prefix".into()));
            }
            let n = rest[..3].iter().fold(0usize, |acc, &x| (acc << 6) | x as usize);
            (n, &rest[3..])
        }
        [n, rest @ ..] => (*n as usize, rest),
    };
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > crate::graph::MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    let bits = n * (n - 1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(Error::FormatError(format!(
            "expected {expected} data characters for {n} vertices, found {}",
            body.len()
        )));
    }
    let bit = |k: usize| body[k / 6] >> (5 - k % 6) & 1 == 1;
    if (bits..expected * 6).any(bit) {
        return Err(Error::FormatError("non-zero padding bits".into()));
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.insert_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Canonical edge-list text: header `n m`, then sorted `u v` lines, `u < v`.
pub fn encode_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::FormatError(format!("line {lineno}: expected two integers")))?
            .parse()
            .map_err(|e| Error::FormatError(format!("line {lineno}: {e}")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(Error::FormatError(format!("line {lineno}: trailing tokens")));
    }
    Ok(pair)
}

/// Parses the edge-list format. Edges may appear in any order and
/// orientation; duplicates and a wrong edge count are rejected.
pub fn decode_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (lineno, header) =
        lines.next().ok_or_else(|| Error::FormatError("missing 'n m' header".into()))?;
    let (n, m) = parse_pair(header, lineno)?;
    let mut edges = BTreeSet::new();
    for (lineno, line) in lines {
        let (u, v) = parse_pair(line, lineno)?;
        if u == v {
            return Err(Error::InvalidEdge(u, v));
        }
        if !edges.insert((u.min(v), u.max(v))) {
            return Err(Error::FormatError(format!("line {lineno}: duplicate edge {u} {v}")));
        }
    }
    if edges.len() != m {
        return Err(Error::FormatError(format!("header declares {m} edges, found {}", edges.len())));
    }
    Graph::from_edge_list(n, &edges.into_iter().collect::<Vec<_>>())
}
