//! Isomorph-free generation of regular graphs on a few vertices.
//!
//! Graphs are built row by row in the labelling that minimises the
//! row-major upper-triangle code. Row `p` fills vertex `p` up to degree
//! `r2` using columns `p+1..n`. Columns that agree on all earlier rows are
//! interchangeable, so within each such block the new row must read
//! zeros-then-ones and only a per-block count is chosen. Complete labelled
//! graphs are emitted iff their identity labelling is canonical.

mod canon;

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{choose2, turan};
use crate::error::{Error, Result};
use crate::graph::{Graph, Parameters};
use canon::{SmallGraph, MAX_CANON_N};

/// Default largest vertex count accepted without an override.
pub const DEFAULT_ENUM_CAP: usize = 12;
/// Largest vertex count accepted even with an override.
pub const HARD_ENUM_CAP: usize = 14;

/// What to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumSpec {
    pub n: usize,
    pub r2: usize,
    pub connected_only: bool,
    pub filter_r3: Option<usize>,
    /// Vertex-count cap; raising it above [`DEFAULT_ENUM_CAP`] is the override.
    pub cap: usize,
}

impl EnumSpec {
    pub fn new(n: usize, r2: usize) -> EnumSpec {
        EnumSpec { n, r2, connected_only: false, filter_r3: None, cap: DEFAULT_ENUM_CAP }
    }

    pub fn connected(mut self, connected_only: bool) -> EnumSpec {
        self.connected_only = connected_only;
        self
    }

    pub fn with_r3(mut self, r3: Option<usize>) -> EnumSpec {
        self.filter_r3 = r3;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> EnumSpec {
        self.cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (n, r2) = (self.n, self.r2);
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if r2 >= n {
            return Err(Error::DegreeTooLarge { n, degree: r2 });
        }
        if n * r2 % 2 == 1 {
            return Err(Error::ParityError { n, degree: r2 });
        }
        let cap = self.cap.min(HARD_ENUM_CAP);
        if n > cap {
            return Err(Error::DeskScaleExceeded { n, cap });
        }
        Ok(())
    }

    fn accepts(&self, g: &Graph) -> bool {
        if self.connected_only && !g.is_connected().unwrap_or(false) {
            return false;
        }
        match self.filter_r3 {
            Some(r3) => g.regularity_parameters() == Some(Parameters::new(self.r2, r3)),
            None => true,
        }
    }
}

#[derive(Clone)]
struct Partial {
    n: usize,
    r2: usize,
    /// Row being filled next.
    p: usize,
    rows: [u64; MAX_CANON_N],
    deg: [u8; MAX_CANON_N],
    /// Bit `j` set: a block of interchangeable columns starts at `j`.
    starts: u64,
}

impl Partial {
    fn root(n: usize, r2: usize) -> Partial {
        Partial { n, r2, p: 0, rows: [0; MAX_CANON_N], deg: [0; MAX_CANON_N], starts: 0 }
    }

    fn small(&self) -> SmallGraph {
        SmallGraph { n: self.n, rows: self.rows }
    }

    fn to_graph(&self) -> Graph {
        Graph::from_fn(self.n, |u, v| self.rows[u] >> v & 1 == 1).expect("n within range")
    }

    /// Every later vertex can still reach degree `r2`.
    fn completable(&self) -> bool {
        let room = self.n.saturating_sub(self.p + 1) as u32;
        let mut total = 0u32;
        for j in self.p..self.n {
            let deficit = self.r2 as u32 - self.deg[j] as u32;
            if deficit > room {
                return false;
            }
            total += deficit;
        }
        total % 2 == 0
    }
}

/// Depth-first over rows; `sink` sees every partial graph whose next row is `stop`.
fn descend(
    state: &mut Partial,
    stop: usize,
    sink: &mut dyn FnMut(&Partial) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if state.p == stop || state.p == state.n {
        return sink(state);
    }
    let (n, p) = (state.n, state.p);
    let need = state.r2 - state.deg[p] as usize;
    let starts = state.starts | if p + 1 < n { 1 << (p + 1) } else { 0 };
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut s = p + 1;
    while s < n {
        let t = ((s + 1)..n).find(|&i| starts >> i & 1 == 1).unwrap_or(n);
        blocks.push((s, t));
        s = t;
    }
    let capacity: Vec<usize> = blocks
        .iter()
        .map(|&(s, t)| if (state.deg[s] as usize) < state.r2 { t - s } else { 0 })
        .collect();
    let mut suffix = vec![0usize; blocks.len() + 1];
    for i in (0..blocks.len()).rev() {
        suffix[i] = suffix[i + 1] + capacity[i];
    }
    if suffix[0] < need {
        return ControlFlow::Continue(());
    }
    let mut counts = vec![0usize; blocks.len()];
    choose_counts(state, &blocks, &capacity, &suffix, 0, need, &mut counts, stop, sink)
}

#[allow(clippy::too_many_arguments)]
fn choose_counts(
    state: &mut Partial,
    blocks: &[(usize, usize)],
    capacity: &[usize],
    suffix: &[usize],
    b: usize,
    need: usize,
    counts: &mut [usize],
    stop: usize,
    sink: &mut dyn FnMut(&Partial) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if b == blocks.len() {
        let saved = state.clone();
        let p = state.p;
        let mut starts = 0u64;
        for (&(s, t), &c) in blocks.iter().zip(counts.iter()) {
            starts |= 1 << s;
            if c > 0 && c < t - s {
                starts |= 1 << (t - c);
            }
            for j in t - c..t {
                state.rows[p] |= 1 << j;
                state.rows[j] |= 1 << p;
                state.deg[j] += 1;
            }
        }
        state.deg[p] = state.r2 as u8;
        state.p = p + 1;
        state.starts = starts;
        let flow = if state.completable() {
            descend(state, stop, sink)
        } else {
            ControlFlow::Continue(())
        };
        *state = saved;
        return flow;
    }
    let lo = need.saturating_sub(suffix[b + 1]);
    let hi = need.min(capacity[b]);
    for c in lo..=hi {
        counts[b] = c;
        choose_counts(state, blocks, capacity, suffix, b + 1, need - c, counts, stop, sink)?;
    }
    counts[b] = 0;
    ControlFlow::Continue(())
}

/// Rows after which the tree is split between workers.
const SPLIT_ROW: usize = 3;

/// Streams every representative matching `spec`, in increasing canonical
/// code order, until `visit` breaks.
pub fn for_each_regular(spec: &EnumSpec, mut visit: impl FnMut(&Graph) -> ControlFlow<()>) -> Result<()> {
    spec.validate()?;
    let mut root = Partial::root(spec.n, spec.r2);
    let _ = descend(&mut root, spec.n, &mut |leaf: &Partial| {
        if !canon::is_canonical(&leaf.small()) {
            return ControlFlow::Continue(());
        }
        let g = leaf.to_graph();
        if spec.accepts(&g) {
            visit(&g)
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(())
}

/// All representatives matching `spec`, in increasing canonical code order.
/// Subtrees below the first few rows are explored in parallel.
pub fn enumerate_regular(spec: &EnumSpec) -> Result<Vec<Graph>> {
    spec.validate()?;
    let mut prefixes = Vec::new();
    let mut root = Partial::root(spec.n, spec.r2);
    let _ = descend(&mut root, SPLIT_ROW.min(spec.n), &mut |partial: &Partial| {
        prefixes.push(partial.clone());
        ControlFlow::Continue(())
    });
    let branches: Vec<Vec<(Vec<u8>, Graph)>> = prefixes
        .into_par_iter()
        .map(|mut prefix| {
            let mut found = Vec::new();
            let _ = descend(&mut prefix, spec.n, &mut |leaf: &Partial| {
                if canon::is_canonical(&leaf.small()) {
                    let g = leaf.to_graph();
                    if spec.accepts(&g) {
                        found.push((upper_triangle_code(&g), g));
                    }
                }
                ControlFlow::Continue(())
            });
            found.sort_by(|a, b| a.0.cmp(&b.0));
            found
        })
        .collect();
    Ok(branches.into_iter().flatten().map(|(_, g)| g).collect())
}

/// Number of representatives matching `spec`.
pub fn count_regular(spec: &EnumSpec) -> Result<usize> {
    Ok(enumerate_regular(spec)?.len())
}

/// All classes on exactly `n` vertices with regularity parameters `(r2, r3)`.
pub fn find_with_parameters(n: usize, r2: usize, r3: usize, connected_only: bool) -> Result<Vec<Graph>> {
    enumerate_regular(&EnumSpec::new(n, r2).connected(connected_only).with_r3(Some(r3)))
}

/// Outcome of [`verify_turan_uniqueness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuranUniqueness {
    pub parameters: Parameters,
    /// Vertex counts that were enumerated.
    pub checked_n: Vec<usize>,
    /// A connected graph with the parameters other than the expected one.
    pub offending: Option<Graph>,
    /// Whether the expected Turan graph itself was found.
    pub found_expected: bool,
}

impl TuranUniqueness {
    pub fn holds(&self) -> bool {
        self.offending.is_none() && self.found_expected
    }
}

/// Checks that the only connected graph with parameters `(2m, 4 C(m,2))`
/// on at most `n_max` vertices is `Turan(2m+2, m+1)`.
pub fn verify_turan_uniqueness(m: usize, n_max: usize) -> Result<TuranUniqueness> {
    verify_turan_uniqueness_with_cap(m, n_max, DEFAULT_ENUM_CAP)
}

pub fn verify_turan_uniqueness_with_cap(m: usize, n_max: usize, cap: usize) -> Result<TuranUniqueness> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("Turan uniqueness needs m >= 2, got {m}")));
    }
    let cap = cap.min(HARD_ENUM_CAP);
    if n_max > cap {
        return Err(Error::DeskScaleExceeded { n: n_max, cap });
    }
    let (r2, r3) = (2 * m, 4 * choose2(m));
    let expected = turan(2 * m + 2, m + 1)?;
    let mut report = TuranUniqueness {
        parameters: Parameters::new(r2, r3),
        checked_n: Vec::new(),
        offending: None,
        found_expected: false,
    };
    for n in (r2 + 1)..=n_max {
        let spec = EnumSpec::new(n, r2).connected(true).with_r3(Some(r3)).with_cap(cap);
        if spec.validate().is_err() {
            continue;
        }
        report.checked_n.push(n);
        for g in enumerate_regular(&spec)? {
            if crate::iso::are_isomorphic(&g, &expected) {
                report.found_expected = true;
            } else if report.offending.is_none() {
                report.offending = Some(g);
            }
        }
    }
    Ok(report)
}

/// Row-major upper-triangle bits, one byte per bit.
pub fn upper_triangle_code(g: &Graph) -> Vec<u8> {
    let n = g.n();
    let mut code = Vec::with_capacity(choose2(n));
    for i in 0..n {
        for j in i + 1..n {
            code.push(g.has_edge(i, j) as u8);
        }
    }
    code
}

fn small_graph(g: &Graph) -> Result<SmallGraph> {
    if g.n() > MAX_CANON_N {
        return Err(Error::TooManyVertices(g.n()));
    }
    let mut rows = [0u64; MAX_CANON_N];
    for (u, v) in g.edges() {
        rows[u] |= 1 << v;
        rows[v] |= 1 << u;
    }
    Ok(SmallGraph { n: g.n(), rows })
}

/// The relabelling of `g` with the smallest upper-triangle code. Two graphs
/// are isomorphic iff their canonical forms are equal.
pub fn canonical_form(g: &Graph) -> Result<Graph> {
    let (_, lab) = canon::canonical_labelling(&small_graph(g)?);
    // lab[position] = vertex; permuted() wants vertex -> position
    let mut perm = vec![0; g.n()];
    for (pos, &v) in lab.iter().enumerate() {
        perm[v] = pos;
    }
    g.permuted(&perm)
}

/// Whether `g` is already its own canonical form.
pub fn is_canonical(g: &Graph) -> Result<bool> {
    Ok(canon::is_canonical(&small_graph(g)?))
}
