//! Immutable simple graphs with bit-packed adjacency rows.
//!
//! Vertex `v`'s neighbourhood is stored as a row of `u64` words, so common
//! neighbourhoods (and with them edge triangle degrees) are a word-parallel
//! AND + popcount.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 1024;

/// Common vertex degree `r2` and common triangle degree `r3` of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Parameters {
    pub r2: usize,
    pub r3: usize,
}

impl Parameters {
    pub const fn new(r2: usize, r3: usize) -> Self {
        Parameters { r2, r3 }
    }
}

impl Add for Parameters {
    type Output = Parameters;

    fn add(self, rhs: Parameters) -> Parameters {
        Parameters::new(self.r2 + rhs.r2, self.r3 + rhs.r3)
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r2, self.r3)
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let words = words_for(n);
        Ok(Graph { n, words, rows: vec![0; n * words] })
    }

    /// Builds a graph from unordered vertex pairs; repeated pairs collapse.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::InvalidEdge(u, v));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from an adjacency predicate evaluated on every pair `u < v`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    g.insert_edge(u, v);
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Edges as pairs `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    #[inline]
    pub(crate) fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Number of triangles through the edge `uv`, i.e. `|N(u) ∩ N(v)|`.
    pub fn triangle_degree_edge(&self, u: usize, v: usize) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
        Ok(self.common_neighbors(u, v))
    }

    /// Number of triangles containing `v`: half the sum of the triangle degrees
    /// of the edges at `v`.
    pub fn triangle_degree_vertex(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.triangle_degree_unchecked(v))
    }

    #[inline]
    pub(crate) fn triangle_degree_unchecked(&self, v: usize) -> usize {
        let twice: usize = self.neighbors(v).map(|u| self.common_neighbors(u, v)).sum();
        twice / 2
    }

    pub fn triangle_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.triangle_degree_unchecked(v)).collect()
    }

    /// `(r2, r3)` when every vertex has degree `r2` and triangle degree `r3`.
    pub fn regularity_parameters(&self) -> Option<Parameters> {
        if self.n == 0 {
            return None;
        }
        let r2 = self.degree(0);
        if (1..self.n).any(|v| self.degree(v) != r2) {
            return None;
        }
        let r3 = self.triangle_degree_unchecked(0);
        if (1..self.n).any(|v| self.triangle_degree_unchecked(v) != r3) {
            return None;
        }
        Some(Parameters::new(r2, r3))
    }

    /// Cartesian product; vertex `(u, v)` is numbered `u * other.n() + v`.
    pub fn cartesian_product(&self, other: &Graph) -> Result<Graph> {
        if self.n == 0 || other.n == 0 {
            return Err(Error::EmptyFactor);
        }
        let m = other.n;
        let total = self.n.checked_mul(m).ok_or(Error::TooManyVertices(usize::MAX))?;
        let mut g = Graph::empty(total)?;
        for u in 0..self.n {
            for (v, w) in other.edges() {
                g.insert_edge(u * m + v, u * m + w);
            }
        }
        for (u, x) in self.edges() {
            for v in 0..m {
                g.insert_edge(u * m + v, x * m + v);
            }
        }
        Ok(g)
    }

    pub fn is_connected(&self) -> Result<bool> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(count == self.n)
    }

    pub fn complement(&self) -> Graph {
        Graph::from_fn(self.n, |u, v| !self.has_edge(u, v)).expect("same vertex count")
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let mut g = Graph::empty(self.n + other.n)?;
        for (u, v) in self.edges() {
            g.insert_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.insert_edge(self.n + u, self.n + v);
        }
        Ok(g)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation of length {} for a graph on {} vertices",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let mut g = Graph::empty(self.n)?;
        for (u, v) in self.edges() {
            g.insert_edge(perm[u], perm[v]);
        }
        Ok(g)
    }
}
