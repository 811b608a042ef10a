//! Minimal row-major upper-triangle code over relabelings.
//!
//! The code of a labelled graph is the bit string `(0,1), (0,2), ...,
//! (0,n-1), (1,2), ...` of its upper triangle. A labelling minimising the
//! code must list, after any prefix of positions, the remaining vertices
//! sorted by their adjacency to that prefix (non-neighbours first). So the
//! search individualizes a vertex from the first cell of an ordered
//! partition, splits every cell by adjacency to it, and reads off the next
//! row of the code. Branches whose partial code exceeds the incumbent are
//! cut; leaves with equal codes give automorphisms, which prune sibling
//! branches by orbits and allow a jump back to the first-leaf path.

use std::cmp::Ordering;

pub(crate) const MAX_CANON_N: usize = 64;

type Lab = [u8; MAX_CANON_N];

/// Adjacency rows of a graph on at most 64 vertices.
#[derive(Clone, Debug)]
pub(crate) struct SmallGraph {
    pub n: usize,
    pub rows: [u64; MAX_CANON_N],
}

impl SmallGraph {
    #[inline]
    fn adj(&self, u: u8, v: u8) -> bool {
        self.rows[u as usize] >> v & 1 == 1
    }

    /// Code rows of the identity labelling, in position space.
    pub fn identity_rows(&self) -> Vec<u64> {
        (0..self.n).map(|i| self.rows[i] & above(i)).collect()
    }
}

#[inline]
fn above(i: usize) -> u64 {
    if i >= 63 {
        0
    } else {
        !0u64 << (i + 1)
    }
}

/// Compares two code rows; lower positions are more significant, 1 > 0.
#[inline]
fn cmp_row(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        Ordering::Equal
    } else if a & diff & diff.wrapping_neg() != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

enum Flow {
    Continue,
    /// A strictly smaller code exists (test mode only).
    Smaller,
    /// Unwind to the frame choosing this position.
    Jump(usize),
}

struct Search<'a> {
    g: &'a SmallGraph,
    /// Stop as soon as a code below `best` is seen.
    test_only: bool,
    best: Option<(Vec<u64>, Lab)>,
    /// Bumped whenever `best` is replaced.
    best_version: usize,
    first_leaf: Option<Lab>,
    generators: Vec<Lab>,
    rows: Vec<u64>,
}

struct Node {
    depth: usize,
    lab: Lab,
    /// Bit `i` set: a cell starts at position `i` (only positions >= depth matter).
    starts: u64,
    /// Partial code compared with the incumbent so far.
    relation: Ordering,
}

impl Search<'_> {
    fn orbit_roots(&self, path: &[u8]) -> Vec<u8> {
        let n = self.g.n;
        let mut parent: Vec<u8> = (0..n as u8).collect();
        fn find(p: &mut [u8], mut x: u8) -> u8 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for gen in &self.generators {
            if path.iter().any(|&v| gen[v as usize] != v) {
                continue;
            }
            for x in 0..n as u8 {
                let (a, b) = (find(&mut parent, x), find(&mut parent, gen[x as usize]));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
        (0..n as u8).map(|x| find(&mut parent, x)).collect()
    }

    fn record_leaf(&mut self, lab: &Lab, relation: Ordering) -> Flow {
        let n = self.g.n;
        match (relation, &self.best) {
            (Ordering::Less, _) | (_, None) => {
                if self.test_only {
                    return Flow::Smaller;
                }
                self.best = Some((self.rows.clone(), *lab));
                self.best_version += 1;
                if self.first_leaf.is_none() {
                    self.first_leaf = Some(*lab);
                }
                Flow::Continue
            }
            (Ordering::Equal, Some((_, best_lab))) => {
                let best_lab = *best_lab;
                if self.first_leaf.is_none() {
                    self.first_leaf = Some(*lab);
                }
                let mut gen: Lab = [0; MAX_CANON_N];
                for i in 0..n {
                    gen[best_lab[i] as usize] = lab[i];
                }
                if (0..n).any(|i| gen[i] != i as u8) {
                    self.generators.push(gen);
                }
                let first = self.first_leaf.expect("set above");
                let first_is_equal = self.test_only || first[..n] == best_lab[..n];
                match (0..n).find(|&i| first[i] != lab[i]) {
                    Some(level) if first_is_equal => Flow::Jump(level),
                    _ => Flow::Continue,
                }
            }
            (Ordering::Greater, _) => unreachable!("greater prefixes are cut before the leaf"),
        }
    }

    fn visit(&mut self, node: Node) -> Flow {
        let n = self.g.n;
        let d = node.depth;
        let cells = node.starts.checked_shr(d as u32).unwrap_or(0).count_ones() as usize;
        if n - d == cells {
            // discrete: the remaining rows are fixed
            let mut relation = node.relation;
            for i in d..n {
                let v = node.lab[i];
                let mut row = 0u64;
                for j in i + 1..n {
                    if self.g.adj(v, node.lab[j]) {
                        row |= 1 << j;
                    }
                }
                self.rows[i] = row;
                if relation == Ordering::Equal {
                    let best = self.best.as_ref().expect("equal implies an incumbent");
                    relation = cmp_row(row, best.0[i]);
                    match relation {
                        Ordering::Greater => return Flow::Continue,
                        Ordering::Less if self.test_only => return Flow::Smaller,
                        _ => {}
                    }
                }
            }
            return self.record_leaf(&node.lab, relation);
        }

        let first_end = ((d + 1)..n).find(|&i| node.starts >> i & 1 == 1).unwrap_or(n);
        let mut tried: Vec<u8> = Vec::new();
        let mut roots: Vec<u8> = Vec::new();
        let mut known_gens = usize::MAX;
        let mut prefix = node.relation;
        let mut version = self.best_version;
        for p in d..first_end {
            if version != self.best_version {
                // the new incumbent was found below this prefix
                prefix = Ordering::Equal;
                version = self.best_version;
            }
            let v = node.lab[p];
            if !tried.is_empty() {
                if known_gens != self.generators.len() {
                    roots = self.orbit_roots(&node.lab[..d]);
                    known_gens = self.generators.len();
                }
                if tried.iter().any(|&u| roots[u as usize] == roots[v as usize]) {
                    continue;
                }
            }
            tried.push(v);

            let mut lab = node.lab;
            lab.swap(d, p);
            let mut starts = node.starts & !(1u64 << d);
            if d + 1 < n {
                starts |= 1 << (d + 1);
            }
            // split every cell after d by adjacency to v, non-neighbours first
            let mut row = 0u64;
            let mut s = d + 1;
            while s < n {
                let t = ((s + 1)..n).find(|&i| starts >> i & 1 == 1).unwrap_or(n);
                let cell = &mut lab[s..t];
                let mut zeros: Vec<u8> = Vec::with_capacity(cell.len());
                let mut ones: Vec<u8> = Vec::with_capacity(cell.len());
                for &x in cell.iter() {
                    if self.g.adj(v, x) {
                        ones.push(x);
                    } else {
                        zeros.push(x);
                    }
                }
                let z = zeros.len();
                cell[..z].copy_from_slice(&zeros);
                cell[z..].copy_from_slice(&ones);
                if z > 0 && z < t - s {
                    starts |= 1 << (s + z);
                }
                for j in s + z..t {
                    row |= 1 << j;
                }
                s = t;
            }
            self.rows[d] = row;
            let relation = match (prefix, &self.best) {
                (Ordering::Equal, Some((best, _))) => cmp_row(row, best[d]),
                (r, _) => r,
            };
            let flow = match relation {
                Ordering::Greater => Flow::Continue,
                Ordering::Less if self.test_only => Flow::Smaller,
                _ => self.visit(Node { depth: d + 1, lab, starts, relation }),
            };
            match flow {
                Flow::Continue => {}
                Flow::Smaller => return Flow::Smaller,
                Flow::Jump(level) if level == d => {}
                Flow::Jump(level) => return Flow::Jump(level),
            }
        }
        Flow::Continue
    }
}

fn identity_lab() -> Lab {
    let mut lab = [0u8; MAX_CANON_N];
    for (i, x) in lab.iter_mut().enumerate() {
        *x = i as u8;
    }
    lab
}

fn root(n: usize) -> Node {
    Node { depth: 0, lab: identity_lab(), starts: if n > 0 { 1 } else { 0 }, relation: Ordering::Equal }
}

/// True iff no relabelling of `g` has a smaller code than the identity.
pub(crate) fn is_canonical(g: &SmallGraph) -> bool {
    if g.n <= 1 {
        return true;
    }
    let mut search = Search {
        g,
        test_only: true,
        best: Some((g.identity_rows(), identity_lab())),
        best_version: 0,
        first_leaf: None,
        generators: Vec::new(),
        rows: vec![0; g.n],
    };
    !matches!(search.visit(root(g.n)), Flow::Smaller)
}

/// Minimal code rows and a labelling achieving them: `lab[position] = vertex`.
pub(crate) fn canonical_labelling(g: &SmallGraph) -> (Vec<u64>, Vec<usize>) {
    if g.n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut search = Search {
        g,
        test_only: false,
        best: None,
        best_version: 0,
        first_leaf: None,
        generators: Vec::new(),
        rows: vec![0; g.n],
    };
    let mut r = root(g.n);
    r.relation = Ordering::Less;
    search.visit(r);
    let (rows, lab) = search.best.expect("at least one leaf");
    (rows, lab[..g.n].iter().map(|&x| x as usize).collect())
}
