//! Pairwise isomorphism testing: colour refinement followed by backtracking.

use std::collections::BTreeMap;

use crate::graph::Graph;

/// Stable colouring of both graphs with a shared colour vocabulary.
///
/// Initial colours are `(degree, triangle degree)`; each round recolours a
/// vertex by its colour and the sorted multiset of its neighbours' colours.
fn refine_jointly(g: &Graph, h: &Graph) -> (Vec<usize>, Vec<usize>) {
    let init = |x: &Graph| -> Vec<(usize, usize)> {
        (0..x.n()).map(|v| (x.degree(v), x.triangle_degree_unchecked(v))).collect()
    };
    let mut vocab: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for key in init(g).into_iter().chain(init(h)) {
        let next = vocab.len();
        vocab.entry(key).or_insert(next);
    }
    // re-number in key order so colour ids are label-independent
    for (i, v) in vocab.values_mut().enumerate() {
        *v = i;
    }
    let mut cg: Vec<usize> = init(g).iter().map(|k| vocab[k]).collect();
    let mut ch: Vec<usize> = init(h).iter().map(|k| vocab[k]).collect();
    let mut classes = vocab.len();

    loop {
        let sig = |x: &Graph, c: &[usize]| -> Vec<(usize, Vec<usize>)> {
            (0..x.n())
                .map(|v| {
                    let mut nb: Vec<usize> = x.neighbors(v).map(|u| c[u]).collect();
                    nb.sort_unstable();
                    (c[v], nb)
                })
                .collect()
        };
        let sg = sig(g, &cg);
        let sh = sig(h, &ch);
        let mut vocab: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
        for s in sg.iter().chain(sh.iter()) {
            vocab.insert(s, 0);
        }
        for (i, v) in vocab.values_mut().enumerate() {
            *v = i;
        }
        let next_classes = vocab.len();
        cg = sg.iter().map(|s| vocab[s]).collect();
        ch = sh.iter().map(|s| vocab[s]).collect();
        if next_classes == classes {
            return (cg, ch);
        }
        classes = next_classes;
    }
}

fn histogram(colours: &[usize]) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for &c in colours {
        *hist.entry(c).or_insert(0) += 1;
    }
    hist
}

struct Matcher<'a> {
    g: &'a Graph,
    h: &'a Graph,
    cg: Vec<usize>,
    ch: Vec<usize>,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let u = self.order[depth];
        for x in 0..self.h.n() {
            if self.used[x] || self.ch[x] != self.cg[u] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&w| self.g.has_edge(u, w) == self.h.has_edge(x, self.map[w]));
            if !consistent {
                continue;
            }
            self.map[u] = x;
            self.used[x] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[x] = false;
        }
        false
    }
}

/// Search order: start from the rarest colour, then repeatedly take the
/// unvisited vertex with most already-ordered neighbours.
fn search_order(g: &Graph, colours: &[usize]) -> Vec<usize> {
    let hist = histogram(colours);
    let n = g.n();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (std::cmp::Reverse(links[v]), hist[&colours[v]], v))
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
        for w in g.neighbors(next) {
            links[w] += 1;
        }
    }
    order
}

/// True iff an edge-preserving bijection between `g` and `h` exists.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    let (cg, ch) = refine_jointly(g, h);
    if histogram(&cg) != histogram(&ch) {
        return false;
    }
    let order = search_order(g, &cg);
    let mut m = Matcher { g, h, cg, ch, order, map: vec![0; g.n()], used: vec![false; h.n()] };
    m.extend(0)
}
