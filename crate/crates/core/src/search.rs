//! Local search for K3-regular graphs by degree-preserving 2-switches.
//!
//! Every restart starts from a random `r2`-regular graph and hill-climbs on
//! the fitness `(1/n) Σ 1/(|K3deg(v) - r3| + 1)²`. A move is kept iff the
//! fitness does not decrease. Sideways moves are allowed, but
//! `plateau_limit` of them in a row ends the restart.
//!
//! Restart `i` draws from `ChaCha8Rng::seed_from_u64(seed + i)` (wrapping).

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Parameters, MAX_VERTICES};

pub const DEFAULT_MAX_ITERATIONS: u64 = 200_000;
pub const DEFAULT_RESTARTS: u32 = 32;
pub const DEFAULT_PLATEAU_LIMIT: u64 = 2_000;
pub const DEFAULT_SEED: u64 = 0x7269_7265_6775_6c61;

/// Sampling attempts before [`two_switch`] falls back to a full scan.
const SWITCH_ATTEMPTS: usize = 64;
/// Pairing-model rounds before [`random_regular`] switches strategy.
const PAIRING_ATTEMPTS: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub r2: usize,
    pub r3: usize,
    pub n: usize,
    pub max_iterations: u64,
    pub restarts: u32,
    pub plateau_limit: u64,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(r2: usize, r3: usize, n: usize) -> SearchConfig {
        SearchConfig {
            r2,
            r3,
            n,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            restarts: DEFAULT_RESTARTS,
            plateau_limit: DEFAULT_PLATEAU_LIMIT,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> SearchConfig {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_degree(self.n, self.r2)?;
        if self.max_iterations == 0 || self.restarts == 0 || self.plateau_limit == 0 {
            return Err(Error::InvalidArgument("search budgets must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Found,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub best_graph: Graph,
    pub best_fitness: BigRational,
    /// `(iteration, fitness)` each time the best fitness so far improves;
    /// iterations are counted across restarts in index order.
    pub fitness_trace: Vec<(u64, BigRational)>,
    pub iterations_used: u64,
    /// Restart that produced `best_graph`.
    pub best_restart: u32,
}

fn check_degree(n: usize, r2: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    if r2 >= n {
        return Err(Error::DegreeTooLarge { n, degree: r2 });
    }
    if n * r2 % 2 == 1 {
        return Err(Error::ParityError { n, degree: r2 });
    }
    Ok(())
}

fn pairing_model(n: usize, d: usize, rng: &mut impl Rng) -> Option<Graph> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        stubs.shuffle(rng);
        let mut g = Graph::empty(n).expect("n checked");
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || g.has_edge(u, v) {
                continue 'attempt;
            }
            g.insert_edge(u, v);
        }
        return Some(g);
    }
    None
}

/// `i ~ i ± 1, ..., i ± d/2`, plus the antipode when `d` is odd.
fn circulant(n: usize, d: usize) -> Graph {
    Graph::from_fn(n, |u, v| {
        let gap = (v + n - u) % n;
        let gap = gap.min(n - gap);
        gap <= d / 2 || (d % 2 == 1 && 2 * gap == n)
    })
    .expect("n checked")
}

/// A random simple `r2`-regular graph on `n` vertices.
///
/// Uses the pairing model with full restarts, on the complement when that
/// has the smaller degree. If the pairing model keeps failing, a circulant
/// graph shuffled by `10 m` random 2-switches is returned instead.
pub fn random_regular(n: usize, r2: usize, rng: &mut impl Rng) -> Result<Graph> {
    check_degree(n, r2)?;
    let co = n - 1 - r2;
    let (d, flip) = if co < r2 { (co, true) } else { (r2, false) };
    let g = match pairing_model(n, d, rng) {
        Some(g) => g,
        None => {
            let mut g = circulant(n, d);
            let mut edges: Vec<(usize, usize)> = g.edges().collect();
            for _ in 0..10 * edges.len() {
                if let Some(sw) = propose(&g, &edges, rng) {
                    sw.apply(&mut g, &mut edges);
                }
            }
            g
        }
    };
    Ok(if flip { g.complement() } else { g })
}

/// Remove `ab`, `cd`; add `ac`, `bd`. `i`, `j` index the removed edges.
#[derive(Debug, Clone, Copy)]
struct Switch {
    i: usize,
    j: usize,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
}

impl Switch {
    fn apply(&self, g: &mut Graph, edges: &mut [(usize, usize)]) {
        g.remove_edge(self.a, self.b);
        g.remove_edge(self.c, self.d);
        g.insert_edge(self.a, self.c);
        g.insert_edge(self.b, self.d);
        edges[self.i] = (self.a.min(self.c), self.a.max(self.c));
        edges[self.j] = (self.b.min(self.d), self.b.max(self.d));
    }
}

fn valid(g: &Graph, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    a != c && a != d && b != c && b != d && !g.has_edge(a, c) && !g.has_edge(b, d)
}

fn propose(g: &Graph, edges: &[(usize, usize)], rng: &mut impl Rng) -> Option<Switch> {
    let m = edges.len();
    if m < 2 {
        return None;
    }
    for _ in 0..SWITCH_ATTEMPTS {
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..m);
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (c, d) = if rng.gen::<bool>() { edges[j] } else { (edges[j].1, edges[j].0) };
        if valid(g, (a, b), (c, d)) {
            return Some(Switch { i, j, a, b, c, d });
        }
    }
    let mut all = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (a, b) = edges[i];
            for (c, d) in [edges[j], (edges[j].1, edges[j].0)] {
                if valid(g, (a, b), (c, d)) {
                    all.push(Switch { i, j, a, b, c, d });
                }
            }
        }
    }
    if all.is_empty() {
        None
    } else {
        Some(all[rng.gen_range(0..all.len())])
    }
}

/// One random 2-switch of `g`, or `None` when no valid switch exists.
pub fn two_switch(g: &Graph, rng: &mut impl Rng) -> Option<Graph> {
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    let sw = propose(g, &edges, rng)?;
    let mut out = g.clone();
    sw.apply(&mut out, &mut edges);
    Some(out)
}

fn term(deviation: usize) -> BigRational {
    let d = BigInt::from(deviation + 1);
    BigRational::new(BigInt::one(), &d * &d)
}

/// `(1/n) Σ_v 1/(|K3deg(v) - r3| + 1)²`, exactly.
pub fn fitness(g: &Graph, r3: usize) -> Result<BigRational> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let sum = g
        .triangle_degrees()
        .into_iter()
        .fold(BigRational::zero(), |acc, t| acc + term(t.abs_diff(r3)));
    Ok(sum / BigInt::from(g.n()))
}

/// Search state with triangle degrees kept in sync with the graph.
struct Climber {
    g: Graph,
    edges: Vec<(usize, usize)>,
    tri: Vec<usize>,
    r3: usize,
    /// Vertices touched by the last move, with their previous triangle degree.
    touched: Vec<(usize, usize)>,
    mark: Vec<bool>,
}

impl Climber {
    fn new(g: Graph, r3: usize) -> Climber {
        let n = g.n();
        Climber {
            edges: g.edges().collect(),
            tri: g.triangle_degrees(),
            g,
            r3,
            touched: Vec::new(),
            mark: vec![false; n],
        }
    }

    fn touch(&mut self, v: usize) {
        if !self.mark[v] {
            self.mark[v] = true;
            self.touched.push((v, self.tri[v]));
        }
    }

    /// Toggles edge `uv` and updates triangle degrees of `u`, `v` and their
    /// common neighbours.
    fn toggle(&mut self, u: usize, v: usize, add: bool) {
        let common: Vec<usize> = self.g.neighbors(u).filter(|&w| self.g.has_edge(v, w)).collect();
        self.touch(u);
        self.touch(v);
        for &w in &common {
            self.touch(w);
        }
        let k = common.len();
        if add {
            self.g.insert_edge(u, v);
            self.tri[u] += k;
            self.tri[v] += k;
            for w in common {
                self.tri[w] += 1;
            }
        } else {
            self.g.remove_edge(u, v);
            self.tri[u] -= k;
            self.tri[v] -= k;
            for w in common {
                self.tri[w] -= 1;
            }
        }
    }

    fn switch(&mut self, sw: &Switch, forward: bool) {
        let (removed, added) = ([(sw.a, sw.b), (sw.c, sw.d)], [(sw.a, sw.c), (sw.b, sw.d)]);
        let (off, on) = if forward { (removed, added) } else { (added, removed) };
        for (u, v) in off {
            self.toggle(u, v, false);
        }
        for (u, v) in on {
            self.toggle(u, v, true);
        }
    }

    /// Applies `sw` and returns the fitness change times `n`.
    fn try_switch(&mut self, sw: &Switch) -> BigRational {
        for (v, _) in self.touched.drain(..) {
            self.mark[v] = false;
        }
        self.switch(sw, true);
        let r3 = self.r3;
        self.touched.iter().fold(BigRational::zero(), |acc, &(v, old)| {
            acc + term(self.tri[v].abs_diff(r3)) - term(old.abs_diff(r3))
        })
    }

    fn undo(&mut self, sw: &Switch) {
        self.switch(sw, false);
    }

    fn commit(&mut self, sw: &Switch) {
        self.edges[sw.i] = (sw.a.min(sw.c), sw.a.max(sw.c));
        self.edges[sw.j] = (sw.b.min(sw.d), sw.b.max(sw.d));
    }
}

struct RestartOutcome {
    graph: Graph,
    fitness: BigRational,
    /// Restart-local `(iteration, fitness)` improvements, starting at 0.
    trace: Vec<(u64, BigRational)>,
    iterations: u64,
}

fn run_restart(config: &SearchConfig, index: u32, cancel: &AtomicUsize) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(index as u64));
    let start = random_regular(config.n, config.r2, &mut rng)?;
    let n = BigInt::from(config.n);
    let mut fit = fitness(&start, config.r3)?;
    let mut climber = Climber::new(start, config.r3);
    let mut trace = vec![(0, fit.clone())];
    let mut plateau = 0u64;
    let mut iterations = 0u64;
    while iterations < config.max_iterations && !fit.is_one() {
        if iterations % 1024 == 0 && cancel.load(AtomicOrdering::Relaxed) < index as usize {
            break;
        }
        iterations += 1;
        let Some(sw) = propose(&climber.g, &climber.edges, &mut rng) else {
            break;
        };
        let delta = climber.try_switch(&sw);
        if delta.is_negative() {
            climber.undo(&sw);
            continue;
        }
        climber.commit(&sw);
        if delta.is_zero() {
            plateau += 1;
            if plateau >= config.plateau_limit {
                break;
            }
        } else {
            plateau = 0;
            fit += delta / &n;
            trace.push((iterations, fit.clone()));
        }
    }
    Ok(RestartOutcome { graph: climber.g, fitness: fit, trace, iterations })
}

/// Runs up to `config.restarts` independent hill climbs.
///
/// Restarts run in parallel batches, but the result is the same as running
/// them in index order and stopping at the first one that reaches fitness 1.
pub fn run_search(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let cancel = AtomicUsize::new(usize::MAX);
    let batch = rayon::current_num_threads().max(1) as u32;
    let mut outcomes: Vec<RestartOutcome> = Vec::new();
    let mut start = 0u32;
    while start < config.restarts {
        let end = start.saturating_add(batch).min(config.restarts);
        let batch_out: Vec<RestartOutcome> = (start..end)
            .into_par_iter()
            .map(|i| {
                let out = run_restart(config, i, &cancel)?;
                if out.fitness.is_one() {
                    cancel.fetch_min(i as usize, AtomicOrdering::Relaxed);
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        outcomes.extend(batch_out);
        if let Some(k) = outcomes.iter().position(|o| o.fitness.is_one()) {
            outcomes.truncate(k + 1);
            break;
        }
        start = end;
    }

    let mut best: Option<usize> = None;
    let mut trace: Vec<(u64, BigRational)> = Vec::new();
    let mut offset = 0u64;
    for (i, o) in outcomes.iter().enumerate() {
        for (it, f) in &o.trace {
            if trace.last().map_or(true, |(_, g)| f > g) {
                trace.push((offset + it, f.clone()));
            }
        }
        if best.map_or(true, |b| o.fitness > outcomes[b].fitness) {
            best = Some(i);
        }
        offset += o.iterations;
    }
    let b = best.expect("at least one restart");
    let winner = outcomes.swap_remove(b);
    let found = winner.fitness.is_one()
        && winner.graph.regularity_parameters() == Some(Parameters::new(config.r2, config.r3));
    Ok(SearchResult {
        status: if found { SearchStatus::Found } else { SearchStatus::Exhausted },
        best_graph: winner.graph,
        best_fitness: winner.fitness,
        fitness_trace: trace,
        iterations_used: offset,
        best_restart: b as u32,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, turan};
    use crate::iso::are_isomorphic;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn random_regular_examples() {
        for seed in 0..5 {
            assert_eq!(random_regular(4, 3, &mut rng(seed)).unwrap(), complete(4).unwrap());
            let g = random_regular(6, 2, &mut rng(seed)).unwrap();
            assert!(g.degrees().iter().all(|&d| d == 2));
        }
        assert_eq!(random_regular(5, 3, &mut rng(0)), Err(Error::ParityError { n: 5, degree: 3 }));
        assert_eq!(random_regular(4, 4, &mut rng(0)), Err(Error::DegreeTooLarge { n: 4, degree: 4 }));
        assert_eq!(random_regular(5, 0, &mut rng(0)).unwrap().edge_count(), 0);
    }

    #[test]
    fn random_regular_is_regular_and_seeded() {
        for (n, d) in [(10, 3), (12, 5), (16, 7), (30, 4), (20, 15), (40, 20)] {
            let g = random_regular(n, d, &mut rng(9)).unwrap();
            assert!(g.degrees().iter().all(|&x| x == d), "({n},{d})");
            assert_eq!(g, random_regular(n, d, &mut rng(9)).unwrap());
        }
    }

    #[test]
    fn fallback_circulant_is_regular() {
        for (n, d) in [(7, 2), (8, 3), (10, 4), (12, 7), (9, 8)] {
            assert!(circulant(n, d).degrees().iter().all(|&x| x == d), "({n},{d})");
        }
    }

    #[test]
    fn two_switch_examples() {
        let c4 = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let mut g = c4.clone();
        let mut edges: Vec<_> = g.edges().collect();
        // edges sorted: 01, 03, 12, 23; take 01 and 23 with a->c = 0-2, b->d = 1-3
        let sw = Switch { i: 0, j: 3, a: 0, b: 1, c: 2, d: 3 };
        assert!(valid(&g, (0, 1), (2, 3)));
        sw.apply(&mut g, &mut edges);
        let want = Graph::from_edge_list(4, &[(0, 2), (1, 3), (1, 2), (0, 3)]).unwrap();
        assert_eq!(g, want);
        assert!(g.degrees().iter().all(|&d| d == 2));

        assert_eq!(two_switch(&complete(4).unwrap(), &mut rng(1)), None);
        let mut r = rng(3);
        let mut g = random_regular(14, 5, &mut r).unwrap();
        for _ in 0..200 {
            g = two_switch(&g, &mut r).unwrap();
            assert!(g.degrees().iter().all(|&d| d == 5));
        }
    }

    #[test]
    fn fitness_examples() {
        assert_eq!(fitness(&turan(6, 3).unwrap(), 4).unwrap(), ratio(1, 1));
        let c5 = Graph::from_edge_list(5, &(0..5).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>()).unwrap();
        assert_eq!(fitness(&c5, 1).unwrap(), ratio(1, 4));
        assert_eq!(fitness(&complete(4).unwrap(), 2).unwrap(), ratio(1, 4));
        assert_eq!(fitness(&Graph::empty(0).unwrap(), 0), Err(Error::EmptyGraph));
    }

    #[test]
    fn incremental_matches_full_recomputation() {
        let mut r = rng(11);
        for (n, d, r3) in [(12, 5, 5), (10, 4, 3), (16, 6, 6)] {
            let g = random_regular(n, d, &mut r).unwrap();
            let mut climber = Climber::new(g, r3);
            let mut fit = fitness(&climber.g, r3).unwrap();
            for _ in 0..300 {
                let sw = propose(&climber.g, &climber.edges, &mut r).unwrap();
                let delta = climber.try_switch(&sw) / BigInt::from(n);
                assert_eq!(climber.tri, climber.g.triangle_degrees());
                assert_eq!(&fit + &delta, fitness(&climber.g, r3).unwrap());
                if r.gen::<bool>() {
                    climber.commit(&sw);
                    fit += delta;
                } else {
                    climber.undo(&sw);
                    assert_eq!(climber.tri, climber.g.triangle_degrees());
                }
                let mut sorted = climber.edges.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, climber.g.edges().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn search_examples() {
        let res = run_search(&SearchConfig::new(4, 4, 6)).unwrap();
        assert_eq!(res.status, SearchStatus::Found);
        assert!(are_isomorphic(&res.best_graph, &turan(6, 3).unwrap()));

        let k4 = run_search(&SearchConfig::new(3, 3, 4)).unwrap();
        assert_eq!(k4.status, SearchStatus::Found);
        assert_eq!(k4.iterations_used, 0);

        let mut cfg = SearchConfig::new(4, 5, 10);
        cfg.max_iterations = 2_000;
        cfg.restarts = 4;
        let res = run_search(&cfg).unwrap();
        assert_eq!(res.status, SearchStatus::Exhausted);
        assert!(res.best_fitness < ratio(1, 1));
    }

    #[test]
    fn search_is_deterministic() {
        let mut cfg = SearchConfig::new(5, 5, 12).with_seed(42);
        cfg.restarts = 6;
        let a = run_search(&cfg).unwrap();
        let b = run_search(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.fitness_trace.windows(2).all(|w| w[0].1 < w[1].1 && w[0].0 <= w[1].0));
    }

    #[test]
    fn config_validation() {
        assert_eq!(SearchConfig::new(3, 0, 5).validate(), Err(Error::ParityError { n: 5, degree: 3 }));
        let mut cfg = SearchConfig::new(2, 0, 5);
        cfg.restarts = 0;
        assert!(matches!(cfg.validate(), Err(Error::InvalidArgument(_))));
    }
}
