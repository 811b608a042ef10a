//! Witness graphs and construction recipes.
//!
//! A recipe is an expression over atoms (complete graphs, balanced Turán
//! graphs and the five catalogued named graphs) combined by Cartesian
//! products. Parameters add under products, so a recipe's expected
//! parameters are known without building the graph.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::decode_edge_list;
use crate::graph::{Graph, Parameters};

pub(crate) const fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// The complete graph `K_n`.
pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Graph::from_fn(n, |_, _| true)
}

/// The complete `r`-partite graph on `n` vertices with equal parts.
/// Vertex `v` lies in part `v / (n / r)`.
pub fn turan(n: usize, r: usize) -> Result<Graph> {
    if r == 0 {
        return Err(Error::InvalidArgument("Turán graph needs at least one part".into()));
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n % r != 0 {
        return Err(Error::IndivisibleParts { n, parts: r });
    }
    let size = n / r;
    Graph::from_fn(n, |u, v| u / size != v / size)
}

/// `G □ K2`: raises the degree by one and keeps the triangle degree.
pub fn blow_up(g: &Graph) -> Result<Graph> {
    g.cartesian_product(&complete(2)?)
}

/// The catalogued witness graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NamedGraph {
    /// The icosahedron, parameters (5, 5).
    G1,
    /// 18 vertices, parameters (6, 8).
    G2,
    /// 10 vertices, parameters (6, 9).
    G3,
    /// 12 vertices, parameters (7, 13).
    G4,
    /// 15 vertices, parameters (8, 14).
    G5,
}

impl NamedGraph {
    pub const ALL: [NamedGraph; 5] =
        [NamedGraph::G1, NamedGraph::G2, NamedGraph::G3, NamedGraph::G4, NamedGraph::G5];

    pub fn parameters(self) -> Parameters {
        match self {
            NamedGraph::G1 => Parameters::new(5, 5),
            NamedGraph::G2 => Parameters::new(6, 8),
            NamedGraph::G3 => Parameters::new(6, 9),
            NamedGraph::G4 => Parameters::new(7, 13),
            NamedGraph::G5 => Parameters::new(8, 14),
        }
    }

    /// Raw edge-list text shipped with the crate.
    pub fn edge_list_text(self) -> &'static str {
        match self {
            NamedGraph::G1 => include_str!("../data/named/g1.el"),
            NamedGraph::G2 => include_str!("../data/named/g2.el"),
            NamedGraph::G3 => include_str!("../data/named/g3.el"),
            NamedGraph::G4 => include_str!("../data/named/g4.el"),
            NamedGraph::G5 => include_str!("../data/named/g5.el"),
        }
    }

    pub fn graph(self) -> Graph {
        decode_edge_list(self.edge_list_text()).expect("shipped edge lists are well-formed")
    }
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for NamedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "G1" => Ok(NamedGraph::G1),
            "G2" => Ok(NamedGraph::G2),
            "G3" => Ok(NamedGraph::G3),
            "G4" => Ok(NamedGraph::G4),
            "G5" => Ok(NamedGraph::G5),
            _ => Err(Error::UnknownGraph(s.to_string())),
        }
    }
}

/// Looks up a named graph by its identifier (`"G1"` .. `"G5"`).
pub fn named_graph(id: &str) -> Result<Graph> {
    Ok(id.parse::<NamedGraph>()?.graph())
}

/// Building blocks of recipes. The derived order (complete < Turán < named)
/// is the tie-break order used by [`Constructor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    Complete(usize),
    Turan(usize, usize),
    Named(NamedGraph),
}

impl Atom {
    pub fn parameters(self) -> Result<Parameters> {
        match self {
            Atom::Complete(0) => Err(Error::InvalidRecipe("K0 has no vertices".into())),
            Atom::Complete(n) => Ok(Parameters::new(n - 1, choose2(n - 1))),
            Atom::Turan(n, r) if r == 0 || n == 0 || n % r != 0 => {
                Err(Error::InvalidRecipe(format!("T{n},{r} needs r >= 1 dividing n >= 1")))
            }
            Atom::Turan(n, r) => {
                let size = n / r;
                Ok(Parameters::new(size * (r - 1), choose2(r - 1) * size * size))
            }
            Atom::Named(id) => Ok(id.parameters()),
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            Atom::Complete(n) | Atom::Turan(n, _) => n,
            Atom::Named(id) => id.graph().n(),
        }
    }

    pub fn graph(self) -> Result<Graph> {
        match self {
            Atom::Complete(n) => complete(n),
            Atom::Turan(n, r) => turan(n, r),
            Atom::Named(id) => Ok(id.graph()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Complete(n) => write!(f, "K{n}"),
            Atom::Turan(n, r) => write!(f, "T{n},{r}"),
            Atom::Named(id) => write!(f, "{id}"),
        }
    }
}

/// Expression tree over atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Recipe {
    Atom(Atom),
    Product(Vec<Recipe>),
}

impl Recipe {
    /// Product of atoms in the given order, collapsing a single factor.
    pub fn product_of(atoms: &[Atom]) -> Recipe {
        match atoms {
            [a] => Recipe::Atom(*a),
            _ => Recipe::Product(atoms.iter().map(|&a| Recipe::Atom(a)).collect()),
        }
    }

    /// Parameters by additivity over products.
    pub fn parameters(&self) -> Result<Parameters> {
        match self {
            Recipe::Atom(a) => a.parameters(),
            Recipe::Product(parts) if parts.is_empty() => {
                Err(Error::InvalidRecipe("empty product".into()))
            }
            Recipe::Product(parts) => parts
                .iter()
                .try_fold(Parameters::new(0, 0), |acc, p| Ok(acc + p.parameters()?)),
        }
    }

    /// Vertices of the evaluated graph (saturating).
    pub fn vertex_count(&self) -> usize {
        self.atoms().iter().fold(1usize, |acc, a| acc.saturating_mul(a.vertex_count()))
    }

    /// All atoms, left to right.
    pub fn atoms(&self) -> Vec<Atom> {
        match self {
            Recipe::Atom(a) => vec![*a],
            Recipe::Product(parts) => parts.iter().flat_map(Recipe::atoms).collect(),
        }
    }

    /// Builds the graph, folding products left to right with row-major indexing.
    pub fn evaluate(&self) -> Result<Graph> {
        match self {
            Recipe::Atom(a) => a.graph().map_err(|e| match e {
                Error::IndivisibleParts { .. } | Error::EmptyGraph | Error::InvalidArgument(_) => {
                    Error::InvalidRecipe(format!("{a}: {e}"))
                }
                other => other,
            }),
            Recipe::Product(parts) => {
                let (first, rest) = parts
                    .split_first()
                    .ok_or_else(|| Error::InvalidRecipe("empty product".into()))?;
                rest.iter().try_fold(first.evaluate()?, |acc, p| acc.cartesian_product(&p.evaluate()?))
            }
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Atom(a) => write!(f, "{a}"),
            Recipe::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    match p {
                        Recipe::Product(_) => write!(f, "({p})")?,
                        Recipe::Atom(_) => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Grammar: `expr := term ('x' term)*`, `term := K<n> | T<n>,<r> | G1..G5 | '(' expr ')'`.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::InvalidRecipe(format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.err("expected a number"))
    }

    fn expr(&mut self) -> Result<Recipe> {
        let mut parts = vec![self.term()?];
        while matches!(self.peek(), Some(b'x' | b'X' | b'*')) {
            self.pos += 1;
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Recipe::Product(parts) })
    }

    fn term(&mut self) -> Result<Recipe> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'K' | b'k') => {
                self.pos += 1;
                Ok(Recipe::Atom(Atom::Complete(self.number()?)))
            }
            Some(b'T' | b't') => {
                self.pos += 1;
                let n = self.number()?;
                if self.src.get(self.pos) != Some(&b',') {
                    return Err(self.err("expected ',' in T<n>,<r>"));
                }
                self.pos += 1;
                Ok(Recipe::Atom(Atom::Turan(n, self.number()?)))
            }
            Some(b'G' | b'g') => {
                let start = self.pos;
                self.pos += 1;
                self.number()?;
                let id = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(Recipe::Atom(Atom::Named(id.parse()?)))
            }
            _ => Err(self.err("expected K<n>, T<n>,<r>, G<i> or '('")),
        }
    }
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Recipe> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

/// A recipe together with the parameters its graph must have.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstructionRecipe {
    pub expr: Recipe,
    pub expected_parameters: Parameters,
}

impl ConstructionRecipe {
    pub fn new(expr: Recipe) -> Result<ConstructionRecipe> {
        let expected_parameters = expr.parameters()?;
        Ok(ConstructionRecipe { expr, expected_parameters })
    }

    pub fn evaluate(&self) -> Result<Graph> {
        self.expr.evaluate()
    }

    /// True when this recipe is `left □ K2` up to the order of factors.
    pub fn is_blow_up_of(&self, left: &ConstructionRecipe) -> bool {
        let mut mine = self.expr.atoms();
        let mut theirs = left.expr.atoms();
        theirs.push(Atom::Complete(2));
        mine.sort_unstable();
        theirs.sort_unstable();
        mine == theirs
    }
}

impl fmt::Display for ConstructionRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

/// Evaluates a recipe.
pub fn evaluate(recipe: &ConstructionRecipe) -> Result<Graph> {
    recipe.evaluate()
}

/// Default bound on `r2` for [`construct_for`].
pub const DEFAULT_MAX_R2: usize = 32;

const UNREACHABLE: u8 = u8::MAX;

/// Finds recipes by an unbounded-knapsack search over parameter space.
///
/// Atoms are `K_n` (`2 <= n <= max_r2 + 1`), `Turan(n, r)` with
/// `3 <= r < n`, `r | n`, `n <= max_r2 + 2`, and `G1..G5`, restricted to
/// `r2 <= max_r2`. Among recipes reaching a target the fewest atoms win;
/// ties go to the lexicographically smallest factor list written in
/// decreasing atom order. Pairs with `r3 = 0` are answered directly by
/// `K1`, `K2` or `K_{m,m}`.
pub struct Constructor {
    max_r2: usize,
    max_r3: usize,
    atoms: Vec<(Atom, Parameters)>,
    /// `min_count[i][t]`: fewest atoms from `atoms[..=i]` summing to cell `t`.
    min_count: Vec<Vec<u8>>,
}

impl Constructor {
    pub fn new(max_r2: usize) -> Constructor {
        let max_r3 = choose2(max_r2);
        let mut atoms: Vec<Atom> = (2..=max_r2 + 1).map(Atom::Complete).collect();
        for n in 4..=max_r2 + 2 {
            for r in 3..n {
                if n % r == 0 {
                    atoms.push(Atom::Turan(n, r));
                }
            }
        }
        atoms.extend(NamedGraph::ALL.map(Atom::Named));
        atoms.sort_unstable();
        let atoms: Vec<(Atom, Parameters)> = atoms
            .into_iter()
            .map(|a| (a, a.parameters().expect("well-formed atom")))
            .filter(|(_, p)| p.r2 >= 1 && p.r2 <= max_r2 && p.r3 <= max_r3)
            .collect();

        let cells = (max_r2 + 1) * (max_r3 + 1);
        let idx = |p: Parameters| p.r2 * (max_r3 + 1) + p.r3;
        let mut min_count: Vec<Vec<u8>> = Vec::with_capacity(atoms.len());
        for (i, &(_, a)) in atoms.iter().enumerate() {
            let mut row = match i {
                0 => {
                    let mut r = vec![UNREACHABLE; cells];
                    r[0] = 0;
                    r
                }
                _ => min_count[i - 1].clone(),
            };
            for r2 in a.r2..=max_r2 {
                for r3 in a.r3..=max_r3 {
                    let t = Parameters::new(r2, r3);
                    let prev = row[idx(Parameters::new(r2 - a.r2, r3 - a.r3))];
                    if prev != UNREACHABLE && prev + 1 < row[idx(t)] {
                        row[idx(t)] = prev + 1;
                    }
                }
            }
            min_count.push(row);
        }
        Constructor { max_r2, max_r3, atoms, min_count }
    }

    /// The process-wide constructor with the default bound.
    pub fn shared() -> &'static Constructor {
        static SHARED: OnceLock<Constructor> = OnceLock::new();
        SHARED.get_or_init(|| Constructor::new(DEFAULT_MAX_R2))
    }

    pub fn max_r2(&self) -> usize {
        self.max_r2
    }

    pub fn atom_parameters(&self) -> impl Iterator<Item = (Atom, Parameters)> + '_ {
        self.atoms.iter().copied()
    }

    fn idx(&self, p: Parameters) -> usize {
        p.r2 * (self.max_r3 + 1) + p.r3
    }

    pub fn construct_for(&self, r2: usize, r3: usize) -> Option<ConstructionRecipe> {
        if r2 > self.max_r2 {
            return None;
        }
        if r3 == 0 {
            let atom = match r2 {
                0 => Atom::Complete(1),
                1 => Atom::Complete(2),
                m => Atom::Turan(2 * m, 2),
            };
            return ConstructionRecipe::new(Recipe::Atom(atom)).ok();
        }
        if r3 > self.max_r3 || self.atoms.is_empty() {
            return None;
        }
        let mut target = Parameters::new(r2, r3);
        let mut limit = self.atoms.len() - 1;
        let mut count = self.min_count[limit][self.idx(target)];
        if count == UNREACHABLE {
            return None;
        }
        let mut chosen = Vec::with_capacity(count as usize);
        while count > 0 {
            let j = (0..=limit)
                .find(|&j| {
                    let a = self.atoms[j].1;
                    a.r2 <= target.r2
                        && a.r3 <= target.r3
                        && self.min_count[j][self.idx(Parameters::new(target.r2 - a.r2, target.r3 - a.r3))]
                            == count - 1
                })
                .expect("minimum count is realizable");
            let (atom, a) = self.atoms[j];
            chosen.push(atom);
            target = Parameters::new(target.r2 - a.r2, target.r3 - a.r3);
            limit = j;
            count -= 1;
        }
        let recipe = ConstructionRecipe::new(Recipe::product_of(&chosen)).expect("valid atoms");
        debug_assert_eq!(recipe.expected_parameters, Parameters::new(r2, r3));
        Some(recipe)
    }
}

/// A recipe realizing `(r2, r3)` from the default atom set, if one exists.
pub fn construct_for(r2: usize, r3: usize) -> Option<ConstructionRecipe> {
    Constructor::shared().construct_for(r2, r3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g: &Graph) -> Option<Parameters> {
        g.regularity_parameters()
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(params(&complete(6).unwrap()), Some(Parameters::new(5, 10)));
        assert_eq!(params(&complete(2).unwrap()), Some(Parameters::new(1, 0)));
        assert_eq!(params(&complete(1).unwrap()), Some(Parameters::new(0, 0)));
        assert_eq!(complete(0), Err(Error::EmptyGraph));
    }

    #[test]
    fn turan_graphs() {
        assert_eq!(params(&turan(6, 3).unwrap()), Some(Parameters::new(4, 4)));
        assert_eq!(params(&turan(8, 4).unwrap()), Some(Parameters::new(6, 12)));
        assert_eq!(turan(7, 3), Err(Error::IndivisibleParts { n: 7, parts: 3 }));
        // r < 3: computed from the graph itself
        assert_eq!(params(&turan(6, 2).unwrap()), Some(Parameters::new(3, 0)));
        assert_eq!(params(&turan(5, 1).unwrap()), Some(Parameters::new(0, 0)));
    }

    #[test]
    fn turan_formula_up_to_16() {
        for n in 1..=16 {
            for r in 1..=n {
                if n % r != 0 {
                    continue;
                }
                let g = turan(n, r).unwrap();
                let expected = Atom::Turan(n, r).parameters().unwrap();
                assert_eq!(params(&g), Some(expected), "T{n},{r}");
                if r >= 3 {
                    let s = n / r;
                    assert_eq!(expected, Parameters::new(s * (r - 1), choose2(r - 1) * s * s));
                }
            }
        }
    }

    #[test]
    fn named_graphs_match_captions() {
        for id in NamedGraph::ALL {
            let g = id.graph();
            assert_eq!(params(&g), Some(id.parameters()), "{id}");
            assert_eq!(g.is_connected(), Ok(true));
        }
        assert_eq!(named_graph("G4").unwrap().n(), 12);
        assert!(matches!(named_graph("G6"), Err(Error::UnknownGraph(_))));
    }

    #[test]
    fn blow_ups() {
        let b = blow_up(&complete(4).unwrap()).unwrap();
        assert_eq!(params(&b), Some(Parameters::new(4, 3)));
        let b = blow_up(&turan(6, 3).unwrap()).unwrap();
        assert_eq!(params(&b), Some(Parameters::new(5, 4)));
        let c4 = blow_up(&complete(2).unwrap()).unwrap();
        assert_eq!(params(&c4), Some(Parameters::new(2, 0)));
        assert_eq!(c4.edge_count(), 4);
        assert_eq!(blow_up(&Graph::empty(0).unwrap()), Err(Error::EmptyFactor));
    }

    #[test]
    fn recipe_parsing_and_display() {
        let r: Recipe = "K5 x K3 x K3".parse().unwrap();
        assert_eq!(r.to_string(), "K5 x K3 x K3");
        assert_eq!(r.parameters().unwrap(), Parameters::new(8, 8));
        let r: Recipe = "(T6,3 x K3) x G1".parse().unwrap();
        assert_eq!(r.to_string(), "(T6,3 x K3) x G1");
        assert_eq!(r.parameters().unwrap(), Parameters::new(11, 10));
        assert_eq!("K5xK4".parse::<Recipe>().unwrap().parameters().unwrap(), Parameters::new(7, 9));
        assert!(matches!("K5 x".parse::<Recipe>(), Err(Error::InvalidRecipe(_))));
        assert!(matches!("T7".parse::<Recipe>(), Err(Error::InvalidRecipe(_))));
        assert!(matches!("G9".parse::<Recipe>(), Err(Error::UnknownGraph(_))));
        assert!(matches!("(K3".parse::<Recipe>(), Err(Error::InvalidRecipe(_))));
    }

    #[test]
    fn evaluation() {
        let check = |s: &str, p: (usize, usize)| {
            let rec = ConstructionRecipe::new(s.parse().unwrap()).unwrap();
            assert_eq!(rec.expected_parameters, Parameters::new(p.0, p.1));
            assert_eq!(params(&rec.evaluate().unwrap()), Some(rec.expected_parameters), "{s}");
        };
        check("K5 x K3", (6, 7));
        check("K5 x K3 x K3", (8, 8));
        check("G1", (5, 5));
        assert!(matches!(ConstructionRecipe::new("T7,3".parse().unwrap()), Err(Error::InvalidRecipe(_))));
        assert!(matches!(Recipe::Product(vec![]).evaluate(), Err(Error::InvalidRecipe(_))));
        assert!(matches!(Recipe::Atom(Atom::Turan(7, 3)).evaluate(), Err(Error::InvalidRecipe(_))));
    }

    #[test]
    fn construct_for_examples() {
        let r = construct_for(7, 9).unwrap();
        assert_eq!(r.to_string(), "K5 x K4");
        assert_eq!(construct_for(4, 2).unwrap().to_string(), "K3 x K3");
        assert_eq!(construct_for(1, 0).unwrap().to_string(), "K2");
        assert_eq!(construct_for(0, 0).unwrap().to_string(), "K1");
        assert_eq!(construct_for(3, 0).unwrap().to_string(), "T6,2");
        assert_eq!(construct_for(2, 1).unwrap().to_string(), "K3");
        assert_eq!(construct_for(3, 1).unwrap().to_string(), "K3 x K2");
        assert_eq!(construct_for(6, 5).unwrap().to_string(), "T6,3 x K3");
        assert_eq!(construct_for(6, 9).unwrap().to_string(), "T9,3");
        assert_eq!(construct_for(8, 16).unwrap().to_string(), "T12,3");
        assert!(construct_for(8, 17).is_none());
        assert!(construct_for(4, 5).is_none());
        assert!(construct_for(33, 1).is_none());
    }

    #[test]
    fn recipes_are_sound_across_small_grid() {
        let c = Constructor::new(10);
        for r2 in 0..=10 {
            for r3 in 0..=choose2(r2) {
                if let Some(rec) = c.construct_for(r2, r3) {
                    assert_eq!(rec.expected_parameters, Parameters::new(r2, r3));
                    if rec.evaluate().unwrap().n() <= 400 {
                        assert_eq!(params(&rec.evaluate().unwrap()), Some(Parameters::new(r2, r3)), "{rec}");
                    }
                }
            }
        }
    }

    #[test]
    fn blow_up_detection() {
        let k3 = ConstructionRecipe::new("K3".parse().unwrap()).unwrap();
        let k3k2 = ConstructionRecipe::new("K2 x K3".parse().unwrap()).unwrap();
        assert!(k3k2.is_blow_up_of(&k3));
        assert!(!k3.is_blow_up_of(&k3k2));
    }
}
