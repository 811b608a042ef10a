//! Decision procedures for parameter pairs `(r2, r3)`.
//!
//! Classification applies, in this fixed order: the triangle upper bound
//! `r3 <= C(r2, 2)`, the two closed-form gap rules just below `C(r2, 2)` and
//! just above `C(r2 - 1, 2)`, the edge-degree handshake test, and a short
//! curated list of exhaustively excluded pairs. Anything not forbidden is
//! looked up in the recipe search; what remains is unknown.
//!
//! All interval endpoints are evaluated in integer arithmetic
//! (`c <= (r2 - 1) / 2` is tested as `2c <= r2 - 1`).

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{choose2, construct_for, ConstructionRecipe};
use crate::graph::Parameters;

/// Why a pair cannot be realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ForbiddingRule {
    /// `r3 > C(r2, 2)`.
    UpperBound,
    /// `r3 = C(r2, 2) - c` with `1 <= c <= (r2 - 1) / 2`, `r2 >= 3`.
    TheoremDownGap,
    /// `r3 = C(r2 - 1, 2) + c` with `0 < c < (r2 - 2) / 2`, `r2 > 4`.
    PropositionMidGap,
    /// No multiset of admissible edge triangle degrees sums to `2 r3`.
    EdgeHandshake,
    /// Listed in the curated exclusion file.
    CuratedExhaustive,
}

impl ForbiddingRule {
    pub fn short_tag(self) -> &'static str {
        match self {
            ForbiddingRule::UpperBound => "UB",
            ForbiddingRule::TheoremDownGap => "TD",
            ForbiddingRule::PropositionMidGap => "PM",
            ForbiddingRule::EdgeHandshake => "EH",
            ForbiddingRule::CuratedExhaustive => "EX",
        }
    }

    pub fn is_closed_form(self) -> bool {
        matches!(
            self,
            ForbiddingRule::UpperBound | ForbiddingRule::TheoremDownGap | ForbiddingRule::PropositionMidGap
        )
    }
}

impl fmt::Display for ForbiddingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Classification of a parameter pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Forbidden(ForbiddingRule),
    Exists(ConstructionRecipe),
    Unknown,
}

impl Verdict {
    pub fn is_forbidden(&self) -> bool {
        matches!(self, Verdict::Forbidden(_))
    }

    pub fn witness(&self) -> Option<&ConstructionRecipe> {
        match self {
            Verdict::Exists(r) => Some(r),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Forbidden(_) => "forbidden",
            Verdict::Exists(_) => "exists",
            Verdict::Unknown => "unknown",
        }
    }
}

/// The first closed-form rule excluding `(r2, r3)`, if any.
pub fn closed_form_forbidden(r2: usize, r3: usize) -> Option<ForbiddingRule> {
    let top = choose2(r2);
    if r3 > top {
        return Some(ForbiddingRule::UpperBound);
    }
    let c = top - r3;
    if r2 >= 3 && c >= 1 && 2 * c <= r2 - 1 {
        return Some(ForbiddingRule::TheoremDownGap);
    }
    if r2 > 4 {
        let c = r3 as i64 - choose2(r2 - 1) as i64;
        if c > 0 && 2 * c < r2 as i64 - 2 {
            return Some(ForbiddingRule::PropositionMidGap);
        }
    }
    None
}

/// Edge triangle degrees `k` compatible with parameters `(r2, r3)`:
/// `k <= min(r3, r2 - 1)` and `2 r3 <= (r2 - k - 1)(r2 - 2) + k(k + 1)`.
pub fn edge_degree_feasible_set(r2: usize, r3: usize) -> Vec<usize> {
    if r2 == 0 {
        return Vec::new();
    }
    let (r2i, r3i) = (r2 as i64, r3 as i64);
    (0..=r3.min(r2 - 1))
        .filter(|&k| {
            let k = k as i64;
            2 * r3i <= (r2i - k - 1) * (r2i - 2) + k * (k + 1)
        })
        .collect()
}

/// Counts per edge degree: `r2` values from the feasible set summing to `2 r3`.
/// Returns `(k, multiplicity)` pairs, or `None` when no such multiset exists.
pub fn edge_handshake_witness(r2: usize, r3: usize) -> Option<Vec<(usize, usize)>> {
    if r2 == 0 {
        return (r3 == 0).then(Vec::new);
    }
    let set = edge_degree_feasible_set(r2, r3);
    let target = 2 * r3;
    // reach[c][s]: index into `set` of the last value used to reach sum s with c values
    let mut reach: Vec<Vec<Option<usize>>> = vec![vec![None; target + 1]; r2 + 1];
    let mut ok = vec![vec![false; target + 1]; r2 + 1];
    ok[0][0] = true;
    for c in 0..r2 {
        for s in 0..=target {
            if !ok[c][s] {
                continue;
            }
            for (i, &k) in set.iter().enumerate() {
                if s + k <= target && !ok[c + 1][s + k] {
                    ok[c + 1][s + k] = true;
                    reach[c + 1][s + k] = Some(i);
                }
            }
        }
    }
    if !ok[r2][target] {
        return None;
    }
    let mut counts = vec![0usize; set.len()];
    let (mut c, mut s) = (r2, target);
    while c > 0 {
        let i = reach[c][s].expect("reachable state has a predecessor");
        counts[i] += 1;
        s -= set[i];
        c -= 1;
    }
    Some(set.into_iter().zip(counts).filter(|&(_, m)| m > 0).collect())
}

/// True iff some `r2` edge degrees from the feasible set sum to `2 r3`.
/// `false` proves that no graph with these parameters exists.
pub fn edge_handshake_feasible(r2: usize, r3: usize) -> bool {
    edge_handshake_witness(r2, r3).is_some()
}

/// All non-negative coefficient vectors `x` with `Σ x_i atoms_i = (r2, r3)`.
///
/// Atoms equal to `(0, 0)` always get coefficient zero. Solutions are listed
/// in lexicographic order of the coefficient vectors.
pub fn atom_sum_decomposition(r2: usize, r3: usize, atoms: &[Parameters]) -> Vec<Vec<usize>> {
    fn go(
        i: usize,
        left: Parameters,
        atoms: &[Parameters],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == atoms.len() {
            if left == Parameters::new(0, 0) {
                out.push(cur.clone());
            }
            return;
        }
        let a = atoms[i];
        let bound = match (a.r2, a.r3) {
            (0, 0) => 0,
            (0, y) => left.r3 / y,
            (x, 0) => left.r2 / x,
            (x, y) => (left.r2 / x).min(left.r3 / y),
        };
        for k in 0..=bound {
            cur.push(k);
            go(i + 1, Parameters::new(left.r2 - k * a.r2, left.r3 - k * a.r3), atoms, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, Parameters::new(r2, r3), atoms, &mut Vec::with_capacity(atoms.len()), &mut out);
    out
}

/// Pairs decided by exhaustive analysis and pairs documented as open.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CuratedCells {
    pub excluded: Vec<Parameters>,
    pub open: Vec<Parameters>,
}

impl CuratedCells {
    pub fn parse(text: &str) -> Result<CuratedCells, String> {
        let mut cells = CuratedCells::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [kind, r2, r3] = fields[..] else {
                return Err(format!("line {}: expected '<kind> <r2> <r3>'", i + 1));
            };
            let num = |s: &str| s.parse::<usize>().map_err(|e| format!("line {}: {e}", i + 1));
            let p = Parameters::new(num(r2)?, num(r3)?);
            match kind {
                "excluded" => cells.excluded.push(p),
                "open" => cells.open.push(p),
                other => return Err(format!("line {}: unknown kind '{other}'", i + 1)),
            }
        }
        Ok(cells)
    }

    pub fn shipped() -> &'static CuratedCells {
        static CELLS: OnceLock<CuratedCells> = OnceLock::new();
        CELLS.get_or_init(|| {
            CuratedCells::parse(include_str!("../data/feasibility.txt")).expect("shipped data parses")
        })
    }
}

/// Classifies `(r2, r3)` as forbidden (with the first matching rule),
/// realizable (with a witness recipe) or unknown.
pub fn classify(r2: usize, r3: usize) -> Verdict {
    if let Some(rule) = closed_form_forbidden(r2, r3) {
        return Verdict::Forbidden(rule);
    }
    if !edge_handshake_feasible(r2, r3) {
        return Verdict::Forbidden(ForbiddingRule::EdgeHandshake);
    }
    if CuratedCells::shipped().excluded.contains(&Parameters::new(r2, r3)) {
        return Verdict::Forbidden(ForbiddingRule::CuratedExhaustive);
    }
    match construct_for(r2, r3) {
        Some(recipe) => Verdict::Exists(recipe),
        None => Verdict::Unknown,
    }
}

/// Pairs with `r2 <= max_r2` forbidden only by the edge-handshake rule.
pub fn handshake_only_cells(max_r2: usize) -> Vec<Parameters> {
    (1..=max_r2)
        .flat_map(|r2| (0..=choose2(r2)).map(move |r3| (r2, r3)))
        .filter(|&(r2, r3)| closed_form_forbidden(r2, r3).is_none() && !edge_handshake_feasible(r2, r3))
        .map(|(r2, r3)| Parameters::new(r2, r3))
        .collect()
}

/// Smallest `r2` in `1..=max_r2` with a realizable `(r2, r3)`.
///
/// This is an upper bound on the true threshold: cells classified unknown
/// are skipped.
pub fn known_threshold(r3: usize, max_r2: usize) -> Option<usize> {
    (1..=max_r2).find(|&r2| matches!(classify(r2, r3), Verdict::Exists(_)))
}

/// One cell of the admissibility grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCell {
    pub r2: usize,
    pub r3: usize,
    pub verdict: Verdict,
    /// The witness is the left neighbour's witness times `K2`.
    pub blow_up: bool,
}

impl TableCell {
    /// Short label used in the markdown rendering.
    pub fn label(&self) -> String {
        match &self.verdict {
            Verdict::Forbidden(rule) => format!("No({})", rule.short_tag()),
            Verdict::Exists(_) if self.blow_up => "→".to_string(),
            Verdict::Exists(r) => r.to_string(),
            Verdict::Unknown => "Unknown".to_string(),
        }
    }
}

/// Verdict grid over `r2 = 2..=max_r2` (columns) and `r3 = 1..=max_r3` (rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityTable {
    pub max_r2: usize,
    pub max_r3: usize,
    /// Row-major by `(r3, r2)`.
    pub cells: Vec<TableCell>,
}

pub const TABLE_MIN_R2: usize = 2;
pub const TABLE_MIN_R3: usize = 1;

/// Classifies every cell of the grid; cells are evaluated in parallel and
/// returned ordered by `(r3, r2)`.
pub fn admissibility_table(max_r2: usize, max_r3: usize) -> AdmissibilityTable {
    let coords: Vec<(usize, usize)> = (TABLE_MIN_R3..=max_r3)
        .flat_map(|r3| (TABLE_MIN_R2..=max_r2).map(move |r2| (r2, r3)))
        .collect();
    let verdicts: Vec<Verdict> = coords.par_iter().map(|&(r2, r3)| classify(r2, r3)).collect();
    let mut cells: Vec<TableCell> = coords
        .iter()
        .zip(verdicts)
        .map(|(&(r2, r3), verdict)| TableCell { r2, r3, verdict, blow_up: false })
        .collect();
    for i in 1..cells.len() {
        if cells[i].r2 == TABLE_MIN_R2 {
            continue;
        }
        if let (Verdict::Exists(mine), Verdict::Exists(left)) = (&cells[i].verdict, &cells[i - 1].verdict) {
            cells[i].blow_up = mine.is_blow_up_of(left);
        }
    }
    AdmissibilityTable { max_r2, max_r3, cells }
}

impl AdmissibilityTable {
    pub fn cell(&self, r2: usize, r3: usize) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.r2 == r2 && c.r3 == r3)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[TableCell]> {
        let width = (self.max_r2 + 1).saturating_sub(TABLE_MIN_R2).max(1);
        self.cells.chunks(width)
    }

    /// Aligned markdown: rows `r3`, columns `r2`, arrows for blow-ups.
    pub fn to_markdown(&self) -> String {
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["r3 \\ r2".to_string()];
        header.extend((TABLE_MIN_R2..=self.max_r2).map(|r2| r2.to_string()));
        grid.push(header);
        for row in self.rows() {
            let mut line = vec![row[0].r3.to_string()];
            line.extend(row.iter().map(TableCell::label));
            grid.push(line);
        }
        let cols = grid[0].len();
        let widths: Vec<usize> =
            (0..cols).map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(1).max(3)).collect();
        let fmt_row = |r: &[String]| {
            let mut s = String::from("|");
            for (cell, &w) in r.iter().zip(&widths) {
                s.push(' ');
                s.push_str(cell);
                s.push_str(&" ".repeat(w - cell.chars().count()));
                s.push_str(" |");
            }
            s.push('\n');
            s
        };
        let mut out = fmt_row(&grid[0]);
        out.push('|');
        for &w in &widths {
            out.push_str(&"-".repeat(w + 2));
            out.push('|');
        }
        out.push('\n');
        for r in &grid[1..] {
            out.push_str(&fmt_row(r));
        }
        out
    }

    /// One line per cell: `r2,r3,status,rule,witness,blow_up`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r2,r3,status,rule,witness,blow_up\n");
        for c in &self.cells {
            let rule = match &c.verdict {
                Verdict::Forbidden(r) => r.to_string(),
                _ => String::new(),
            };
            let witness = c.verdict.witness().map(|r| r.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{},{}\n", c.r2, c.r3, c.verdict.status(), rule, witness, c.blow_up));
        }
        out
    }
}
