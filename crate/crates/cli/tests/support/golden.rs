//! Reading markdown admissibility tables and normalizing cell labels.

use std::collections::BTreeMap;
use std::path::PathBuf;

pub fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/table1.md")
}

/// `(r2, r3) -> label` from a markdown grid with `r2` columns and `r3` rows.
pub fn parse_markdown_table(text: &str) -> BTreeMap<(usize, usize), String> {
    let rows: Vec<Vec<String>> = text
        .lines()
        .map(str::trim)
        .filter(|l| l.starts_with('|'))
        .map(|l| l.trim_matches('|').split('|').map(|c| c.trim().to_string()).collect())
        .collect();
    let header: Vec<usize> = rows[0][1..].iter().map(|c| c.parse().expect("r2 header")).collect();
    let mut cells = BTreeMap::new();
    for row in &rows[1..] {
        if row[0].starts_with('-') {
            continue;
        }
        let r3: usize = row[0].parse().expect("r3 label");
        for (label, &r2) in row[1..].iter().zip(&header) {
            cells.insert((r2, r3), label.clone());
        }
    }
    cells
}

/// Status class shared by the published labels and the rendered ones.
pub fn normalize(label: &str) -> &'static str {
    match label {
        "No1" | "No(UB)" => "upper-bound",
        "No2" | "No3" | "No(TD)" | "No(PM)" => "closed-form-gap",
        "No(EH)" => "edge-handshake",
        "No4" | "No(EX)" => "exhaustive",
        "Unknown" => "unknown",
        _ => "exists",
    }
}
