//! Placement delivery arrays: the F x K star/integer array model, validation
//! of the three defining conditions plus regularity, conversion from a
//! caching line graph with its transmission cover, and plain-text CSV I/O.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde_json::{json, Value};
use thiserror::Error;

use crate::linegraph::{CachingLineGraph, TransmissionCover};

/// One cell of a PDA: a star (cached, never transmitted) or a 1-based
/// transmission label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entry {
    Star,
    Int(u32),
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Star => write!(f, "*"),
            Entry::Int(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum PdaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at row {row}, column {col}: {message}")]
    ParseError {
        row: usize,
        col: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An F x K placement delivery array stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda {
    pub users: usize,
    pub subfiles: usize,
    /// `entries[f][k]` is the cell for subfile f, user k.
    pub entries: Vec<Vec<Entry>>,
    /// Construction metadata (q, k, m, t) when derived from a geometry.
    pub params: Option<(u64, u32, u32, u32)>,
}

impl Pda {
    pub fn new(users: usize, subfiles: usize, entries: Vec<Vec<Entry>>) -> Result<Self, PdaError> {
        if entries.len() != subfiles || entries.iter().any(|r| r.len() != users) {
            return Err(PdaError::InvalidInput(format!(
                "expected {subfiles} rows of {users} entries"
            )));
        }
        Ok(Pda {
            users,
            subfiles,
            entries,
            params: None,
        })
    }

    pub fn entry(&self, subfile: usize, user: usize) -> Entry {
        self.entries[subfile][user]
    }

    /// Positions of every integer label, keyed by label, each sorted by
    /// (subfile, user).
    pub fn positions_by_label(&self) -> HashMap<u32, Vec<(usize, usize)>> {
        let mut map: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
        for (f, row) in self.entries.iter().enumerate() {
            for (k, &e) in row.iter().enumerate() {
                if let Entry::Int(s) = e {
                    map.entry(s).or_default().push((f, k));
                }
            }
        }
        map
    }
}

/// Builds the PDA of a line graph and its transmission cover: stars where
/// the pair is not a vertex, and clique index + 1 elsewhere. Labels follow
/// the canonical cover order, so output is reproducible.
pub fn line_graph_to_pda(
    graph: &CachingLineGraph,
    cover: &TransmissionCover,
) -> Result<Pda, PdaError> {
    let users = graph.num_users();
    let subfiles = graph.num_subfiles();
    let mut entries = vec![vec![Entry::Star; users]; subfiles];
    let mut covered = 0usize;
    for (label, clique) in cover.cliques.iter().enumerate() {
        for &vid in clique {
            let (k, f) = *graph.vertices().get(vid).ok_or_else(|| {
                PdaError::InvalidInput(format!("cover references unknown vertex id {vid}"))
            })?;
            if entries[f][k] != Entry::Star {
                return Err(PdaError::InvalidInput(format!(
                    "cover assigns vertex ({k}, {f}) twice"
                )));
            }
            entries[f][k] = Entry::Int(label as u32 + 1);
            covered += 1;
        }
    }
    if covered != graph.vertices().len() {
        return Err(PdaError::InvalidInput(format!(
            "cover labels {covered} of {} vertices",
            graph.vertices().len()
        )));
    }
    let mut pda = Pda::new(users, subfiles, entries)?;
    pda.params = graph.params();
    Ok(pda)
}

/// Validation outcome: per-condition pass/fail with offending coordinates,
/// plus the measured stars-per-column, label count, and regularity.
#[derive(Debug, Clone)]
pub struct PdaReport {
    pub c1_uniform_stars: bool,
    pub c2_labels_dense: bool,
    pub c3_placement: bool,
    /// Stars per column when uniform.
    pub stars_per_column: Option<usize>,
    /// Number of distinct integer labels.
    pub labels: usize,
    /// Occurrences per label when uniform.
    pub regularity: Option<usize>,
    pub failures: Vec<String>,
}

impl PdaReport {
    pub fn valid(&self) -> bool {
        self.c1_uniform_stars && self.c2_labels_dense && self.c3_placement
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c1_uniform_stars": self.c1_uniform_stars,
            "c2_labels_dense": self.c2_labels_dense,
            "c3_placement": self.c3_placement,
            "stars_per_column": self.stars_per_column,
            "labels": self.labels,
            "regularity": self.regularity,
            "failures": self.failures,
            "valid": self.valid(),
        })
    }
}

/// Checks C1 (uniform star count per column), C2 (labels form a dense range
/// 1..=S), and C3 (equal labels in distinct rows/columns with starred cross
/// positions).
pub fn validate_pda(pda: &Pda) -> PdaReport {
    let mut failures = Vec::new();

    let star_counts: Vec<usize> = (0..pda.users)
        .map(|k| {
            (0..pda.subfiles)
                .filter(|&f| pda.entries[f][k] == Entry::Star)
                .count()
        })
        .collect();
    let c1 = star_counts.windows(2).all(|w| w[0] == w[1]);
    if !c1 {
        failures.push(format!("C1: star counts per column differ: {star_counts:?}"));
    }

    let positions = pda.positions_by_label();
    let labels = positions.len();
    let max_label = positions.keys().max().copied().unwrap_or(0) as usize;
    let c2 = labels > 0 && max_label == labels;
    if !c2 {
        failures.push(format!(
            "C2: labels are not a dense range 1..=S (distinct = {labels}, max = {max_label})"
        ));
    }

    let mut c3 = true;
    let mut counts: Vec<usize> = Vec::new();
    let mut sorted: Vec<_> = positions.iter().collect();
    sorted.sort_by_key(|(s, _)| **s);
    'outer: for (s, pos) in sorted {
        counts.push(pos.len());
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                let (f1, k1) = pos[i];
                let (f2, k2) = pos[j];
                if f1 == f2 || k1 == k2 {
                    failures.push(format!(
                        "C3(1): label {s} repeats in row/column at ({f1},{k1}) and ({f2},{k2})"
                    ));
                    c3 = false;
                    break 'outer;
                }
                if pda.entries[f1][k2] != Entry::Star || pda.entries[f2][k1] != Entry::Star {
                    failures.push(format!(
                        "C3(2): label {s} at ({f1},{k1}) and ({f2},{k2}) lacks starred cross positions"
                    ));
                    c3 = false;
                    break 'outer;
                }
            }
        }
    }

    let regularity = if !counts.is_empty() && counts.windows(2).all(|w| w[0] == w[1]) {
        Some(counts[0])
    } else {
        None
    };

    PdaReport {
        c1_uniform_stars: c1,
        c2_labels_dense: c2,
        c3_placement: c3,
        stars_per_column: if c1 { star_counts.first().copied() } else { None },
        labels,
        regularity,
        failures,
    }
}

/// Writes the CSV form: header `K,F`, then F rows of K comma-separated
/// entries (`*` or decimal label).
pub fn save_pda(pda: &Pda, path: &Path) -> Result<(), PdaError> {
    let mut out = String::new();
    out.push_str(&format!("{},{}\n", pda.users, pda.subfiles));
    for row in &pda.entries {
        let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads the CSV form back; rejects ragged rows, zero labels, and malformed
/// cells with the offending location.
pub fn load_pda(path: &Path) -> Result<Pda, PdaError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or(PdaError::ParseError {
        row: 0,
        col: 0,
        message: "empty file".into(),
    })?;
    let dims: Vec<&str> = header.split(',').collect();
    if dims.len() != 2 {
        return Err(PdaError::ParseError {
            row: 1,
            col: 1,
            message: "header must be `K,F`".into(),
        });
    }
    let parse_dim = |s: &str, col: usize| {
        s.trim().parse::<usize>().map_err(|_| PdaError::ParseError {
            row: 1,
            col,
            message: format!("bad dimension {s:?}"),
        })
    };
    let users = parse_dim(dims[0], 1)?;
    let subfiles = parse_dim(dims[1], 2)?;

    let mut entries = Vec::with_capacity(subfiles);
    for (i, line) in lines.enumerate() {
        let row_no = i + 2;
        let mut row = Vec::with_capacity(users);
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != users {
            return Err(PdaError::ParseError {
                row: row_no,
                col: cells.len(),
                message: format!("expected {users} entries, found {}", cells.len()),
            });
        }
        for (j, cell) in cells.iter().enumerate() {
            let cell = cell.trim();
            let entry = if cell == "*" {
                Entry::Star
            } else {
                let v: u32 = cell.parse().map_err(|_| PdaError::ParseError {
                    row: row_no,
                    col: j + 1,
                    message: format!("bad entry {cell:?}"),
                })?;
                if v == 0 {
                    return Err(PdaError::ParseError {
                        row: row_no,
                        col: j + 1,
                        message: "labels are 1-based; 0 is not allowed".into(),
                    });
                }
                Entry::Int(v)
            };
            row.push(entry);
        }
        entries.push(row);
    }
    if entries.len() != subfiles {
        return Err(PdaError::ParseError {
            row: entries.len() + 1,
            col: 0,
            message: format!("expected {subfiles} rows, found {}", entries.len()),
        });
    }
    Pda::new(users, subfiles, entries)
}

/// JSON variant carrying the construction metadata alongside the entries.
pub fn pda_to_json(pda: &Pda, report: &PdaReport) -> Value {
    let rows: Vec<Vec<String>> = pda
        .entries
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect())
        .collect();
    let meta = pda.params.map(|(q, k, m, t)| json!({"q": q, "k": k, "m": m, "t": t}));
    json!({
        "params": meta,
        "K": pda.users,
        "F": pda.subfiles,
        "Z": report.stars_per_column,
        "S": report.labels,
        "g": report.regularity,
        "entries": rows,
    })
}
