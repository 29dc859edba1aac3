//! Olympiad problem matrices and the JSON problem file format.
//!
//! A problem file looks like
//!
//! ```json
//! {
//!   "id": "mandar",
//!   "languages": ["Mandar"],
//!   "families": ["Austronesian"],
//!   "category": "morphophonology",
//!   "columns": ["to V", "to be Ved"],
//!   "matrix": [["m a p p a s u N", "d i p a s u N"], [null, "d i t i m b e"]],
//!   "test_cells": [{"row": 1, "col": 0, "gold": "m a t t i m b e"}],
//!   "features": {"m": {"cons": true}},
//!   "notes": ""
//! }
//! ```
//!
//! Test cells must be `null` in the matrix; their answers live only in
//! `test_cells`, so [`Problem::cell`] (the training view) never sees them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ProblemError, TokenizeError};
use crate::token::{tokenize, FeatureTable, Features, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Morphophonology,
    Multilingual,
    Transliteration,
    Stress,
}

impl Category {
    pub const ALL: [Category; 4] =
        [Category::Morphophonology, Category::Multilingual, Category::Transliteration, Category::Stress];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Morphophonology => "morphophonology",
            Category::Multilingual => "multilingual",
            Category::Transliteration => "transliteration",
            Category::Stress => "stress",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown category `{s}`"))
    }
}

/// Row/column coordinate in the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub id: String,
    pub languages: Vec<String>,
    pub families: Vec<String>,
    pub category: Category,
    pub columns: Vec<String>,
    matrix: Vec<Vec<Option<Word>>>,
    gold: BTreeMap<Cell, Word>,
    pub feature_table: FeatureTable,
    pub notes: String,
}

/// One ordered column pair to synthesize a program for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnTask {
    pub source: usize,
    pub target: usize,
    /// Rows where both cells are given training data.
    pub rows: Vec<usize>,
}

impl ColumnTask {
    pub fn usable(&self) -> bool {
        !self.rows.is_empty()
    }
}

impl Problem {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Training view of a cell: `None` for blanks and for test cells.
    pub fn cell(&self, row: usize, col: usize) -> Option<&Word> {
        self.matrix.get(row)?.get(col)?.as_ref()
    }

    pub fn is_test(&self, cell: Cell) -> bool {
        self.gold.contains_key(&cell)
    }

    pub fn test_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.gold.keys().copied()
    }

    pub fn gold(&self, cell: Cell) -> Option<&Word> {
        self.gold.get(&cell)
    }

    /// Training pairs for `source -> target`.
    pub fn pairs(&self, task: &ColumnTask) -> Vec<(Word, Word)> {
        task.rows
            .iter()
            .filter_map(|&r| Some((self.cell(r, task.source)?.clone(), self.cell(r, task.target)?.clone())))
            .collect()
    }
}

/// All ordered column pairs `(s, t)`, `s != t`, with their training rows.
pub fn column_pair_tasks(problem: &Problem) -> Vec<ColumnTask> {
    let mut tasks = Vec::new();
    for source in 0..problem.cols() {
        for target in 0..problem.cols() {
            if source == target {
                continue;
            }
            let rows = (0..problem.rows())
                .filter(|&r| problem.cell(r, source).is_some() && problem.cell(r, target).is_some())
                .collect();
            tasks.push(ColumnTask { source, target, rows });
        }
    }
    tasks
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TestCellDoc {
    row: usize,
    col: usize,
    gold: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDoc {
    id: String,
    languages: Vec<String>,
    families: Vec<String>,
    category: Category,
    columns: Vec<String>,
    matrix: Vec<Vec<Option<String>>>,
    test_cells: Vec<TestCellDoc>,
    features: BTreeMap<String, Features>,
    #[serde(default)]
    notes: String,
}

fn field_err(field: &str, reason: impl Into<String>) -> ProblemError {
    ProblemError::Field { field: field.to_string(), reason: reason.into() }
}

/// Parses and validates a problem file.
pub fn parse_problem(document: &str) -> Result<Problem, ProblemError> {
    let doc: ProblemDoc = serde_json::from_str(document)?;
    Problem::from_doc(doc)
}

impl Problem {
    fn from_doc(doc: ProblemDoc) -> Result<Problem, ProblemError> {
        if doc.id.is_empty() {
            return Err(field_err("id", "must be non-empty"));
        }
        if doc.matrix.is_empty() {
            return Err(ProblemError::Structure("matrix has no rows".into()));
        }
        let width = doc.columns.len();
        if width == 0 {
            return Err(ProblemError::Structure("problem has no columns".into()));
        }
        for (r, row) in doc.matrix.iter().enumerate() {
            if row.len() != width {
                return Err(ProblemError::Structure(format!("row {r} has {} cells, expected {width}", row.len())));
            }
        }

        let mut table = FeatureTable::new();
        for (sym, feats) in &doc.features {
            if sym.is_empty() || sym.chars().any(char::is_whitespace) {
                return Err(field_err("features", format!("invalid symbol `{sym}`")));
            }
            table.insert(sym.clone(), feats.clone());
        }

        let mut missing = BTreeSet::new();
        let mut read = |raw: &str, field: &str| -> Result<Option<Word>, ProblemError> {
            match tokenize(raw, &table) {
                Ok(w) => Ok(Some(w)),
                Err(TokenizeError::UnknownSymbol(_)) => {
                    for s in raw.split(' ').filter(|s| !s.is_empty() && !table.contains(s)) {
                        missing.insert(s.to_string());
                    }
                    Ok(None)
                }
                Err(e) => Err(field_err(field, e.to_string())),
            }
        };

        let mut matrix = Vec::with_capacity(doc.matrix.len());
        for row in &doc.matrix {
            let mut out = Vec::with_capacity(width);
            for cell in row {
                out.push(match cell {
                    Some(raw) => read(raw, "matrix")?,
                    None => None,
                });
            }
            matrix.push(out);
        }

        let mut gold = BTreeMap::new();
        for tc in &doc.test_cells {
            if tc.row >= doc.matrix.len() || tc.col >= width {
                return Err(field_err(
                    "test_cells",
                    format!("({}, {}) lies outside the {}x{width} matrix", tc.row, tc.col, doc.matrix.len()),
                ));
            }
            if doc.matrix[tc.row][tc.col].is_some() {
                return Err(field_err(
                    "test_cells",
                    format!("matrix cell ({}, {}) must be null for a test cell", tc.row, tc.col),
                ));
            }
            if tc.gold.is_empty() {
                return Err(field_err("test_cells", format!("empty gold at ({}, {})", tc.row, tc.col)));
            }
            let word = read(&tc.gold, "test_cells")?;
            let cell = Cell { row: tc.row, col: tc.col };
            if gold.insert(cell, word.unwrap_or_default()).is_some() {
                return Err(field_err("test_cells", format!("duplicate test cell ({}, {})", tc.row, tc.col)));
            }
        }

        if !missing.is_empty() {
            return Err(ProblemError::UnknownSymbols(missing.into_iter().collect()));
        }

        for cell in gold.keys() {
            if !matrix[cell.row].iter().any(Option::is_some) {
                return Err(ProblemError::Structure(format!(
                    "test cell ({}, {}) has no training cell in its row",
                    cell.row, cell.col
                )));
            }
        }

        Ok(Problem {
            id: doc.id,
            languages: doc.languages,
            families: doc.families,
            category: doc.category,
            columns: doc.columns,
            matrix,
            gold,
            feature_table: table,
            notes: doc.notes,
        })
    }

    fn to_doc(&self) -> ProblemDoc {
        ProblemDoc {
            id: self.id.clone(),
            languages: self.languages.clone(),
            families: self.families.clone(),
            category: self.category,
            columns: self.columns.clone(),
            matrix: self.matrix.iter().map(|row| row.iter().map(|c| c.as_ref().map(Word::to_text)).collect()).collect(),
            test_cells: self
                .gold
                .iter()
                .map(|(c, w)| TestCellDoc { row: c.row, col: c.col, gold: w.to_text() })
                .collect(),
            features: self.feature_table.iter().map(|(k, v)| (k.clone(), (**v).clone())).collect(),
            notes: self.notes.clone(),
        }
    }

    /// Serializes back to the problem file format (pretty JSON, UTF-8).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("problem documents always serialize")
    }
}
