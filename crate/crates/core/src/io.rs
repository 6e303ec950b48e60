//! External formats. All JSON documents use 1-based row, column, and vertex
//! indices; the in-memory types are 0-based and conversion happens here.
//! Serialization is deterministic: equal values produce identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix, SupportSet};
use crate::oracle::ExtremalCatalog;
use crate::ratio::Rational;
use crate::trees::LabeledTree;

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    n: usize,
    m: usize,
    entries: Vec<Vec<Rational>>,
}

/// `{"n": .., "m": .., "entries": [[..], ..]}` with integer entries as JSON
/// numbers and fractional entries as "p/q" strings.
pub fn matrix_to_json(matrix: &ExactMatrix) -> String {
    let doc = MatrixDoc {
        n: matrix.n(),
        m: matrix.m(),
        entries: matrix.rows().map(<[_]>::to_vec).collect(),
    };
    serde_json::to_string(&doc).expect("matrix documents always serialize")
}

pub fn matrix_from_json(text: &str) -> Result<ExactMatrix> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(|e| Error::MalformedInput {
        format: "matrix json",
        details: e.to_string(),
    })?;
    if doc.entries.len() != doc.n {
        return Err(Error::MalformedInput {
            format: "matrix json",
            details: format!("declared n = {}, found {} rows", doc.n, doc.entries.len()),
        });
    }
    if let Some(row) = doc.entries.iter().find(|r| r.len() != doc.m) {
        return Err(Error::MalformedInput {
            format: "matrix json",
            details: format!("declared m = {}, found a row of {} entries", doc.m, row.len()),
        });
    }
    ExactMatrix::from_rows(doc.entries)
}

/// Comma-separated integer grid, one row per line. Refuses non-integer
/// entries in both directions, so csv stays lossless.
pub fn matrix_to_csv(matrix: &ExactMatrix) -> Result<String> {
    if !matrix.is_integral() {
        return Err(Error::NonIntegerCsv);
    }
    let mut out = String::new();
    for row in matrix.rows() {
        let cells: Vec<String> = row.iter().map(Rational::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn matrix_from_csv(text: &str) -> Result<ExactMatrix> {
    let malformed = |details: String| Error::MalformedInput {
        format: "matrix csv",
        details,
    };
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            let value: i64 = cell
                .trim()
                .parse()
                .map_err(|_| malformed(format!("line {}: {cell:?} is not an integer", index + 1)))?;
            row.push(Rational::from_integer(value));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(malformed("no rows".to_string()));
    }
    ExactMatrix::from_rows(rows)
}

#[derive(Serialize, Deserialize)]
struct SupportDoc {
    n: usize,
    m: usize,
    cells: Vec<[usize; 2]>,
}

/// `{"n": .., "m": .., "cells": [[row, col], ..]}`, cells 1-based and sorted.
pub fn support_to_json(support: &SupportSet) -> String {
    let doc = SupportDoc {
        n: support.n(),
        m: support.m(),
        cells: support.iter().map(|(i, j)| [i + 1, j + 1]).collect(),
    };
    serde_json::to_string(&doc).expect("support documents always serialize")
}

pub fn support_from_json(text: &str) -> Result<SupportSet> {
    let doc: SupportDoc = serde_json::from_str(text).map_err(|e| Error::MalformedInput {
        format: "support json",
        details: e.to_string(),
    })?;
    if let Some(cell) = doc.cells.iter().find(|c| c[0] == 0 || c[1] == 0) {
        return Err(Error::MalformedInput {
            format: "support json",
            details: format!("cell {cell:?} uses 0; indices are 1-based"),
        });
    }
    SupportSet::new(doc.n, doc.m, doc.cells.iter().map(|c| (c[0] - 1, c[1] - 1)))
}

#[derive(Serialize, Deserialize)]
struct TreeDoc {
    vertices: usize,
    edges: Vec<TreeEdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct TreeEdgeDoc {
    label: usize,
    ends: [usize; 2],
}

/// `{"vertices": .., "edges": [{"label": .., "ends": [a, b]}, ..]}`,
/// 1-based, edges sorted by label.
pub fn tree_to_json(tree: &LabeledTree) -> String {
    let doc = TreeDoc {
        vertices: tree.vertex_count(),
        edges: tree
            .edges()
            .iter()
            .enumerate()
            .map(|(label0, &(a, b))| TreeEdgeDoc {
                label: label0 + 1,
                ends: [a + 1, b + 1],
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("tree documents always serialize")
}

pub fn tree_from_json(text: &str) -> Result<LabeledTree> {
    let malformed = |details: String| Error::MalformedInput {
        format: "tree json",
        details,
    };
    let doc: TreeDoc = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    if doc.vertices < 2 {
        return Err(malformed(format!(
            "need at least 2 vertices, got {}",
            doc.vertices
        )));
    }
    let edge_count = doc.vertices - 1;
    let mut ends: Vec<Option<(usize, usize)>> = vec![None; edge_count];
    for edge in &doc.edges {
        if edge.label == 0 || edge.label > edge_count {
            return Err(malformed(format!(
                "edge label {} outside 1..={edge_count}",
                edge.label
            )));
        }
        if edge.ends[0] == 0 || edge.ends[1] == 0 {
            return Err(malformed(format!(
                "edge {} uses vertex 0; labels are 1-based",
                edge.label
            )));
        }
        if ends[edge.label - 1]
            .replace((edge.ends[0] - 1, edge.ends[1] - 1))
            .is_some()
        {
            return Err(malformed(format!("edge label {} appears twice", edge.label)));
        }
    }
    let edges: Vec<(usize, usize)> = ends
        .into_iter()
        .enumerate()
        .map(|(label0, e)| e.ok_or_else(|| malformed(format!("edge label {} missing", label0 + 1))))
        .collect::<Result<_>>()?;
    LabeledTree::new(doc.vertices, edges)
}

/// One matrix document per line, in catalog order.
pub fn catalog_to_jsonl(catalog: &ExtremalCatalog) -> String {
    let mut out = String::new();
    for matrix in catalog.matrices() {
        out.push_str(&matrix_to_json(matrix));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::support;

    fn golden() -> ExactMatrix {
        ExactMatrix::from_integer_rows(&[
            vec![3, 0, 0, 1],
            vec![0, 3, 0, 1],
            vec![0, 0, 3, 1],
        ])
        .unwrap()
    }

    #[test]
    fn matrix_json_round_trips_with_fractions() {
        let mid = golden().scale(Rational::new(1, 2).unwrap());
        let text = matrix_to_json(&mid);
        assert!(text.contains("\"3/2\""));
        assert_eq!(matrix_from_json(&text).unwrap(), mid);
        let text = matrix_to_json(&golden());
        assert_eq!(
            text,
            r#"{"n":3,"m":4,"entries":[[3,0,0,1],[0,3,0,1],[0,0,3,1]]}"#
        );
    }

    #[test]
    fn matrix_json_rejects_shape_lies_and_floats() {
        assert!(matrix_from_json(r#"{"n":2,"m":2,"entries":[[1,1]]}"#).is_err());
        assert!(matrix_from_json(r#"{"n":1,"m":2,"entries":[[1,1,1]]}"#).is_err());
        assert!(matrix_from_json(r#"{"n":1,"m":2,"entries":[[1.5,0.5]]}"#).is_err());
    }

    #[test]
    fn matrix_csv_round_trips_integers_only() {
        let text = matrix_to_csv(&golden()).unwrap();
        assert_eq!(text, "3,0,0,1\n0,3,0,1\n0,0,3,1\n");
        assert_eq!(matrix_from_csv(&text).unwrap(), golden());
        let mid = golden().scale(Rational::new(1, 2).unwrap());
        assert!(matches!(matrix_to_csv(&mid), Err(Error::NonIntegerCsv)));
        assert!(matrix_from_csv("1,2\n3").is_err());
        assert!(matrix_from_csv("3/2,1\n1,2\n").is_err());
    }

    #[test]
    fn support_json_uses_one_based_cells() {
        let s = support(&golden());
        let text = support_to_json(&s);
        assert_eq!(
            text,
            r#"{"n":3,"m":4,"cells":[[1,1],[1,4],[2,2],[2,4],[3,3],[3,4]]}"#
        );
        assert_eq!(support_from_json(&text).unwrap(), s);
        assert!(support_from_json(r#"{"n":3,"m":4,"cells":[[0,1]]}"#).is_err());
        assert!(support_from_json(r#"{"n":3,"m":4,"cells":[[4,1]]}"#).is_err());
    }

    #[test]
    fn tree_json_round_trips() {
        let tree = LabeledTree::new(4, vec![(0, 3), (1, 3), (2, 3)]).unwrap();
        let text = tree_to_json(&tree);
        assert_eq!(
            text,
            r#"{"vertices":4,"edges":[{"label":1,"ends":[1,4]},{"label":2,"ends":[2,4]},{"label":3,"ends":[3,4]}]}"#
        );
        assert_eq!(tree_from_json(&text).unwrap(), tree);
        assert!(tree_from_json(r#"{"vertices":3,"edges":[{"label":1,"ends":[1,2]},{"label":1,"ends":[2,3]}]}"#).is_err());
        assert!(tree_from_json(r#"{"vertices":3,"edges":[{"label":2,"ends":[1,2]}]}"#).is_err());
    }

    #[test]
    fn catalog_export_is_one_line_per_matrix() {
        let catalog = crate::oracle::enumerate_extremal(2, 3).unwrap();
        let text = catalog_to_jsonl(&catalog);
        assert_eq!(text.lines().count(), 6);
        for line in text.lines() {
            assert!(matrix_from_json(line).is_ok());
        }
    }
}
