use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Edge, Graph};
use crate::error::{Error, Result};

/// Non-fatal irregularities met while reading an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
    /// Two-token lines read in weighted mode (weight defaulted to 1).
    pub missing_weights: usize,
}

#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub report: ParseReport,
}

/// Reads a whitespace-separated edge list (`u v` or `u v w` per line).
///
/// Blank lines and lines starting with `#` or `%` are skipped. Labels are
/// numbered in order of first appearance; repeated pairs keep the first
/// weight. In unweighted mode a third token is ignored.
pub fn parse_edge_list(text: &str, weighted: bool) -> Result<ParsedGraph> {
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    let mut report = ParseReport::default();

    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (a, b, weight_token) = match tokens.as_slice() {
            [a, b] => (*a, *b, None),
            [a, b, w] => (*a, *b, Some(*w)),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 2 or 3 tokens, found {}", tokens.len()),
                })
            }
        };
        let weight = match (weighted, weight_token) {
            (false, _) => 1.0,
            (true, None) => {
                report.missing_weights += 1;
                1.0
            }
            (true, Some(w)) => {
                let value: f64 = w.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("weight {w:?} is not a number"),
                })?;
                if !(value > 0.0 && value.is_finite()) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("weight must be positive, got {w}"),
                    });
                }
                value
            }
        };
        if a == b {
            report.self_loops_dropped += 1;
            continue;
        }
        let mut intern = |label: &str| -> usize {
            match index.entry(label.to_string()) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    labels.push(label.to_string());
                    *e.insert(labels.len() - 1)
                }
            }
        };
        let u = intern(a);
        let v = intern(b);
        let edge = Edge::new(u, v, weight);
        if seen.insert(edge.pair()) {
            edges.push(edge);
        } else {
            report.duplicates_collapsed += 1;
        }
    }

    let graph = Graph::new(labels, edges, weighted)?;
    Ok(ParsedGraph { graph, report })
}
