//! File formats: edge lists in, whitespace dense matrices in and out.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use lrlink_core::graph::{parse_edge_list, ParsedGraph};
use lrlink_core::linalg::DenseMatrix;

pub fn read_edge_list(path: &Path, weighted: bool) -> Result<ParsedGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_edge_list(&text, weighted).with_context(|| format!("{}", path.display()))
}

/// Parses `rows cols` followed by `rows` lines of `cols` reals.
pub fn parse_dense(text: &str) -> Result<DenseMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((line, header)) = lines.next() else {
        bail!("empty matrix file");
    };
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .with_context(|| format!("line {line}: header must be \"rows cols\""))?;
    let &[rows, cols] = dims.as_slice() else {
        bail!("line {line}: header must be \"rows cols\"");
    };

    let mut data = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0;
    for (line, text) in lines {
        let before = data.len();
        for tok in text.split_whitespace() {
            let x: f64 = tok.parse().with_context(|| format!("line {line}: bad number {tok:?}"))?;
            data.push(x);
        }
        if data.len() - before != cols {
            bail!("line {line}: expected {cols} values, found {}", data.len() - before);
        }
        seen_rows += 1;
    }
    if seen_rows != rows {
        bail!("expected {rows} rows, found {seen_rows}");
    }
    Ok(DenseMatrix::new(rows, cols, data)?)
}

pub fn read_dense(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_dense(&text).with_context(|| format!("{}", path.display()))
}

/// Shortest round-trip representation, so a read back is exact.
pub fn format_dense(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        for (j, x) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{x}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_dense(path: &Path, m: &DenseMatrix) -> Result<()> {
    fs::write(path, format_dense(m)).with_context(|| format!("cannot write {}", path.display()))
}
