//! Text formats for parity-check matrices.
//!
//! alist: `N M` (columns, rows), the two maximum weights, the column weights,
//! the row weights, then one 1-based index list per column and per row, each
//! padded with zeros to the maximum weight.
//!
//! Coordinate list: a `rows cols` header followed by one 0-based `r c` pair per line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf2::matrix::BinaryMatrix;

pub fn write_alist(m: &BinaryMatrix) -> String {
    let mut out = String::new();
    let (max_c, max_r) = (m.max_col_weight(), m.max_row_weight());
    let _ = writeln!(out, "{} {}", m.cols(), m.rows());
    let _ = writeln!(out, "{max_c} {max_r}");
    out.push_str(&join((0..m.cols()).map(|c| m.col_weight(c))));
    out.push('\n');
    out.push_str(&join((0..m.rows()).map(|r| m.row_weight(r))));
    out.push('\n');
    for c in 0..m.cols() {
        out.push_str(&padded(m.col(c), max_c));
        out.push('\n');
    }
    for r in 0..m.rows() {
        out.push_str(&padded(m.row(r), max_r));
        out.push('\n');
    }
    out
}

fn join(items: impl Iterator<Item = usize>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn padded(list: &[usize], width: usize) -> String {
    join(
        list.iter()
            .map(|&i| i + 1)
            .chain(std::iter::repeat(0).take(width - list.len())),
    )
}

fn parse_ints(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("{tok:?}: {e}"),
            })
        })
        .collect()
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn read_alist(text: &str) -> Result<BinaryMatrix> {
    let lines: Vec<&str> = text.lines().collect();
    let line = |i: usize| -> Result<Vec<usize>> {
        let l = lines
            .get(i)
            .ok_or_else(|| parse_err(i + 1, "unexpected end of file"))?;
        parse_ints(l, i + 1)
    };
    let dims = line(0)?;
    if dims.len() != 2 {
        return Err(parse_err(1, "expected `N M`"));
    }
    let (n, m) = (dims[0], dims[1]);
    let maxes = line(1)?;
    if maxes.len() != 2 {
        return Err(parse_err(2, "expected the two maximum weights"));
    }
    let col_w = line(2)?;
    let row_w = line(3)?;
    if col_w.len() != n || row_w.len() != m {
        return Err(parse_err(3, "weight list lengths do not match N and M"));
    }
    let mut entries = Vec::new();
    for c in 0..n {
        let idx: Vec<usize> = line(4 + c)?.into_iter().filter(|&i| i != 0).collect();
        if idx.len() != col_w[c] {
            return Err(parse_err(5 + c, format!("column {c} weight mismatch")));
        }
        for r in idx {
            if r > m {
                return Err(parse_err(5 + c, format!("row index {r} exceeds {m}")));
            }
            entries.push((r - 1, c));
        }
    }
    let from_cols = BinaryMatrix::from_entries(m, n, &entries)?;
    for r in 0..m {
        let mut idx: Vec<usize> = line(4 + n + r)?
            .into_iter()
            .filter(|&i| i != 0)
            .map(|i| i - 1)
            .collect();
        idx.sort_unstable();
        if idx.len() != row_w[r] || idx != from_cols.row(r) {
            return Err(parse_err(
                5 + n + r,
                format!("row {r} disagrees with the column lists"),
            ));
        }
    }
    Ok(from_cols)
}

pub fn write_coordinates(m: &BinaryMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for (r, c) in m.entries() {
        let _ = writeln!(out, "{r} {c}");
    }
    out
}

pub fn read_coordinates(text: &str) -> Result<BinaryMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let dims = parse_ints(header, 1)?;
    if dims.len() != 2 {
        return Err(parse_err(1, "expected `rows cols`"));
    }
    let mut entries = Vec::new();
    for (i, l) in lines {
        let rc = parse_ints(l, i + 1)?;
        if rc.len() != 2 {
            return Err(parse_err(i + 1, "expected `r c`"));
        }
        entries.push((rc[0], rc[1]));
    }
    BinaryMatrix::from_entries(dims[0], dims[1], &entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alist_layout() {
        let m = BinaryMatrix::from_bitstrings(&["110", "011"]).unwrap();
        let text = write_alist(&m);
        assert_eq!(text, "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n");
        assert_eq!(read_alist(&text).unwrap(), m);
    }

    #[test]
    fn alist_detects_inconsistency() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n1 3\n";
        assert!(read_alist(text).is_err());
    }

    #[test]
    fn coordinate_round_trip() {
        let m = BinaryMatrix::from_bitstrings(&["101", "010"]).unwrap();
        let text = write_coordinates(&m);
        assert_eq!(text, "2 3\n0 0\n0 2\n1 1\n");
        assert_eq!(read_coordinates(&text).unwrap(), m);
    }

    #[test]
    fn empty_matrices_round_trip() {
        let m = BinaryMatrix::zeros(0, 1);
        assert_eq!(read_alist(&write_alist(&m)).unwrap(), m);
        assert_eq!(read_coordinates(&write_coordinates(&m)).unwrap(), m);
    }
}
