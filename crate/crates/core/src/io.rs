//! The `CPLXMAT v1` text format.
//!
//! ```text
//! cplxmat <rows> <cols>
//! <re> <im>        # rows·cols lines, row-major
//! ```
//!
//! Readers accept any whitespace between tokens and any number of blocks in a
//! row; writers emit one header line and one `re im` line per entry with 17
//! significant digits.

use std::fmt::Write as _;

use thiserror::Error;

use crate::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("expected `cplxmat` header, found `{0}`")]
    BadHeader(String),
    #[error("invalid dimension `{0}`")]
    BadDimension(String),
    #[error("invalid number `{0}`")]
    BadNumber(String),
    #[error("non-finite entry `{0}`")]
    NonFinite(String),
    #[error("unexpected end of input: block {block} needs {expected} numbers, found {found}")]
    Truncated { block: usize, expected: usize, found: usize },
    #[error("no matrix found in input")]
    Empty,
    #[error("expected {expected} matrices, found {found}")]
    WrongCount { expected: usize, found: usize },
}

/// Parses every block in `text`.
pub fn parse_all(text: &str) -> Result<Vec<ComplexMatrix>, ParseError> {
    let mut tokens = text.split_whitespace();
    let mut out = Vec::new();
    while let Some(head) = tokens.next() {
        if head != "cplxmat" {
            return Err(ParseError::BadHeader(head.to_string()));
        }
        let rows = parse_dim(tokens.next())?;
        let cols = parse_dim(tokens.next())?;
        let expected = 2 * rows * cols;
        let mut data = Vec::with_capacity(rows * cols);
        let mut found = 0;
        while found < expected {
            let Some(re) = tokens.next() else {
                return Err(ParseError::Truncated { block: out.len(), expected, found });
            };
            found += 1;
            let Some(im) = tokens.next() else {
                return Err(ParseError::Truncated { block: out.len(), expected, found });
            };
            found += 1;
            data.push(C64::new(parse_number(re)?, parse_number(im)?));
        }
        out.push(ComplexMatrix::from_row_major(rows, cols, data).expect("finite, sized"));
    }
    if out.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(out)
}

/// Parses exactly one block.
pub fn parse_one(text: &str) -> Result<ComplexMatrix, ParseError> {
    parse_exact(text, 1).map(|mut v| v.remove(0))
}

/// Parses exactly `count` blocks.
pub fn parse_exact(text: &str, count: usize) -> Result<Vec<ComplexMatrix>, ParseError> {
    let all = parse_all(text)?;
    if all.len() != count {
        return Err(ParseError::WrongCount { expected: count, found: all.len() });
    }
    Ok(all)
}

fn parse_dim(tok: Option<&str>) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::BadDimension("<eof>".into()))?;
    tok.parse().map_err(|_| ParseError::BadDimension(tok.to_string()))
}

fn parse_number(tok: &str) -> Result<f64, ParseError> {
    let x: f64 = tok.parse().map_err(|_| ParseError::BadNumber(tok.to_string()))?;
    if !x.is_finite() {
        return Err(ParseError::NonFinite(tok.to_string()));
    }
    Ok(x)
}

/// Formats a real with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_matrix(m: &ComplexMatrix) -> String {
    let mut s = String::new();
    writeln!(s, "cplxmat {} {}", m.rows(), m.cols()).unwrap();
    for z in m.entries() {
        writeln!(s, "{} {}", format_real(z.re), format_real(z.im)).unwrap();
    }
    s
}

/// Concatenated blocks.
pub fn write_all<'a>(ms: impl IntoIterator<Item = &'a ComplexMatrix>) -> String {
    ms.into_iter().map(write_matrix).collect()
}
