//! `.crsm` text format.
//!
//! Line 1 holds the order `n`; the next `n` lines hold `n` whitespace
//! separated tokens from `{0, 1, w, W}` (`w = ω`, `W = ω²`).

use std::str::FromStr;

use thiserror::Error;

use super::{Entry, MatrixError, SeidelMatrix};
use crate::eisenstein::CubeRoot;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrsmError {
    #[error("line 1: expected the matrix order, found {0:?}")]
    BadHeader(String),
    #[error("expected {expected} matrix rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("line {line}: invalid token {token:?}")]
    BadToken { line: usize, token: String },
    #[error("line {line}: unexpected trailing content")]
    TrailingContent { line: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn token_entry(tok: &str) -> Option<Entry> {
    Some(match tok {
        "0" => Entry::Zero,
        "1" => Entry::Root(CubeRoot::ONE),
        "w" => Entry::Root(CubeRoot::OMEGA),
        "W" => Entry::Root(CubeRoot::OMEGA_SQ),
        _ => return None,
    })
}

impl SeidelMatrix {
    pub fn parse_crsm(text: &str) -> Result<Self, CrsmError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| CrsmError::BadHeader(String::new()))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| CrsmError::BadHeader(header.to_string()))?;
        let mut rows = Vec::with_capacity(n);
        for (idx, line) in lines {
            let line_no = idx + 1;
            if rows.len() == n {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(CrsmError::TrailingContent { line: line_no });
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    token_entry(tok).ok_or_else(|| CrsmError::BadToken { line: line_no, token: tok.to_string() })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(CrsmError::RowCount { expected: n, found: rows.len() });
        }
        Ok(Self::from_entries(&rows)?)
    }

    /// Normalized text: single spaces between tokens, LF line endings, trailing newline.
    pub fn to_crsm(&self) -> String {
        let mut out = format!("{}\n", self.order());
        for row in self.token_rows() {
            let mut first = true;
            for tok in row {
                if !first {
                    out.push(' ');
                }
                out.push(tok);
                first = false;
            }
            out.push('\n');
        }
        out
    }
}

impl FromStr for SeidelMatrix {
    type Err = CrsmError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_crsm(s)
    }
}
