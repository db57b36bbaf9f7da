use std::fmt;

use rayon::prelude::*;

use super::{EisensteinMatrix, SeidelMatrix};
use crate::eisenstein::EisensteinInt;

/// Why `Q² = (n-1)I + μQ` fails. Coordinates are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureViolation {
    /// `(Q²)_12 · conj(Q_12)` has an `ω` component, so no integer `μ` exists.
    MuNotInteger { row: usize, col: usize, value: EisensteinInt },
    Entry { row: usize, col: usize, expected: EisensteinInt, found: EisensteinInt },
}

impl fmt::Display for SignatureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MuNotInteger { row, col, value } => {
                write!(f, "(Q^2)[{row},{col}]*conj(Q[{row},{col}]) = {value} is not a rational integer")
            }
            Self::Entry { row, col, expected, found } => {
                write!(f, "(Q^2)[{row},{col}] = {found}, expected {expected}")
            }
        }
    }
}

impl std::error::Error for SignatureViolation {}

/// `(Q²)_ij`, computed by counting the cube-root products `Q_ik Q_kj`.
fn square_entry(q: &SeidelMatrix, i: usize, j: usize) -> EisensteinInt {
    let n = q.order();
    if i == j {
        return EisensteinInt::from_int(n as i64 - 1);
    }
    let mut counts = [0i64; 3];
    for k in (0..n).filter(|&k| k != i && k != j) {
        counts[((q.exponent(i, k) + q.exponent(k, j)) % 3) as usize] += 1;
    }
    EisensteinInt::from_root_counts(counts[0], counts[1], counts[2]).expect("counts are bounded by n")
}

/// Exact `Q²`.
pub fn square(q: &SeidelMatrix) -> EisensteinMatrix {
    let n = q.order();
    let rows: Vec<Vec<EisensteinInt>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| square_entry(q, i, j)).collect())
        .collect();
    let mut m = EisensteinMatrix::zeros(n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// Checks `Q² = (n-1)I + μQ` exactly and returns `μ`.
///
/// The candidate is `(Q²)_12 · conj(Q_12)`; every entry is then compared,
/// and the first violation in row-major order is reported.
pub fn check_signature(q: &SeidelMatrix) -> Result<i64, SignatureViolation> {
    let n = q.order();
    let value = square_entry(q, 0, 1) * q.root(1, 0).to_eisenstein();
    let mu = value.as_int().ok_or(SignatureViolation::MuNotInteger { row: 1, col: 2, value })?;
    let first_bad = (0..n).into_par_iter().find_map_first(|i| {
        (0..n).find_map(|j| {
            let found = square_entry(q, i, j);
            let expected = if i == j {
                EisensteinInt::from_int(n as i64 - 1)
            } else {
                q.root(i, j).to_eisenstein().checked_scale(mu).expect("|μ| ≤ n")
            };
            (found != expected).then_some(SignatureViolation::Entry { row: i + 1, col: j + 1, expected, found })
        })
    });
    match first_bad {
        Some(v) => Err(v),
        None => Ok(mu),
    }
}

pub fn verify_signature(q: &SeidelMatrix) -> Option<i64> {
    check_signature(q).ok()
}
