//! Pairwise counting conditions that characterize nontrivial standard-form
//! signature matrices without forming `Q²`.
//!
//! For a pair `(i, j)` the nine counts classify every `k ∉ {i, j}` by the
//! pattern `(Q_ik, Q_kj)`. At an `ω` entry they must satisfy seven linear
//! equations (numbered 1–7), at a `1` entry another seven (8–14); `ω²`
//! entries are covered through the transposed pair.

use std::fmt;

use thiserror::Error;

use super::SeidelMatrix;
use crate::eisenstein::CubeRoot;

/// Joint entry-pattern counts for a pair `(i, j)`; field `x_y` counts the
/// `k` with `Q_ik = x` and `Q_kj = y`.
///
/// In the classical naming these are, in order,
/// `α β γ / a b c / A B C` (or their primed versions at a `1` entry).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairStats {
    pub omega_omega2: i64,
    pub omega_omega: i64,
    pub omega_one: i64,
    pub omega2_omega2: i64,
    pub omega2_omega: i64,
    pub omega2_one: i64,
    pub one_omega2: i64,
    pub one_omega: i64,
    pub one_one: i64,
}

impl PairStats {
    /// Counts over `k ∈ ks`; `exp(a, b)` is the exponent of `Q_ab`.
    pub(crate) fn count(exp: impl Fn(usize, usize) -> u8, i: usize, j: usize, ks: impl Iterator<Item = usize>) -> Self {
        let mut grid = [[0i64; 3]; 3];
        for k in ks.filter(|&k| k != i && k != j) {
            grid[exp(i, k) as usize][exp(k, j) as usize] += 1;
        }
        Self {
            omega_omega2: grid[1][2],
            omega_omega: grid[1][1],
            omega_one: grid[1][0],
            omega2_omega2: grid[2][2],
            omega2_omega: grid[2][1],
            omega2_one: grid[2][0],
            one_omega2: grid[0][2],
            one_omega: grid[0][1],
            one_one: grid[0][0],
        }
    }

    pub fn total(&self) -> i64 {
        self.omega_omega2
            + self.omega_omega
            + self.omega_one
            + self.omega2_omega2
            + self.omega2_omega
            + self.omega2_one
            + self.one_omega2
            + self.one_omega
            + self.one_one
    }
}

/// One labelled equation `lhs = rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairEquation {
    pub number: u8,
    pub lhs: i64,
    pub rhs: i64,
}

impl PairEquation {
    fn new(number: u8, lhs: i64, rhs: i64) -> Self {
        Self { number, lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Equations 1–7 at a pair with `Q_ij = ω`, scaled by 3 to stay integral.
pub fn omega_pair_equations(s: &PairStats, n: i64, mu: i64) -> [PairEquation; 7] {
    let (b, c) = (s.one_omega, s.one_one);
    [
        PairEquation::new(1, 3 * (s.omega_omega2 - b), -2 * mu - 1),
        PairEquation::new(2, 3 * (s.omega_omega - c), -2 * mu - 4),
        PairEquation::new(3, 3 * (s.omega_one + b + c), n + 3 * mu),
        PairEquation::new(4, 3 * (s.omega2_omega2 - c), -mu - 2),
        PairEquation::new(5, 3 * (s.omega2_omega + b + c), n + mu - 1),
        PairEquation::new(6, 3 * (s.omega2_one - b), -mu + 1),
        PairEquation::new(7, 3 * (s.one_omega2 + b + c), n + 2 * mu + 1),
    ]
}

/// Equations 8–14 at a pair with `Q_ij = 1`, `i, j ≥ 2`.
pub fn one_pair_equations(s: &PairStats, e: i64, mu: i64) -> [PairEquation; 7] {
    let (b, c) = (s.one_omega, s.one_one);
    let free = e + mu - b - c;
    [
        PairEquation::new(8, s.omega_omega2, b),
        PairEquation::new(9, s.omega_omega, c - mu),
        PairEquation::new(10, s.omega_one, free),
        PairEquation::new(11, s.omega2_omega2, c - mu),
        PairEquation::new(12, s.omega2_omega, free),
        PairEquation::new(13, s.omega2_one, b),
        PairEquation::new(14, s.one_omega2, free),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PairStatsError {
    #[error("pair indices must be distinct and at least 2")]
    BadIndices,
    #[error("entry is ω²; use the transposed pair")]
    UnsupportedEntry,
}

/// Counts for the pair `(i, j)` (0-based, `i, j ≥ 1`, `Q_ij ∈ {1, ω}`).
pub fn pair_stats(q: &SeidelMatrix, i: usize, j: usize) -> Result<PairStats, PairStatsError> {
    let n = q.order();
    if i == j || i == 0 || j == 0 || i >= n || j >= n {
        return Err(PairStatsError::BadIndices);
    }
    if q.root(i, j) == CubeRoot::OMEGA_SQ {
        return Err(PairStatsError::UnsupportedEntry);
    }
    Ok(PairStats::count(|a, b| q.exponent(a, b), i, j, 0..n))
}

/// A failed condition. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionViolation {
    NotStandardForm,
    Trivial,
    /// Column `index` has `ω` and `ω²` counts that differ, or disagrees with
    /// the `μ` read from column 2.
    ColumnCounts { index: usize, ones: usize, omegas: usize, omega_sqs: usize, mu: i64 },
    PairEquation { row: usize, col: usize, entry: CubeRoot, equation: PairEquation },
}

impl fmt::Display for ConditionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotStandardForm => f.write_str("matrix is not in standard form"),
            Self::Trivial => f.write_str("matrix is trivial"),
            Self::ColumnCounts { index, ones, omegas, omega_sqs, mu } => write!(
                f,
                "column {index} has {ones} ones, {omegas} w, {omega_sqs} W (inconsistent with mu={mu})"
            ),
            Self::PairEquation { row, col, entry, equation } => write!(
                f,
                "pair ({row},{col}) with entry {}: equation {} gives {} != {}",
                entry.token(),
                equation.number,
                equation.lhs,
                equation.rhs
            ),
        }
    }
}

impl std::error::Error for ConditionViolation {}

/// The first violated equation at pair `(i, j)` of a matrix given by
/// exponents, or `None`. `ω²` pairs are checked through `(j, i)`.
pub(crate) fn pair_violation(
    exp: &impl Fn(usize, usize) -> u8,
    n: usize,
    mu: i64,
    e: i64,
    i: usize,
    j: usize,
) -> Option<ConditionViolation> {
    let (r, c) = if exp(i, j) == 2 { (j, i) } else { (i, j) };
    let stats = PairStats::count(exp, r, c, 0..n);
    let entry = CubeRoot::from_exponent(exp(r, c));
    let eqs = if entry == CubeRoot::OMEGA {
        omega_pair_equations(&stats, n as i64, mu)
    } else {
        one_pair_equations(&stats, e, mu)
    };
    eqs.into_iter()
        .find(|eq| !eq.holds())
        .map(|equation| ConditionViolation::PairEquation { row: r + 1, col: c + 1, entry, equation })
}

/// Column-count check: every column `j ≥ 2` has `y = z` and `x - μ - 1 = y`
/// for a single `μ`. Returns `(μ, e)`.
pub(crate) fn column_counts(q: &SeidelMatrix) -> Result<(i64, i64), ConditionViolation> {
    let mut found: Option<i64> = None;
    for j in 1..q.order() {
        let s = q.row_stats(j);
        let mu = s.ones as i64 - s.omegas as i64 - 1;
        let bad = ConditionViolation::ColumnCounts {
            index: j + 1,
            ones: s.ones,
            omegas: s.omegas,
            omega_sqs: s.omega_sqs,
            mu: found.unwrap_or(mu),
        };
        if s.omegas != s.omega_sqs || found.is_some_and(|m| m != mu) {
            return Err(bad);
        }
        found = Some(mu);
    }
    let mu = found.expect("order is at least 2");
    Ok((mu, q.row_stats(1).omegas as i64))
}

/// Verifies a nontrivial standard-form matrix through the column counts and
/// the pairwise equations, returning `μ`.
pub fn check_conditions(q: &SeidelMatrix) -> Result<i64, ConditionViolation> {
    if !q.is_standard_form() {
        return Err(ConditionViolation::NotStandardForm);
    }
    if q.is_trivial() {
        return Err(ConditionViolation::Trivial);
    }
    let n = q.order();
    let (mu, e) = column_counts(q)?;
    debug_assert_eq!(3 * e + mu + 2, n as i64);
    let exp = |a: usize, b: usize| q.exponent(a, b);
    for i in 1..n {
        for j in 1..n {
            // each unordered pair once, through its ω or 1 orientation
            if i == j || exp(i, j) == 2 || (exp(i, j) == 0 && i > j) {
                continue;
            }
            if let Some(v) = pair_violation(&exp, n, mu, e, i, j) {
                return Err(v);
            }
        }
    }
    Ok(mu)
}

pub fn verify_via_conditions(q: &SeidelMatrix) -> Option<i64> {
    check_conditions(q).ok()
}
