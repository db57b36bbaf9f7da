//! Parameter sieve for nontrivial cube-root signature matrices.
//!
//! For `n ≡ 0 (mod 3)` the sieve enumerates `e` with `2n/9 ≤ e ≤ (4n-9)/9`
//! and `e ≡ 0 (mod 3)`, sets `μ = n - 3e - 2`, and keeps the candidates with
//! a perfect-square discriminant `4(n-1)+μ²` and an integral `k > 1`.
//! Only integer arithmetic is used.
//!
//! The residue condition on `e` is `0 (mod 3)`, forced by the mod-9 case
//! split; filtering on `e ≡ 1` instead would reject `(9, 6)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::seidel::params::{discriminant, exact_sqrt, gcd};
use crate::seidel::{derive_params, FrameParams, ParamsError};

/// A necessary condition on `(n, μ)` that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Violation {
    /// `n ≢ 0 (mod 3)`.
    NotDiv3,
    /// `μ ≢ 1 (mod 3)`.
    MuNotOneMod3,
    /// `(n mod 9, μ mod 9) ∉ {(0,7), (3,1), (6,4)}`.
    Mod9,
    /// `4(n-1)+μ²` is not a perfect square.
    NotPerfectSquare,
    /// `4(n-1)+μ² ≢ 0 (mod 9)`.
    DiscriminantNotDiv9,
    /// `(n-μ-2)/3` is not an integer.
    ENotIntegral,
    /// `e ≢ 0 (mod 3)`.
    ENotDiv3,
    /// `e` outside `[2n/9, (4n-9)/9]`.
    EOutOfBounds,
    /// `μ` outside `[1 - n/3, n/3 - 2]`.
    MuOutOfBounds,
}

/// Every violated necessary condition, in declaration order.
pub fn necessary_conditions(n: i64, mu: i64) -> Vec<Violation> {
    let mut out = Vec::new();
    if n.rem_euclid(3) != 0 {
        out.push(Violation::NotDiv3);
    }
    if mu.rem_euclid(3) != 1 {
        out.push(Violation::MuNotOneMod3);
    }
    if !matches!((n.rem_euclid(9), mu.rem_euclid(9)), (0, 7) | (3, 1) | (6, 4)) {
        out.push(Violation::Mod9);
    }
    match discriminant(n, mu) {
        Ok(d) => {
            if exact_sqrt(d).is_none() {
                out.push(Violation::NotPerfectSquare);
            }
            if d.rem_euclid(9) != 0 {
                out.push(Violation::DiscriminantNotDiv9);
            }
        }
        Err(_) => out.push(Violation::NotPerfectSquare),
    }
    let three_e = n - mu - 2;
    if three_e.rem_euclid(3) != 0 {
        out.push(Violation::ENotIntegral);
    } else {
        let e = three_e / 3;
        if e.rem_euclid(3) != 0 {
            out.push(Violation::ENotDiv3);
        }
        // 2n/9 ≤ e ≤ (4n-9)/9
        if 9 * e < 2 * n || 9 * e > 4 * n - 9 {
            out.push(Violation::EOutOfBounds);
        }
    }
    // 1 - n/3 ≤ μ ≤ n/3 - 2
    if 3 * mu < 3 - n || 3 * mu > n - 6 {
        out.push(Violation::MuOutOfBounds);
    }
    out
}

/// Why a sieve candidate (or a whole order) was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rejection {
    NotDiv3,
    NoValidE,
    NotPerfectSquare,
    NotMod9,
    NonIntegralK,
    KTooSmall,
}

/// One `(e, μ)` candidate examined by the sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub e: i64,
    pub mu: i64,
    pub discriminant: i64,
    /// `k` as a reduced fraction `(num, den)` when the discriminant is a square.
    pub k: Option<(i64, i64)>,
    pub outcome: CandidateOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CandidateOutcome {
    Admissible(FrameParams),
    Rejected(Rejection),
}

/// A row of the sieve: the parameters and whether they survived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityRow {
    pub n: i64,
    pub e: i64,
    pub mu: i64,
    pub params: Option<FrameParams>,
    pub admissible: bool,
    pub rejection_reason: Option<Rejection>,
}

/// Full trace of the sieve for one order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveReport {
    pub n: i64,
    /// Set when the order is rejected before any candidate is formed.
    pub rejection: Option<Rejection>,
    pub candidates: Vec<Candidate>,
}

impl SieveReport {
    pub fn admissible(&self) -> impl Iterator<Item = FrameParams> + '_ {
        self.candidates.iter().filter_map(|c| match c.outcome {
            CandidateOutcome::Admissible(p) => Some(p),
            CandidateOutcome::Rejected(_) => None,
        })
    }

    pub fn rows(&self) -> Vec<FeasibilityRow> {
        self.candidates
            .iter()
            .map(|c| {
                let (params, rejection_reason) = match c.outcome {
                    CandidateOutcome::Admissible(p) => (Some(p), None),
                    CandidateOutcome::Rejected(r) => (None, Some(r)),
                };
                FeasibilityRow {
                    n: self.n,
                    e: c.e,
                    mu: c.mu,
                    params,
                    admissible: params.is_some(),
                    rejection_reason,
                }
            })
            .collect()
    }
}

/// Integer range `ceil(2n/9) ..= floor((4n-9)/9)`.
fn e_range(n: i64) -> std::ops::RangeInclusive<i64> {
    let lo = (2 * n + 8).div_euclid(9);
    let hi = (4 * n - 9).div_euclid(9);
    lo..=hi
}

fn examine(n: i64, e: i64) -> Candidate {
    let mu = n - 3 * e - 2;
    let disc = discriminant(n, mu).unwrap_or(i64::MAX);
    let m = exact_sqrt(disc);
    let k = m.map(|m| {
        let (num, den) = (n * (m - mu), 2 * m);
        let g = gcd(num, den);
        (num / g, den / g)
    });
    let outcome = if !matches!((n.rem_euclid(9), mu.rem_euclid(9)), (0, 7) | (3, 1) | (6, 4)) {
        CandidateOutcome::Rejected(Rejection::NotMod9)
    } else {
        match derive_params(n, mu) {
            Ok(p) if p.k > 1 => CandidateOutcome::Admissible(p),
            Ok(_) => CandidateOutcome::Rejected(Rejection::KTooSmall),
            Err(ParamsError::NotPerfectSquare(_)) => CandidateOutcome::Rejected(Rejection::NotPerfectSquare),
            Err(_) => CandidateOutcome::Rejected(Rejection::NonIntegralK),
        }
    };
    Candidate { e, mu, discriminant: disc, k, outcome }
}

pub fn sieve(n: i64) -> SieveReport {
    if n.rem_euclid(3) != 0 {
        return SieveReport { n, rejection: Some(Rejection::NotDiv3), candidates: Vec::new() };
    }
    let candidates: Vec<Candidate> = e_range(n).filter(|e| e.rem_euclid(3) == 0).map(|e| examine(n, e)).collect();
    let rejection = candidates.is_empty().then_some(Rejection::NoValidE);
    SieveReport { n, rejection, candidates }
}

/// Admissible parameter sets for order `n`.
pub fn feasible_params(n: i64) -> Vec<FrameParams> {
    sieve(n).admissible().collect()
}

/// Admissible parameter sets for all `n ≤ max_n`, ordered by `n` then `e`.
pub fn feasibility_table(max_n: i64) -> Vec<FrameParams> {
    let orders: Vec<i64> = (1..=max_n / 3).map(|t| 3 * t).collect();
    let per_n: Vec<Vec<FrameParams>> = orders.par_iter().map(|&n| feasible_params(n)).collect();
    per_n.into_iter().flatten().collect()
}
