use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parameters `(n, k, μ, e, λ₁, λ₂)` of an equiangular `(n, k)`-frame whose
/// signature matrix satisfies `Q² = (n-1)I + μQ`.
///
/// `λ₁ < 0 < λ₂` are the roots of `x² - μx - (n-1)`, `λ₂` having
/// multiplicity `k`. `e = (n - μ - 2)/3` is absent when that is not integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrameParams {
    pub n: i64,
    pub k: i64,
    pub mu: i64,
    pub e: Option<i64>,
    pub lambda1: i64,
    pub lambda2: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("order {0} is below 2")]
    OrderTooSmall(i64),
    #[error("4(n-1)+mu^2 = {0} is not a perfect square")]
    NotPerfectSquare(i64),
    #[error("k = {num}/{den} is not an integer")]
    NonIntegralK { num: i64, den: i64 },
    #[error("eigenvalues (mu -/+ {root})/2 are not integers")]
    NonIntegralLambda { root: i64 },
    #[error("parameter arithmetic overflowed")]
    Overflow,
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub(crate) fn exact_sqrt(v: i64) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let r = (v as u64).isqrt() as i64;
    (r * r == v).then_some(r)
}

/// `4(n-1) + μ²`.
pub(crate) fn discriminant(n: i64, mu: i64) -> Result<i64, ParamsError> {
    (n - 1)
        .checked_mul(4)
        .and_then(|a| a.checked_add(mu.checked_mul(mu)?))
        .ok_or(ParamsError::Overflow)
}

/// `k = n/2 - μn / (2√(4(n-1)+μ²))` evaluated exactly, with the eigenvalues.
///
/// With `m = √(4(n-1)+μ²)`, `k = n(m - μ) / 2m` and `λ = (μ ∓ m)/2`.
pub fn derive_params(n: i64, mu: i64) -> Result<FrameParams, ParamsError> {
    if n < 2 {
        return Err(ParamsError::OrderTooSmall(n));
    }
    let disc = discriminant(n, mu)?;
    let m = exact_sqrt(disc).ok_or(ParamsError::NotPerfectSquare(disc))?;
    let num = n.checked_mul(m - mu).ok_or(ParamsError::Overflow)?;
    let den = 2 * m;
    if num % den != 0 {
        let g = gcd(num, den);
        return Err(ParamsError::NonIntegralK { num: num / g, den: den / g });
    }
    if (mu - m) % 2 != 0 {
        return Err(ParamsError::NonIntegralLambda { root: m });
    }
    let e = n - mu - 2;
    Ok(FrameParams {
        n,
        k: num / den,
        mu,
        e: (e % 3 == 0).then_some(e / 3),
        lambda1: (mu - m) / 2,
        lambda2: (mu + m) / 2,
    })
}
