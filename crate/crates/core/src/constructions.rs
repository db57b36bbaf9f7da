//! The explicit 9×9 signature matrix and the Kronecker bootstrap
//! `Q = (Q₁+I) ⊗ (Q₂+I) − I` for signature matrices with `μ = −2`.

use thiserror::Error;

use crate::eisenstein::CubeRoot;
use crate::seidel::{verify_signature, SeidelMatrix};

/// Default cap on the order produced by [`power_9`].
pub const DEFAULT_SIZE_CAP: usize = 729;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("factor {factor} has mu = {mu:?}, composition needs mu = -2")]
    PreconditionMuNotMinus2 { factor: usize, mu: Option<i64> },
    #[error("order 9^{m} exceeds the size cap {cap}")]
    SizeLimit { m: u32, cap: usize },
    #[error("power must be at least 1")]
    ZeroPower,
}

const NINE: [&str; 9] = [
    "0 1 1 1 1 1 1 1 1",
    "1 0 1 w w w W W W",
    "1 1 0 W W W w w w",
    "1 W w 0 w W 1 w W",
    "1 W w W 0 w w W 1",
    "1 W w w W 0 W 1 w",
    "1 w W 1 W w 0 W w",
    "1 w W W w 1 w 0 W",
    "1 w W w 1 W W w 0",
];

/// The nontrivial 9×9 cube-root signature matrix of a `(9, 6)`-frame.
pub fn frame_9_6() -> SeidelMatrix {
    let text = format!("9\n{}\n", NINE.join("\n"));
    SeidelMatrix::parse_crsm(&text).expect("embedded matrix is valid")
}

/// Exponent of `(Q + I)_ij`.
fn shifted_exponent(q: &SeidelMatrix, i: usize, j: usize) -> u8 {
    if i == j {
        0
    } else {
        q.exponent(i, j)
    }
}

/// `(Q₁+I) ⊗ (Q₂+I) − I` in row-major Kronecker order: row `a·n₂ + c`,
/// column `b·n₂ + d` carries `(Q₁+I)_ab (Q₂+I)_cd`.
pub fn tensor_compose(q1: &SeidelMatrix, q2: &SeidelMatrix) -> Result<SeidelMatrix, ConstructionError> {
    for (factor, q) in [(1, q1), (2, q2)] {
        let mu = verify_signature(q);
        if mu != Some(-2) {
            return Err(ConstructionError::PreconditionMuNotMinus2 { factor, mu });
        }
    }
    Ok(kronecker_shifted(q1, q2))
}

fn kronecker_shifted(q1: &SeidelMatrix, q2: &SeidelMatrix) -> SeidelMatrix {
    let n2 = q2.order();
    SeidelMatrix::from_upper(q1.order() * n2, |r, c| {
        let (a, x) = (r / n2, r % n2);
        let (b, y) = (c / n2, c % n2);
        CubeRoot::from_exponent((shifted_exponent(q1, a, b) + shifted_exponent(q2, x, y)) % 3)
    })
    .expect("Kronecker product of signature matrices is a Seidel matrix")
}

/// The `m`-fold composition of [`frame_9_6`], of order `9^m`.
pub fn power_9(m: u32, cap: usize) -> Result<SeidelMatrix, ConstructionError> {
    if m == 0 {
        return Err(ConstructionError::ZeroPower);
    }
    match 9usize.checked_pow(m) {
        Some(order) if order <= cap => {}
        _ => return Err(ConstructionError::SizeLimit { m, cap }),
    }
    let nine = frame_9_6();
    let mut q = nine.clone();
    for _ in 1..m {
        q = kronecker_shifted(&q, &nine);
    }
    Ok(q)
}
