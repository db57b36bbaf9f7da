//! Cube-root Seidel matrices: self-adjoint, zero diagonal, off-diagonal
//! entries in `{1, ω, ω²}`.
//!
//! Rust-side indices are 0-based. The `.crsm` format and all user-facing
//! messages use 1-based indices.

pub(crate) mod conditions;
mod crsm;
mod exact;
pub(crate) mod params;
mod signature;

use std::fmt;

use thiserror::Error;

use crate::eisenstein::CubeRoot;

pub use conditions::{
    check_conditions, omega_pair_equations, one_pair_equations, pair_stats, verify_via_conditions,
    ConditionViolation, PairEquation, PairStats, PairStatsError,
};
pub use crsm::CrsmError;
pub use exact::EisensteinMatrix;
pub use params::{derive_params, FrameParams, ParamsError};
pub use signature::{check_signature, square, verify_signature, SignatureViolation};

/// One matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    Root(CubeRoot),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix order {0} is below the minimum of 2")]
    OrderTooSmall(usize),
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("nonzero diagonal entry at ({index}, {index})")]
    NonzeroDiagonal { index: usize },
    #[error("zero off-diagonal entry at ({row}, {col})")]
    ZeroOffDiagonal { row: usize, col: usize },
    #[error("entries ({row}, {col}) and ({col}, {row}) are not conjugate")]
    NotSelfAdjoint { row: usize, col: usize },
    #[error("switching diagonal has length {found}, expected {expected}")]
    DiagonalLength { found: usize, expected: usize },
    #[error("not a permutation of 1..={0}")]
    NotPermutation(usize),
}

/// An `n × n` cube-root Seidel matrix. Immutable after construction.
///
/// Each off-diagonal entry is stored as the exponent `t` of `ω^t`; the
/// diagonal slot is unused.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SeidelMatrix {
    n: usize,
    exps: Vec<u8>,
}

/// The diagonal `D = diag(d_1, …, d_n)` of a switch `Q ↦ D* Q D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalSwitch(pub Vec<CubeRoot>);

impl DiagonalSwitch {
    pub fn identity(n: usize) -> Self {
        Self(vec![CubeRoot::ONE; n])
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&d| d == CubeRoot::ONE)
    }
}

/// Per-column counts of `1`, `ω` and `ω²` entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowStats {
    pub ones: usize,
    pub omegas: usize,
    pub omega_sqs: usize,
}

impl SeidelMatrix {
    /// Builds a matrix from its strict upper triangle; the lower triangle is
    /// filled by conjugation.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> CubeRoot) -> Result<Self, MatrixError> {
        if n < 2 {
            return Err(MatrixError::OrderTooSmall(n));
        }
        let mut exps = vec![0u8; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let r = upper(i, j);
                exps[i * n + j] = r.exponent();
                exps[j * n + i] = r.conj().exponent();
            }
        }
        Ok(Self { n, exps })
    }

    /// Validating constructor from a full grid of entries.
    pub fn from_entries(rows: &[Vec<Entry>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n < 2 {
            return Err(MatrixError::OrderTooSmall(n));
        }
        let mut exps = vec![0u8; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Ragged { row: i + 1, found: row.len(), expected: n });
            }
            for (j, &entry) in row.iter().enumerate() {
                match (i == j, entry) {
                    (true, Entry::Zero) => {}
                    (true, Entry::Root(_)) => return Err(MatrixError::NonzeroDiagonal { index: i + 1 }),
                    (false, Entry::Zero) => return Err(MatrixError::ZeroOffDiagonal { row: i + 1, col: j + 1 }),
                    (false, Entry::Root(r)) => exps[i * n + j] = r.exponent(),
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if exps[j * n + i] != CubeRoot::from_exponent(exps[i * n + j]).conj().exponent() {
                    return Err(MatrixError::NotSelfAdjoint { row: i + 1, col: j + 1 });
                }
            }
        }
        Ok(Self { n, exps })
    }

    /// The matrix `J - I`.
    pub fn trivial(n: usize) -> Result<Self, MatrixError> {
        Self::from_upper(n, |_, _| CubeRoot::ONE)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Entry {
        if i == j {
            Entry::Zero
        } else {
            Entry::Root(self.root(i, j))
        }
    }

    /// Off-diagonal entry `Q_ij`, `i ≠ j`.
    #[inline]
    pub fn root(&self, i: usize, j: usize) -> CubeRoot {
        debug_assert_ne!(i, j);
        CubeRoot::from_exponent(self.exps[i * self.n + j])
    }

    #[inline]
    pub(crate) fn exponent(&self, i: usize, j: usize) -> u8 {
        self.exps[i * self.n + j]
    }

    /// Returns `P^T (D* Q D) P`: entry `(i, j)` of the result is
    /// `conj(d_a) Q_ab d_b` with `a = perm[i]`, `b = perm[j]`.
    pub fn switch(&self, diag: &[CubeRoot], perm: &[usize]) -> Result<Self, MatrixError> {
        let n = self.n;
        if diag.len() != n {
            return Err(MatrixError::DiagonalLength { found: diag.len(), expected: n });
        }
        check_permutation(perm, n)?;
        Self::from_upper(n, |i, j| {
            let (a, b) = (perm[i], perm[j]);
            diag[a].conj() * self.root(a, b) * diag[b]
        })
    }

    /// `D* Q D` with `D = diag(diag)`.
    pub fn conjugate_diagonal(&self, diag: &[CubeRoot]) -> Result<Self, MatrixError> {
        let id: Vec<usize> = (0..self.n).collect();
        self.switch(diag, &id)
    }

    /// Simultaneous row/column permutation: result `(i, j)` is `Q[perm[i]][perm[j]]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self, MatrixError> {
        self.switch(&vec![CubeRoot::ONE; self.n], perm)
    }

    /// Switches to the representative whose first row and column are all `1`.
    ///
    /// Uses `d_j = Q_j1`, so that `conj(d_1) Q_1j d_j = Q_1j Q_j1 = 1`.
    pub fn standard_form(&self) -> (Self, DiagonalSwitch) {
        let mut diag = vec![CubeRoot::ONE; self.n];
        for (j, d) in diag.iter_mut().enumerate().skip(1) {
            *d = self.root(j, 0);
        }
        let std = self.conjugate_diagonal(&diag).expect("diagonal has matrix order");
        (std, DiagonalSwitch(diag))
    }

    pub fn is_standard_form(&self) -> bool {
        (1..self.n).all(|j| self.root(0, j) == CubeRoot::ONE)
    }

    /// True iff the standard form has every off-diagonal entry equal to `1`.
    pub fn is_trivial(&self) -> bool {
        let (std, _) = self.standard_form();
        std.exps
            .iter()
            .enumerate()
            .all(|(idx, &e)| idx / self.n == idx % self.n || e == 0)
    }

    /// Counts of `1`, `ω`, `ω²` among `Q_ij`, `i ≠ j`, in column `j`.
    pub fn row_stats(&self, j: usize) -> RowStats {
        let mut counts = [0usize; 3];
        for i in (0..self.n).filter(|&i| i != j) {
            counts[self.exponent(i, j) as usize] += 1;
        }
        RowStats { ones: counts[0], omegas: counts[1], omega_sqs: counts[2] }
    }

    /// Sum of `|Q_ij|²` over all entries.
    pub fn frobenius_norm_sq(&self) -> usize {
        self.n * (self.n - 1)
    }

    /// Rows of `.crsm` tokens.
    pub fn token_rows(&self) -> impl Iterator<Item = Vec<char>> + '_ {
        (0..self.n).map(move |i| {
            (0..self.n)
                .map(|j| if i == j { '0' } else { self.root(i, j).token() })
                .collect()
        })
    }
}

impl fmt::Debug for SeidelMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SeidelMatrix(n={})", self.n)?;
        for row in self.token_rows() {
            let line: Vec<String> = row.iter().map(char::to_string).collect();
            writeln!(f, "  {}", line.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<(), MatrixError> {
    if perm.len() != n {
        return Err(MatrixError::NotPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(MatrixError::NotPermutation(n));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::frame_9_6;

    fn circulant3() -> SeidelMatrix {
        SeidelMatrix::from_upper(3, |i, j| match (i, j) {
            (0, 1) => CubeRoot::OMEGA,
            (0, 2) => CubeRoot::OMEGA_SQ,
            _ => CubeRoot::OMEGA,
        })
        .unwrap()
    }

    #[test]
    fn rejects_bad_entries() {
        use Entry::*;
        let one = Root(CubeRoot::ONE);
        let w = Root(CubeRoot::OMEGA);
        assert_eq!(
            SeidelMatrix::from_entries(&[vec![one, one], vec![one, Zero]]),
            Err(MatrixError::NonzeroDiagonal { index: 1 })
        );
        assert_eq!(
            SeidelMatrix::from_entries(&[vec![Zero, w], vec![w, Zero]]),
            Err(MatrixError::NotSelfAdjoint { row: 1, col: 2 })
        );
        assert_eq!(
            SeidelMatrix::from_entries(&[vec![Zero, Zero], vec![one, Zero]]),
            Err(MatrixError::ZeroOffDiagonal { row: 1, col: 2 })
        );
        assert_eq!(
            SeidelMatrix::from_entries(&[vec![Zero, one], vec![one]]),
            Err(MatrixError::Ragged { row: 2, found: 1, expected: 2 })
        );
        assert_eq!(SeidelMatrix::trivial(1), Err(MatrixError::OrderTooSmall(1)));
    }

    #[test]
    fn standard_form_of_circulant_is_trivial() {
        let q = circulant3();
        let (std, diag) = q.standard_form();
        assert_eq!(std, SeidelMatrix::trivial(3).unwrap());
        assert_eq!(q.conjugate_diagonal(&diag.0).unwrap(), std);
        assert!(q.is_trivial());
    }

    #[test]
    fn standard_form_of_nine_is_identity() {
        let q = frame_9_6();
        let (std, diag) = q.standard_form();
        assert_eq!(std, q);
        assert!(diag.is_identity());
        assert!(!q.is_trivial());
    }

    #[test]
    fn switch_identity_and_symmetry() {
        let q = frame_9_6();
        let id: Vec<usize> = (0..9).collect();
        assert_eq!(q.switch(&[CubeRoot::ONE; 9], &id).unwrap(), q);
        let t = SeidelMatrix::trivial(3).unwrap();
        assert_eq!(t.permute(&[1, 0, 2]).unwrap(), t);
        assert!(matches!(q.permute(&[0, 0, 1, 2, 3, 4, 5, 6, 7]), Err(MatrixError::NotPermutation(9))));
        assert!(matches!(q.switch(&[CubeRoot::ONE; 3], &id), Err(MatrixError::DiagonalLength { .. })));
    }

    #[test]
    fn switch_is_self_adjoint_and_composes() {
        let q = frame_9_6();
        let d: Vec<CubeRoot> = (0..9).map(|i| CubeRoot::pow(i * 7 + 1)).collect();
        let p = [3, 1, 4, 0, 5, 8, 2, 6, 7];
        let s = q.switch(&d, &p).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                if i != j {
                    assert_eq!(s.root(i, j), s.root(j, i).conj());
                    assert_eq!(s.root(i, j), d[p[i]].conj() * q.root(p[i], p[j]) * d[p[j]]);
                }
            }
        }
    }

    #[test]
    fn row_stats_examples() {
        let q = frame_9_6();
        assert_eq!(q.row_stats(1), RowStats { ones: 2, omegas: 3, omega_sqs: 3 });
        let t = SeidelMatrix::trivial(4).unwrap();
        assert_eq!(t.row_stats(2), RowStats { ones: 3, omegas: 0, omega_sqs: 0 });
        for j in 1..9 {
            let s = q.row_stats(j);
            assert_eq!(s.omegas, s.omega_sqs);
            assert_eq!(s.ones + s.omegas + s.omega_sqs, 8);
        }
    }

    #[test]
    fn standard_rows_contain_a_one_beyond_the_border() {
        let q = frame_9_6();
        let e = 3;
        for i in 1..9 {
            let ones = (1..9).filter(|&j| j != i && q.root(i, j) == CubeRoot::ONE).count();
            assert_eq!(ones, 9 - 2 - 2 * e);
            assert!(9 * ones >= 9);
        }
    }
}
