use rayon::prelude::*;

use super::{Entry, SeidelMatrix};
use crate::eisenstein::{EisensteinInt, Overflow};

/// Dense square matrix over the Eisenstein integers with checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinMatrix {
    n: usize,
    data: Vec<EisensteinInt>,
}

impl EisensteinMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![EisensteinInt::ZERO; n * n] }
    }

    /// `s·I`.
    pub fn scalar(n: usize, s: i64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = EisensteinInt::from_int(s);
        }
        m
    }

    pub fn from_seidel(q: &SeidelMatrix) -> Self {
        let n = q.order();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if let Entry::Root(r) = q.entry(i, j) {
                    m.data[i * n + j] = r.to_eisenstein();
                }
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> EisensteinInt {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: EisensteinInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, Overflow> {
        assert_eq!(self.n, rhs.n, "order mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Result<_, _>>()?;
        Ok(Self { n: self.n, data })
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self, Overflow> {
        let data = self.data.iter().map(|a| a.checked_scale(k)).collect::<Result<_, _>>()?;
        Ok(Self { n: self.n, data })
    }

    /// Row-parallel product; the result does not depend on the partitioning.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, Overflow> {
        assert_eq!(self.n, rhs.n, "order mismatch");
        let n = self.n;
        let rows: Vec<Vec<EisensteinInt>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![EisensteinInt::ZERO; n];
                for k in 0..n {
                    let a = self.data[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    for (j, out) in row.iter_mut().enumerate() {
                        *out = out.checked_add(a.checked_mul(rhs.data[k * n + j])?)?;
                    }
                }
                Ok(row)
            })
            .collect::<Result<_, Overflow>>()?;
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_square_by_brute_force() {
        // (J - I)² = (n - 2)(J - I) + (n - 1)I
        let n = 4;
        let q = EisensteinMatrix::from_seidel(&SeidelMatrix::trivial(n).unwrap());
        let sq = q.checked_mul(&q).unwrap();
        let expected = q
            .checked_scale(n as i64 - 2)
            .unwrap()
            .checked_add(&EisensteinMatrix::scalar(n, n as i64 - 1))
            .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn overflow_propagates() {
        let mut m = EisensteinMatrix::scalar(2, i64::MAX);
        m.set(0, 1, EisensteinInt::ONE);
        assert!(m.checked_mul(&m).is_err());
    }
}
