//! Switching-class canonical forms.
//!
//! Every standard-form member of a switching class is obtained by choosing a
//! vertex `v`, switching with `d_a = Q_av` so that row `v` becomes all ones,
//! and ordering the other vertices after it. The canonical form is the
//! lexicographically least column-major upper triangle over those choices,
//! found by branch and bound: each next position takes a vertex whose new
//! column is minimal, branching on ties.

use thiserror::Error;

use crate::seidel::SeidelMatrix;

/// Largest order accepted by [`canonical_form`].
pub const CANONICAL_SIZE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    /// Exponents of the strict upper triangle, column by column.
    pub code: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("order {n} exceeds the canonicalization bound {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
}

struct Search<'a> {
    n: usize,
    /// Standardized exponents for the current first vertex.
    m: &'a [u8],
    order: Vec<usize>,
    current: Vec<u8>,
    best: Option<Vec<u8>>,
}

impl Search<'_> {
    fn column(&self, w: usize) -> Vec<u8> {
        self.order.iter().map(|&u| self.m[u * self.n + w]).collect()
    }

    fn extend(&mut self, remaining: &mut Vec<usize>) {
        if remaining.is_empty() {
            if self.best.as_ref().is_none_or(|b| self.current < *b) {
                self.best = Some(self.current.clone());
            }
            return;
        }
        let cols: Vec<Vec<u8>> = remaining.iter().map(|&w| self.column(w)).collect();
        let min = cols.iter().min().expect("nonempty").clone();
        let pos = self.current.len();
        self.current.extend_from_slice(&min);
        let pruned = self.best.as_ref().is_some_and(|b| self.current[..] > b[..self.current.len()]);
        self.current.truncate(pos);
        if pruned {
            return;
        }
        let ties: Vec<usize> = (0..remaining.len()).filter(|&t| cols[t] == min).map(|t| remaining[t]).collect();
        for w in ties {
            let idx = remaining.iter().position(|&x| x == w).expect("present");
            remaining.remove(idx);
            self.order.push(w);
            self.current.extend_from_slice(&min);
            self.extend(remaining);
            self.current.truncate(pos);
            self.order.pop();
            remaining.insert(idx, w);
        }
    }
}

pub fn canonical_form(q: &SeidelMatrix) -> Result<CanonicalForm, CanonicalError> {
    let n = q.order();
    if n > CANONICAL_SIZE_LIMIT {
        return Err(CanonicalError::SizeLimit { n, limit: CANONICAL_SIZE_LIMIT });
    }
    let exp = |a: usize, b: usize| if a == b { 0 } else { q.exponent(a, b) };
    let mut best: Option<Vec<u8>> = None;
    for v in 0..n {
        let m: Vec<u8> = (0..n * n)
            .map(|idx| {
                let (a, b) = (idx / n, idx % n);
                if a == b {
                    0
                } else {
                    (3 - exp(a, v) + exp(a, b) + exp(b, v)) % 3
                }
            })
            .collect();
        let mut s = Search { n, m: &m, order: vec![v], current: Vec::new(), best: best.take() };
        let mut remaining: Vec<usize> = (0..n).filter(|&w| w != v).collect();
        s.extend(&mut remaining);
        best = s.best;
    }
    Ok(CanonicalForm { n, code: best.unwrap_or_default() })
}

/// Whether some diagonal cube-root switch and permutation maps `q1` to `q2`.
pub fn switching_equivalent(q1: &SeidelMatrix, q2: &SeidelMatrix) -> Result<bool, CanonicalError> {
    if q1.order() != q2.order() {
        return Err(CanonicalError::OrderMismatch { left: q1.order(), right: q2.order() });
    }
    Ok(canonical_form(q1)? == canonical_form(q2)?)
}
