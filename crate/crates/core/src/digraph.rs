//! Loop-free digraphs with at most one arc per vertex pair, in bijection with
//! cube-root Seidel matrices: `Q_ij = ω` is the arc `i → j`, `Q_ij = ω²` the
//! arc `j → i`, and `Q_ij = 1` means no arc.
//!
//! The `.dg` format has a header line `m a` followed by `a` lines `u v`
//! (1-based) for the arcs `u → v`.

use std::fmt;

use thiserror::Error;

use crate::eisenstein::CubeRoot;
use crate::seidel::{MatrixError, PairEquation, PairStats, SeidelMatrix};

/// Relation of an ordered vertex pair `(u, v)`, encoded as the matrix
/// exponent: `0` no arc, `1` arc `u → v`, `2` arc `v → u`.
type Relation = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("a digraph needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} is outside 1..={m}")]
    VertexOutOfRange { vertex: usize, m: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
    #[error("arcs {0} -> {1} and {1} -> {0} both present")]
    Antiparallel(usize, usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A digraph on vertices `0..m` (1-based in text and messages).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    m: usize,
    rel: Vec<Relation>,
}

/// Pattern counts for a vertex pair of a digraph; same layout as
/// [`PairStats`], with `one_one` counting only vertices of the graph.
pub type DigraphPairStats = PairStats;

/// A failed digraph condition. Vertices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigraphViolation {
    NoArcs,
    NotRegular { vertex: usize, out_degree: usize, in_degree: usize, expected: usize },
    PairEquation { from: usize, to: usize, adjacent: bool, equation: PairEquation },
}

impl fmt::Display for DigraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoArcs => f.write_str("digraph has no arcs"),
            Self::NotRegular { vertex, out_degree, in_degree, expected } => write!(
                f,
                "vertex {vertex} has out-degree {out_degree} and in-degree {in_degree}, expected {expected}"
            ),
            Self::PairEquation { from, to, adjacent, equation } => write!(
                f,
                "{} pair ({from},{to}): equation d.{} gives {} != {}",
                if *adjacent { "arc" } else { "non-adjacent" },
                equation.number,
                equation.lhs,
                equation.rhs
            ),
        }
    }
}

impl std::error::Error for DigraphViolation {}

impl Digraph {
    /// Builds a digraph from 0-based arcs.
    pub fn new(m: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, DigraphError> {
        if m == 0 {
            return Err(DigraphError::Empty);
        }
        let mut g = Self::empty(m);
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= m {
                    return Err(DigraphError::VertexOutOfRange { vertex: w + 1, m });
                }
            }
            if u == v {
                return Err(DigraphError::Loop(u + 1));
            }
            match g.relation(u, v) {
                0 => g.set(u, v, 1),
                1 => return Err(DigraphError::DuplicateArc(u + 1, v + 1)),
                _ => return Err(DigraphError::Antiparallel(u + 1, v + 1)),
            }
        }
        Ok(g)
    }

    pub fn empty(m: usize) -> Self {
        Self { m, rel: vec![0; m * m] }
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    #[inline]
    fn relation(&self, u: usize, v: usize) -> Relation {
        self.rel[u * self.m + v]
    }

    fn set(&mut self, u: usize, v: usize, r: Relation) {
        self.rel[u * self.m + v] = r;
        self.rel[v * self.m + u] = (3 - r) % 3;
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u != v && self.relation(u, v) == 1
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v && self.relation(u, v) != 0
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.m).flat_map(move |u| (0..self.m).filter(move |&v| self.has_arc(u, v)).map(move |v| (u, v)))
    }

    pub fn arc_count(&self) -> usize {
        self.rel.iter().filter(|&&r| r == 1).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.m).filter(|&u| self.has_arc(v, u)).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.m).filter(|&u| self.has_arc(u, v)).count()
    }

    /// `G(Q)`.
    pub fn from_seidel(q: &SeidelMatrix) -> Self {
        let m = q.order();
        let mut g = Self::empty(m);
        for u in 0..m {
            for v in u + 1..m {
                g.set(u, v, q.exponent(u, v));
            }
        }
        g
    }

    /// The Seidel adjacency matrix `Q_G`.
    pub fn to_seidel(&self) -> Result<SeidelMatrix, MatrixError> {
        SeidelMatrix::from_upper(self.m, |u, v| CubeRoot::from_exponent(self.relation(u, v)))
    }

    /// `Q_G` bordered by a leading row and column of ones, i.e. the matrix of
    /// this graph plus an isolated vertex placed first.
    pub fn bordered_seidel(&self) -> SeidelMatrix {
        SeidelMatrix::from_upper(self.m + 1, |i, j| {
            if i == 0 {
                CubeRoot::ONE
            } else {
                CubeRoot::from_exponent(self.relation(i - 1, j - 1))
            }
        })
        .expect("bordered order is at least 2")
    }

    /// ω-switching at `v`: a non-edge `{v, j}` becomes `v → j`, `v → j`
    /// becomes `j → v`, and `j → v` is deleted.
    pub fn omega_switch(&self, v: usize) -> Self {
        let mut g = self.clone();
        for j in (0..self.m).filter(|&j| j != v) {
            g.set(v, j, (self.relation(v, j) + 1) % 3);
        }
        g
    }

    /// `Some(e)` when every vertex has in- and out-degree `e`.
    pub fn is_e_regular(&self) -> Option<usize> {
        let e = self.out_degree(0);
        (0..self.m)
            .all(|v| self.out_degree(v) == e && self.in_degree(v) == e)
            .then_some(e)
    }

    /// Switches so that `v` becomes isolated and returns the graph on the
    /// remaining vertices, relabelled in increasing order.
    ///
    /// A vertex `u` with `v → u` needs one ω-switch, one with `u → v` needs two.
    pub fn isolate_vertex(&self, v: usize) -> Self {
        let mut g = self.clone();
        for u in (0..self.m).filter(|&u| u != v) {
            let switches = match self.relation(v, u) {
                1 => 1,
                2 => 2,
                _ => 0,
            };
            for _ in 0..switches {
                g = g.omega_switch(u);
            }
        }
        debug_assert!((0..self.m).all(|u| !g.adjacent(u, v)));
        g.delete_vertex(v)
    }

    fn delete_vertex(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.m).filter(|&u| u != v).collect();
        let mut out = Self::empty(keep.len().max(1));
        if keep.is_empty() {
            return out;
        }
        for (a, &u) in keep.iter().enumerate() {
            for (b, &w) in keep.iter().enumerate().skip(a + 1) {
                out.set(a, b, self.relation(u, w));
            }
        }
        out
    }

    /// Counts over the vertices `u ∉ {v, w}`; see [`DigraphPairStats`].
    pub fn pair_stats(&self, v: usize, w: usize) -> DigraphPairStats {
        PairStats::count(|a, b| self.relation(a, b), v, w, 0..self.m)
    }

    /// Checks e-regularity with `e > 0` and the pair equations d.1–d.14.
    /// Returns `e`; the bordered matrix then has `μ = m - 3e - 1`.
    pub fn check_conditions(&self) -> Result<usize, DigraphViolation> {
        if self.arc_count() == 0 {
            return Err(DigraphViolation::NoArcs);
        }
        let e = self.out_degree(0);
        for v in 0..self.m {
            let (out_degree, in_degree) = (self.out_degree(v), self.in_degree(v));
            if out_degree != e || in_degree != e {
                return Err(DigraphViolation::NotRegular { vertex: v + 1, out_degree, in_degree, expected: e });
            }
        }
        let (m, ei) = (self.m as i64, e as i64);
        for v in 0..self.m {
            for w in (0..self.m).filter(|&w| w != v) {
                let adjacent = match self.relation(v, w) {
                    1 => true,
                    0 if v < w => false,
                    _ => continue,
                };
                let s = self.pair_stats(v, w);
                let eqs = if adjacent { arc_pair_equations(&s, m, ei) } else { non_adjacent_equations(&s, m, ei) };
                if let Some(equation) = eqs.into_iter().find(|eq| !eq.holds()) {
                    return Err(DigraphViolation::PairEquation { from: v + 1, to: w + 1, adjacent, equation });
                }
            }
        }
        Ok(e)
    }

    pub fn parse_dg(text: &str) -> Result<Self, DigraphError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_err = |line: usize, message: &str| DigraphError::Parse { line, message: message.to_string() };
        let (idx, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let nums = parse_pair(header).ok_or_else(|| parse_err(idx + 1, "expected \"m a\""))?;
        let (m, a) = nums;
        let mut arcs = Vec::with_capacity(a);
        for (idx, line) in lines {
            let (u, v) = parse_pair(line).ok_or_else(|| parse_err(idx + 1, "expected \"u v\""))?;
            if u == 0 || v == 0 {
                return Err(parse_err(idx + 1, "vertices are 1-based"));
            }
            arcs.push((u - 1, v - 1));
        }
        if arcs.len() != a {
            return Err(parse_err(1, &format!("header announces {a} arcs, found {}", arcs.len())));
        }
        Self::new(m, arcs)
    }

    pub fn to_dg(&self) -> String {
        let mut out = format!("{} {}\n", self.m, self.arc_count());
        for (u, v) in self.arcs() {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    let pair = (it.next()?.ok()?, it.next()?.ok()?);
    it.next().is_none().then_some(pair)
}

/// Equations d.1–d.7 for an arc `v → w`, scaled by 3.
fn arc_pair_equations(s: &PairStats, m: i64, e: i64) -> [PairEquation; 7] {
    let (b, c1) = (s.one_omega, s.one_one);
    let eq = |number, lhs, rhs| PairEquation { number, lhs, rhs };
    [
        eq(1, 3 * (s.omega_omega2 - b), 6 * e + 1 - 2 * m),
        eq(2, 3 * (s.omega_omega - c1), 6 * e - 2 * m + 1),
        eq(3, 3 * (s.omega_one + b + c1), 4 * m - 9 * e - 5),
        eq(4, 3 * (s.omega2_omega2 - c1), 3 * e - m + 2),
        eq(5, 3 * (s.omega2_omega + b + c1), 2 * m - 3 * e - 4),
        eq(6, 3 * (s.omega2_one - b), 3 * e - m + 2),
        eq(7, s.one_omega2 + b + c1, m - 2 * e - 1),
    ]
}

/// Equations d.8–d.14 for a non-adjacent pair.
fn non_adjacent_equations(s: &PairStats, m: i64, e: i64) -> [PairEquation; 7] {
    let (b, c1) = (s.one_omega, s.one_one);
    let free = m - 2 * e - 2 - b - c1;
    let eq = |number, lhs, rhs| PairEquation { number, lhs, rhs };
    [
        eq(8, s.omega_omega2, b),
        eq(9, s.omega_omega, c1 + 3 * e + 2 - m),
        eq(10, s.omega_one, free),
        eq(11, s.omega2_omega2, c1 + 3 * e + 2 - m),
        eq(12, s.omega2_omega, free),
        eq(13, s.omega2_one, b),
        eq(14, s.one_omega2, free),
    ]
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<(usize, usize)> = self.arcs().map(|(u, v)| (u + 1, v + 1)).collect();
        f.debug_struct("Digraph").field("m", &self.m).field("arcs", &arcs).finish()
    }
}
