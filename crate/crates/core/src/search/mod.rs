//! Exhaustive backtracking over standard-form cube-root Seidel matrices with
//! a prescribed `(n, μ)`.
//!
//! Cells of the strict upper triangle of rows and columns `2..=n` are filled
//! row-major, trying `1 < ω < ω²` in that order. Each row must end up with
//! `e + μ` ones, `e` entries `ω` and `e` entries `ω²` among columns `2..=n`.
//! When a row is complete, the pairwise equations can be checked against all
//! earlier rows. Leaves are verified exactly.
//!
//! The search tree is cut at a fixed depth into independent work units that
//! run in parallel; results are merged in unit order, so the emitted sequence
//! matches a sequential run.

mod canonical;

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eisenstein::CubeRoot;
use crate::feasibility::{necessary_conditions, Violation};
use crate::seidel::conditions::pair_violation;
use crate::seidel::{check_signature, SeidelMatrix};

pub use canonical::{canonical_form, switching_equivalent, CanonicalError, CanonicalForm, CANONICAL_SIZE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub mu: i64,
    /// Stop after this many solutions.
    pub limit: Option<usize>,
    /// Fixed exponents for the first cells in fill order.
    pub prefix: Vec<u8>,
    pub prune_pairwise: bool,
    /// Number of leading free rows that define a work unit.
    pub partition_rows: usize,
}

impl SearchConfig {
    pub fn new(n: usize, mu: i64) -> Self {
        Self { n, mu, limit: None, prefix: Vec::new(), prune_pairwise: true, partition_rows: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("(n={n}, mu={mu}) fails necessary conditions: {violations:?}")]
    InfeasibleParams { n: usize, mu: i64, violations: Vec<Violation> },
    #[error("prefix cell {position}: {reason}")]
    BadPrefix { position: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    /// Accepted cell assignments.
    pub nodes: u64,
    pub solutions: usize,
    /// False when the run stopped early at the limit or at the caller's request.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub solutions: Vec<SeidelMatrix>,
    pub stats: SearchStats,
}

/// Static description of the search space.
struct Space {
    n: usize,
    mu: i64,
    e: i64,
    quota: [u16; 3],
    cells: Vec<(usize, usize)>,
    prune: bool,
}

impl Space {
    fn new(cfg: &SearchConfig) -> Result<Self, SearchError> {
        let n = cfg.n;
        let violations = necessary_conditions(n as i64, cfg.mu);
        if !violations.is_empty() {
            return Err(SearchError::InfeasibleParams { n, mu: cfg.mu, violations });
        }
        let e = (n as i64 - cfg.mu - 2) / 3;
        let quota = [(e + cfg.mu) as u16, e as u16, e as u16];
        let cells = (1..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Ok(Self { n, mu: cfg.mu, e, quota, cells, prune: cfg.prune_pairwise })
    }

    /// Number of cells in the first `rows` free rows.
    fn row_boundary(&self, rows: usize) -> usize {
        self.cells.iter().take_while(|&&(i, _)| i <= rows).count()
    }
}

#[derive(Clone)]
struct State {
    exps: Vec<u8>,
    counts: Vec<[u16; 3]>,
}

impl State {
    fn new(space: &Space) -> Self {
        Self { exps: vec![0; space.n * space.n], counts: vec![[0; 3]; space.n] }
    }

    fn try_place(&mut self, space: &Space, d: usize, v: u8) -> bool {
        let (i, j) = space.cells[d];
        let w = (3 - v) % 3;
        if self.counts[i][v as usize] >= space.quota[v as usize] || self.counts[j][w as usize] >= space.quota[w as usize] {
            return false;
        }
        self.counts[i][v as usize] += 1;
        self.counts[j][w as usize] += 1;
        self.exps[i * space.n + j] = v;
        self.exps[j * space.n + i] = w;
        true
    }

    fn unplace(&mut self, space: &Space, d: usize) {
        let (i, j) = space.cells[d];
        let v = self.exps[i * space.n + j];
        self.counts[i][v as usize] -= 1;
        self.counts[j][((3 - v) % 3) as usize] -= 1;
    }

    /// Pairwise equations for the rows completed by cell `d`.
    fn pairs_ok(&self, space: &Space, d: usize) -> bool {
        let n = space.n;
        let (i, j) = space.cells[d];
        if !space.prune || j != n - 1 {
            return true;
        }
        let exp = |a: usize, b: usize| self.exps[a * n + b];
        let completed: &[usize] = if i == n - 2 { &[n - 2, n - 1] } else { &[i] };
        completed
            .iter()
            .all(|&r| (1..r).all(|a| pair_violation(&exp, n, space.mu, space.e, a, r).is_none()))
    }

    fn place(&mut self, space: &Space, d: usize, v: u8) -> bool {
        if !self.try_place(space, d, v) {
            return false;
        }
        if self.pairs_ok(space, d) {
            true
        } else {
            self.unplace(space, d);
            false
        }
    }

    fn assignment(&self, space: &Space, range: std::ops::Range<usize>) -> Vec<u8> {
        space.cells[range].iter().map(|&(i, j)| self.exps[i * space.n + j]).collect()
    }

    fn matrix(&self, space: &Space) -> SeidelMatrix {
        let n = space.n;
        SeidelMatrix::from_upper(n, |i, j| CubeRoot::from_exponent(self.exps[i * n + j])).expect("n ≥ 2")
    }

    /// Depth-first enumeration of cells `start..end`, calling `visit` at
    /// each full assignment. Returns the number of accepted placements and
    /// whether `visit` asked to stop.
    fn dfs(
        &mut self,
        space: &Space,
        start: usize,
        end: usize,
        visit: &mut impl FnMut(&State) -> ControlFlow<()>,
    ) -> (u64, bool) {
        let mut nodes = 0u64;
        let mut next = vec![0u8; end - start + 1];
        let mut d = start;
        loop {
            if d == end {
                if visit(self).is_break() {
                    return (nodes, true);
                }
            } else {
                let slot = d - start;
                let mut placed = false;
                while next[slot] < 3 {
                    let v = next[slot];
                    next[slot] += 1;
                    if self.place(space, d, v) {
                        nodes += 1;
                        placed = true;
                        break;
                    }
                }
                if placed {
                    d += 1;
                    next[d - start] = 0;
                    continue;
                }
                next[slot] = 0;
            }
            if d == start {
                return (nodes, false);
            }
            d -= 1;
            self.unplace(space, d);
        }
    }
}

struct UnitResult {
    solutions: Vec<SeidelMatrix>,
    nodes: u64,
}

fn run_unit(space: &Space, root: &State, unit: &[u8], start: usize, limit: Option<usize>) -> UnitResult {
    let mut state = root.clone();
    for (offset, &v) in unit.iter().enumerate() {
        let ok = state.try_place(space, start + offset, v);
        debug_assert!(ok);
    }
    let mut solutions = Vec::new();
    let (nodes, _) = state.dfs(space, start + unit.len(), space.cells.len(), &mut |s| {
        let q = s.matrix(space);
        if check_signature(&q) == Ok(space.mu) {
            solutions.push(q);
            if limit.is_some_and(|l| solutions.len() >= l) {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    UnitResult { solutions, nodes }
}

/// Streams every standard-form signature matrix with the given parameters,
/// in fill order, to `emit`.
pub fn search_signatures(
    cfg: &SearchConfig,
    mut emit: impl FnMut(SeidelMatrix) -> ControlFlow<()>,
) -> Result<SearchStats, SearchError> {
    let space = Space::new(cfg)?;
    if cfg.prefix.len() > space.cells.len() {
        return Err(SearchError::BadPrefix {
            position: space.cells.len() + 1,
            reason: format!("prefix longer than the {} free cells", space.cells.len()),
        });
    }
    if let Some(p) = cfg.prefix.iter().position(|&v| v > 2) {
        return Err(SearchError::BadPrefix { position: p + 1, reason: "exponent must be 0, 1 or 2".into() });
    }
    let mut stats = SearchStats { nodes: 0, solutions: 0, complete: true };
    let mut root = State::new(&space);
    for (d, &v) in cfg.prefix.iter().enumerate() {
        if !root.place(&space, d, v) {
            return Ok(stats);
        }
    }

    let start = cfg.prefix.len();
    let unit_end = space.row_boundary(cfg.partition_rows).max(start);
    let mut units: Vec<Vec<u8>> = Vec::new();
    let (nodes, _) = root.clone().dfs(&space, start, unit_end, &mut |s| {
        units.push(s.assignment(&space, start..unit_end));
        ControlFlow::Continue(())
    });
    stats.nodes += nodes;

    let chunk = rayon::current_num_threads().max(1) * 4;
    for batch in units.chunks(chunk) {
        let remaining = cfg.limit.map(|l| l - stats.solutions);
        let results: Vec<UnitResult> =
            batch.par_iter().map(|u| run_unit(&space, &root, u, start, remaining)).collect();
        for r in results {
            stats.nodes += r.nodes;
            for q in r.solutions {
                if cfg.limit.is_some_and(|l| stats.solutions >= l) {
                    stats.complete = false;
                    return Ok(stats);
                }
                stats.solutions += 1;
                if emit(q).is_break() {
                    stats.complete = false;
                    return Ok(stats);
                }
            }
        }
        if cfg.limit.is_some_and(|l| stats.solutions >= l) {
            stats.complete = false;
            return Ok(stats);
        }
    }
    Ok(stats)
}

/// Collects the output of [`search_signatures`].
pub fn search_all(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let mut solutions = Vec::new();
    let stats = search_signatures(cfg, |q| {
        solutions.push(q);
        ControlFlow::Continue(())
    })?;
    Ok(SearchOutcome { solutions, stats })
}
