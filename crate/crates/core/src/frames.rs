//! Numerical synthesis of the equiangular `(n, k)`-frame of a signature
//! matrix.
//!
//! The Grammian `P = (k/n)I + c_{n,k} Q` is a rank-`k` orthogonal
//! projection. Its unit eigenvectors for eigenvalue `1` form the columns of
//! an `n × k` matrix `V` with `P = VV*`, and the frame vectors are the
//! conjugated rows of `V`.
//!
//! Each kept eigenvector is rotated so that its first component of largest
//! modulus is real and positive. Frame files store numbers with 17
//! significant digits.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::seidel::{check_signature, derive_params, ParamsError, SeidelMatrix, SignatureViolation};

pub type C64 = Complex<f64>;

/// Eigenvalues above this count toward the rank of a projection.
const RANK_THRESHOLD: f64 = 0.5;
/// Modulus slack when locating the first component of largest modulus.
const PHASE_TIE: f64 = 1e-12;
/// Eigenvalue clustering slack for [`eigenvalue_structure`].
pub const EIGEN_CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("c(n,k) needs 1 <= k < n, got n={n}, k={k}")]
    Domain { n: usize, k: usize },
    #[error("not a signature matrix: {0}")]
    NotSignature(SignatureViolation),
    #[error("parameters: {0}")]
    Params(ParamsError),
    #[error("k={found} disagrees with the derived k={expected}")]
    ParamMismatch { expected: i64, found: usize },
    #[error("{found} eigenvalues exceed 1/2, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("Grammian is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("frame file: {0}")]
    File(String),
}

/// `√(k(n−k) / (n²(n−1)))`.
pub fn c_constant(n: usize, k: usize) -> Result<f64, FrameError> {
    if k < 1 || k >= n {
        return Err(FrameError::Domain { n, k });
    }
    let (n, k) = (n as f64, k as f64);
    Ok((k * (n - k) / (n * n * (n - 1.0))).sqrt())
}

fn complex_seidel(q: &SeidelMatrix) -> DMatrix<C64> {
    let n = q.order();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(0.0, 0.0)
        } else {
            let (re, im) = q.root(i, j).to_complex();
            C64::new(re, im)
        }
    })
}

/// `(k/n)I + c_{n,k} Q`, after checking that `k` is the frame dimension of `Q`.
pub fn grammian_of(q: &SeidelMatrix, k: usize) -> Result<DMatrix<C64>, FrameError> {
    let n = q.order();
    let mu = check_signature(q).map_err(FrameError::NotSignature)?;
    let params = derive_params(n as i64, mu).map_err(FrameError::Params)?;
    if params.k != k as i64 {
        return Err(FrameError::ParamMismatch { expected: params.k, found: k });
    }
    let c = c_constant(n, k)?;
    let diag = k as f64 / n as f64;
    Ok(complex_seidel(q).map(|z| z * c) + DMatrix::from_diagonal_element(n, n, C64::new(diag, 0.0)))
}

/// `n` vectors of dimension `k` with their target Grammian.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSystem {
    pub n: usize,
    pub k: usize,
    pub c: f64,
    pub vectors: Vec<Vec<C64>>,
    pub grammian: DMatrix<C64>,
}

fn fix_phase(col: &mut [C64]) {
    let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = col.iter().find(|z| z.norm() >= max - PHASE_TIE).copied().expect("max is attained");
    let rot = pivot.conj() / pivot.norm();
    for z in col.iter_mut() {
        *z *= rot;
    }
}

/// Factors the projection `p = VV*` and returns the frame of conjugated rows.
pub fn synthesize(p: &DMatrix<C64>, k: usize) -> Result<FrameSystem, FrameError> {
    let n = p.nrows();
    if p.ncols() != n {
        return Err(FrameError::NotSquare { rows: n, cols: p.ncols() });
    }
    let eig = SymmetricEigen::new(p.clone());
    let kept: Vec<usize> = (0..n).filter(|&t| eig.eigenvalues[t] > RANK_THRESHOLD).collect();
    if kept.len() != k {
        return Err(FrameError::RankMismatch { expected: k, found: kept.len() });
    }
    let columns: Vec<Vec<C64>> = kept
        .iter()
        .map(|&t| {
            let mut col: Vec<C64> = eig.eigenvectors.column(t).iter().copied().collect();
            fix_phase(&mut col);
            col
        })
        .collect();
    let vectors = (0..n).map(|i| columns.iter().map(|col| col[i].conj()).collect()).collect();
    let c = if k < n { c_constant(n, k)? } else { 0.0 };
    Ok(FrameSystem { n, k, c, vectors, grammian: p.clone() })
}

/// Frame of the signature matrix `q`, with `k` derived from its parameters.
pub fn frame_of(q: &SeidelMatrix) -> Result<FrameSystem, FrameError> {
    let mu = check_signature(q).map_err(FrameError::NotSignature)?;
    let k = derive_params(q.order() as i64, mu).map_err(FrameError::Params)?.k as usize;
    synthesize(&grammian_of(q, k)?, k)
}

/// `⟨x, y⟩ = Σ x_t conj(y_t)`.
fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    /// `max |Σ f_i f_i* − I_k|`.
    pub parseval_deviation: Sig17,
    /// `max |‖f_i‖² − k/n|`.
    pub norm_deviation: Sig17,
    /// `max_{i≠j} ||⟨f_i, f_j⟩| − c|`.
    pub angle_deviation: Sig17,
    /// `max |⟨f_j, f_i⟩ − P_ij|`.
    pub grammian_deviation: Sig17,
    pub tolerance: Sig17,
    pub passed: bool,
}

impl FrameReport {
    pub fn max_deviation(&self) -> f64 {
        [self.parseval_deviation, self.norm_deviation, self.angle_deviation, self.grammian_deviation]
            .iter()
            .map(|d| d.0)
            .fold(0.0, f64::max)
    }
}

pub fn default_tolerance(n: usize) -> f64 {
    if n <= 9 {
        1e-9
    } else {
        1e-8
    }
}

pub fn validate_frame(fs: &FrameSystem) -> FrameReport {
    let (n, k) = (fs.n, fs.k);
    let mut parseval = 0.0f64;
    for s in 0..k {
        for t in 0..k {
            let sum: C64 = fs.vectors.iter().map(|f| f[s] * f[t].conj()).sum();
            let target = if s == t { 1.0 } else { 0.0 };
            parseval = parseval.max((sum - C64::new(target, 0.0)).norm());
        }
    }
    let weight = k as f64 / n as f64;
    let mut norm = 0.0f64;
    let mut angle = 0.0f64;
    let mut gram = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let g = inner(&fs.vectors[j], &fs.vectors[i]);
            gram = gram.max((g - fs.grammian[(i, j)]).norm());
            if i == j {
                norm = norm.max((g.re - weight).abs());
            } else {
                angle = angle.max((g.norm() - fs.c).abs());
            }
        }
    }
    let tolerance = default_tolerance(n);
    let passed = [parseval, norm, angle, gram].iter().all(|&d| d <= tolerance);
    FrameReport {
        parseval_deviation: Sig17(parseval),
        norm_deviation: Sig17(norm),
        angle_deviation: Sig17(angle),
        grammian_deviation: Sig17(gram),
        tolerance: Sig17(tolerance),
        passed,
    }
}

/// Distinct eigenvalues of `Q`, ascending, with multiplicities.
pub fn eigenvalue_structure(q: &SeidelMatrix) -> Vec<(f64, usize)> {
    let mut vals: Vec<f64> = SymmetricEigen::new(complex_seidel(q)).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for v in vals {
        match out.last_mut() {
            Some((w, m)) if (v - *w).abs() <= EIGEN_CLUSTER_TOL => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// A float written with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite number"));
        }
        // adding 0.0 folds -0.0 into 0.0
        let raw = serde_json::value::RawValue::from_string(format!("{:.16e}", self.0 + 0.0))
            .map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sig17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Sig17)
    }
}

/// On-disk form of a frame: `{n, k, c, vectors, report}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFile {
    pub n: usize,
    pub k: usize,
    pub c: Sig17,
    /// `vectors[i][t] = [re, im]`.
    pub vectors: Vec<Vec<[Sig17; 2]>>,
    pub report: FrameReport,
}

impl FrameFile {
    pub fn new(fs: &FrameSystem, report: FrameReport) -> Self {
        let vectors =
            fs.vectors.iter().map(|f| f.iter().map(|z| [Sig17(z.re), Sig17(z.im)]).collect()).collect();
        Self { n: fs.n, k: fs.k, c: Sig17(fs.c), vectors, report }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite numbers serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, FrameError> {
        let f: Self = serde_json::from_str(text).map_err(|e| FrameError::File(e.to_string()))?;
        if f.vectors.len() != f.n || f.vectors.iter().any(|v| v.len() != f.k) {
            return Err(FrameError::File(format!("expected {} vectors of dimension {}", f.n, f.k)));
        }
        Ok(f)
    }

    /// The stored vectors with their Grammian recomputed from them.
    pub fn to_system(&self) -> FrameSystem {
        let vectors: Vec<Vec<C64>> =
            self.vectors.iter().map(|f| f.iter().map(|[re, im]| C64::new(re.0, im.0)).collect()).collect();
        let grammian = DMatrix::from_fn(self.n, self.n, |i, j| inner(&vectors[j], &vectors[i]));
        FrameSystem { n: self.n, k: self.k, c: self.c.0, vectors, grammian }
    }
}
