//! Dense real matrices, Cholesky factorization, SPD predicates, and the
//! Woodbury-style split of an SPD inverse used by the bounds machinery.
//!
//! Conventions: `cholesky` returns the upper-triangular `R` with `R^T R = G`
//! and positive diagonal. Inverses are computed through Cholesky solves.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::tolerances::{PIVOT_TOL_FACTOR, SYM_TOL};
use crate::Result;

/// Row-major dense matrix with finite entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl TryFrom<RawMatrix> for DenseMatrix {
    type Error = Error;
    fn try_from(raw: RawMatrix) -> Result<Self> {
        DenseMatrix::new(raw.rows, raw.cols, raw.data)
    }
}

impl From<DenseMatrix> for RawMatrix {
    fn from(m: DenseMatrix) -> Self {
        RawMatrix { rows: m.rows, cols: m.cols, data: m.data }
    }
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: format!("{}x{} matrix with {} entries", rows, cols, data.len()),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { context: "ragged rows".into() });
        }
        Self::new(r, c, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            m.data[i * n + i] = v;
        }
        if n == 0 {
            return Err(Error::DimensionMismatch { context: "empty diagonal".into() });
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "{}x{} * {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { context: "mat_vec length".into() });
        }
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut s = 0.0;
            for j in 0..self.cols {
                s += self.get(i, j) * v[j];
            }
            out[i] = s;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { context: "elementwise shape".into() });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, s: f64) -> Result<Self> {
        Self::new(self.rows, self.cols, self.data.iter().map(|&v| v * s).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(A + A^T) / 2`; requires a square matrix.
    pub fn symmetrized(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = 0.5 * (self.get(i, j) + self.get(j, i));
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self.get(i, j) - self.get(j, i)).abs() > SYM_TOL * scale {
                    return false;
                }
            }
        }
        true
    }
}

/// Symmetric positive (semi)definite matrix. `new` certifies strict positive
/// definiteness via a Cholesky attempt; `new_psd` accepts semidefinite
/// matrices and records that weaker certificate in `psd_only`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpdMatrix {
    mat: DenseMatrix,
    psd_only: bool,
}

impl SpdMatrix {
    pub fn new(mat: DenseMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NonSquare { rows: mat.rows(), cols: mat.cols() });
        }
        if !mat.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        cholesky_dense(&mat)?;
        Ok(Self { mat, psd_only: false })
    }

    pub fn new_psd(mat: DenseMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NonSquare { rows: mat.rows(), cols: mat.cols() });
        }
        if !mat.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if cholesky_dense(&mat).is_ok() {
            return Ok(Self { mat, psd_only: false });
        }
        if mat.max_abs() == 0.0 {
            return Ok(Self { mat, psd_only: true });
        }
        let n = mat.rows();
        let maxdiag = (0..n).fold(0.0f64, |m, i| m.max(mat.get(i, i)));
        let shift = 2.0 * PIVOT_TOL_FACTOR * maxdiag.max(mat.max_abs());
        let mut shifted = mat.clone();
        for i in 0..n {
            shifted.set(i, i, shifted.get(i, i) + shift);
        }
        cholesky_dense(&shifted)?;
        Ok(Self { mat, psd_only: true })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.mat
    }

    pub fn is_psd_only(&self) -> bool {
        self.psd_only
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let sum = self.mat.add(&other.mat)?;
        if self.psd_only && other.psd_only {
            Self::new_psd(sum)
        } else {
            Self::new(sum)
        }
    }
}

/// Upper-triangular Cholesky factor with strictly positive diagonal; entries
/// below the diagonal are exactly zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct UpperTriangularFactor {
    dim: usize,
    data: Vec<f64>,
}

impl TryFrom<RawMatrix> for UpperTriangularFactor {
    type Error = Error;
    fn try_from(raw: RawMatrix) -> Result<Self> {
        let m = DenseMatrix::new(raw.rows, raw.cols, raw.data)?;
        UpperTriangularFactor::from_dense(&m)
    }
}

impl From<UpperTriangularFactor> for RawMatrix {
    fn from(r: UpperTriangularFactor) -> Self {
        RawMatrix { rows: r.dim, cols: r.dim, data: r.data }
    }
}

impl UpperTriangularFactor {
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
        }
        let n = m.rows();
        for i in 0..n {
            for j in 0..i {
                if m.get(i, j) != 0.0 {
                    return Err(Error::PreconditionViolated(
                        "entries below the diagonal must be exactly zero".into(),
                    ));
                }
            }
            if m.get(i, i) <= 0.0 {
                return Err(Error::PreconditionViolated(
                    "diagonal entries must be positive".into(),
                ));
            }
        }
        Ok(Self { dim: n, data: m.data().to_vec() })
    }

    pub(crate) fn from_upper_data(dim: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.dim && j < self.dim);
        self.data[i * self.dim + j]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn min_diag(&self) -> f64 {
        self.diag().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Euclidean norm of column `j` (rows `0..=j`).
    pub fn col_norm(&self, j: usize) -> f64 {
        (0..=j).map(|i| self.get(i, j).powi(2)).sum::<f64>().sqrt()
    }

    /// Determinant: the diagonal product, exactly as computed.
    pub fn det(&self) -> f64 {
        self.diag().into_iter().product()
    }

    /// `sum_j ln r_jj`, a stable route to `|det R|^(1/n)` powers.
    pub fn log_det(&self) -> f64 {
        self.diag().into_iter().map(f64::ln).sum()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }

    /// `R^T R`, symmetrized.
    pub fn gram(&self) -> DenseMatrix {
        let d = self.to_dense();
        let g = d.transpose().matmul(&d).expect("square product");
        g.symmetrized().expect("square")
    }

    /// Back substitution for `R x = b`.
    pub fn solve_upper(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim {
            return Err(Error::DimensionMismatch { context: "solve_upper rhs".into() });
        }
        let n = self.dim;
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in (i + 1)..n {
                s -= self.get(i, j) * x[j];
            }
            x[i] = s / self.get(i, i);
        }
        Ok(x)
    }

    /// Forward substitution for `R^T x = b`.
    pub fn solve_lower_t(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim {
            return Err(Error::DimensionMismatch { context: "solve_lower_t rhs".into() });
        }
        let n = self.dim;
        let mut x = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.get(j, i) * x[j];
            }
            x[i] = s / self.get(i, i);
        }
        Ok(x)
    }

    /// `R x` for an integer vector.
    pub fn mul_int_vec(&self, x: &[i64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { context: "mul_int_vec length".into() });
        }
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            let mut s = 0.0;
            for j in i..self.dim {
                s += self.get(i, j) * x[j] as f64;
            }
            out[i] = s;
        }
        Ok(out)
    }

    /// `||R x||_2` for an integer vector.
    pub fn norm_int_vec(&self, x: &[i64]) -> Result<f64> {
        let v = self.mul_int_vec(x)?;
        Ok(v.iter().map(|a| a * a).sum::<f64>().sqrt())
    }
}

fn cholesky_dense(g: &DenseMatrix) -> Result<UpperTriangularFactor> {
    let n = g.rows();
    let maxdiag = (0..n).fold(f64::NEG_INFINITY, |m, i| m.max(g.get(i, i)));
    let pivot_tol = PIVOT_TOL_FACTOR * maxdiag;
    let mut r = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..=j {
            let mut s = g.get(i, j);
            for k in 0..i {
                s -= r[k * n + i] * r[k * n + j];
            }
            if i == j {
                if s <= pivot_tol {
                    return Err(Error::NotPositiveDefinite { pivot: j });
                }
                r[j * n + j] = s.sqrt();
            } else {
                r[i * n + j] = s / r[i * n + i];
            }
        }
    }
    Ok(UpperTriangularFactor::from_upper_data(n, r))
}

/// Upper-triangular Cholesky factor of an SPD matrix: `R^T R = G`.
pub fn cholesky(g: &SpdMatrix) -> Result<UpperTriangularFactor> {
    cholesky_dense(g.as_dense())
}

/// Symmetry within tolerance plus a Cholesky attempt. With `strict = false`
/// the matrix is first shifted by a small multiple of the identity so exact
/// semidefiniteness passes.
pub fn is_spd(m: &DenseMatrix, strict: bool) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_symmetric() {
        return Ok(false);
    }
    if strict {
        Ok(cholesky_dense(m).is_ok())
    } else {
        Ok(SpdMatrix::new_psd(m.clone()).is_ok())
    }
}

/// Determinant of a square matrix by LU factorization with partial pivoting.
pub fn det(m: &DenseMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.data().to_vec();
    let mut sign = 1.0;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in (k + 1)..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Ok(0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in (k + 1)..n {
            let f = a[i * n + k] / pivot;
            a[i * n + k] = 0.0;
            for j in (k + 1)..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    let mut d = sign;
    for k in 0..n {
        d *= a[k * n + k];
    }
    Ok(d)
}

/// Inverse of an SPD matrix through Cholesky solves (never the adjugate).
pub fn spd_inverse(g: &SpdMatrix) -> Result<SpdMatrix> {
    let r = cholesky(g)?;
    let n = g.dim();
    let mut inv = DenseMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let y = r.solve_lower_t(&e)?;
        let x = r.solve_upper(&y)?;
        e[j] = 0.0;
        for i in 0..n {
            inv.set(i, j, x[i]);
        }
    }
    SpdMatrix::new(inv.symmetrized()?)
}

/// Canonical triangular factor generating the same lattice as `basis`: the
/// basis itself when it is already exactly upper triangular with a positive
/// diagonal, otherwise the Cholesky factor of its Gram matrix.
pub fn triangularize(basis: &DenseMatrix) -> Result<UpperTriangularFactor> {
    if let Ok(r) = UpperTriangularFactor::from_dense(basis) {
        return Ok(r);
    }
    let gram = basis.transpose().matmul(basis)?.symmetrized()?;
    cholesky(&SpdMatrix::new(gram)?)
}

/// Splits `G1^{-1}` as `S + T` with `S = (G1+G2)^{-1}` and
/// `T = G1^{-1} (G1^{-1} + G2^{-1})^{-1} G1^{-1}`; returns `(S, T)`.
pub fn woodbury_decompose(g1: &SpdMatrix, g2: &SpdMatrix) -> Result<(SpdMatrix, SpdMatrix)> {
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch { context: "woodbury operands".into() });
    }
    let s = spd_inverse(&g1.add(g2)?)?;
    let g1_inv = spd_inverse(g1)?;
    let g2_inv = spd_inverse(g2)?;
    let mid = spd_inverse(&g1_inv.add(&g2_inv)?)?;
    let t = g1_inv
        .as_dense()
        .matmul(mid.as_dense())?
        .matmul(g1_inv.as_dense())?
        .symmetrized()?;
    Ok((s, SpdMatrix::new(t)?))
}
