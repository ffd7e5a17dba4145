//! Basis reduction on upper-triangular Cholesky factors: plain size
//! reduction, LLL, and the partial-LLL (PLLL) variant that defers all size
//! reduction to one final pass.
//!
//! Column swaps are re-triangularized with a Givens rotation on the two
//! affected rows and the diagonal is re-signed positive, so every output is
//! again a valid factor of the same lattice. The unimodular transform is
//! tracked in checked 64-bit integer arithmetic; overflow is an error, never
//! a wrap.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{DenseMatrix, UpperTriangularFactor};
use crate::Result;

/// Square integer matrix with determinant +1 or -1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIntMatrix", into = "RawIntMatrix")]
pub struct UnimodularTransform {
    dim: usize,
    entries: Vec<i64>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl TryFrom<RawIntMatrix> for UnimodularTransform {
    type Error = Error;
    fn try_from(raw: RawIntMatrix) -> Result<Self> {
        if raw.rows != raw.cols {
            return Err(Error::NonSquare { rows: raw.rows, cols: raw.cols });
        }
        if raw.data.len() != raw.rows * raw.cols || raw.rows == 0 {
            return Err(Error::DimensionMismatch { context: "integer matrix shape".into() });
        }
        let z = UnimodularTransform { dim: raw.rows, entries: raw.data };
        if !z.is_unimodular() {
            return Err(Error::PreconditionViolated(
                "integer matrix must have determinant +1 or -1".into(),
            ));
        }
        Ok(z)
    }
}

impl From<UnimodularTransform> for RawIntMatrix {
    fn from(z: UnimodularTransform) -> Self {
        RawIntMatrix { rows: z.dim, cols: z.dim, data: z.entries }
    }
}

impl UnimodularTransform {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { dim: n, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i < self.dim && j < self.dim);
        self.entries[i * self.dim + j]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    /// Exact integer determinant (fraction-free elimination over `BigInt`).
    pub fn det(&self) -> BigInt {
        int_det(self.dim, &self.entries)
    }

    pub fn is_unimodular(&self) -> bool {
        let d = self.det();
        d == BigInt::from(1) || d == BigInt::from(-1)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::new(
            self.dim,
            self.dim,
            self.entries.iter().map(|&v| v as f64).collect(),
        )
        .expect("integer matrix entries are finite")
    }

    /// Checked integer product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { context: "transform product".into() });
        }
        let n = self.dim;
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let term = a.checked_mul(other.get(k, j)).ok_or(Error::TransformOverflow)?;
                    entries[i * n + j] = entries[i * n + j]
                        .checked_add(term)
                        .ok_or(Error::TransformOverflow)?;
                }
            }
        }
        Ok(Self { dim: n, entries })
    }

    /// Checked integer product `self * x`.
    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { context: "transform vector".into() });
        }
        let n = self.dim;
        let mut out = vec![0i64; n];
        for i in 0..n {
            let mut s = 0i64;
            for j in 0..n {
                let term = self.get(i, j).checked_mul(x[j]).ok_or(Error::TransformOverflow)?;
                s = s.checked_add(term).ok_or(Error::TransformOverflow)?;
            }
            out[i] = s;
        }
        Ok(out)
    }
}

fn int_det(n: usize, entries: &[i64]) -> BigInt {
    let zero = BigInt::from(0);
    let mut a: Vec<BigInt> = entries.iter().map(|&v| BigInt::from(v)).collect();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k] == zero {
            let Some(p) = ((k + 1)..n).find(|&i| a[i * n + k] != zero) else {
                return zero;
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = num / &prev;
            }
            a[i * n + k] = zero.clone();
        }
        prev = a[k * n + k].clone();
    }
    sign * a[(n - 1) * n + (n - 1)].clone()
}

/// Reduction algorithm recorded in a [`ReducedBasis`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionKind {
    #[serde(rename = "size-only")]
    SizeOnly,
    #[serde(rename = "lll")]
    Lll,
    #[serde(rename = "plll+size")]
    PlllSize,
}

/// Output of a reduction: the new factor, the unimodular column transform
/// mapping the input basis onto it, the algorithm used, and the delta
/// parameter (0 when no Lovasz condition was involved).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReducedBasis {
    pub r: UpperTriangularFactor,
    pub z: UnimodularTransform,
    pub quality: ReductionKind,
    pub delta: f64,
}

struct Reducer {
    n: usize,
    r: Vec<f64>,
    z: Vec<i64>,
}

impl Reducer {
    fn new(factor: &UpperTriangularFactor) -> Self {
        let n = factor.dim();
        let mut r = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                r[i * n + j] = factor.get(i, j);
            }
        }
        let z = UnimodularTransform::identity(n).entries;
        Self { n, r, z }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.r[i * self.n + j]
    }

    /// Subtracts `round(r_jk / r_jj)` times column `j` from column `k` when
    /// the quotient exceeds 1/2 in magnitude.
    fn size_reduce_entry(&mut self, j: usize, k: usize) -> Result<()> {
        let q = self.at(j, k) / self.at(j, j);
        if q.abs() <= 0.5 {
            return Ok(());
        }
        let mu = q.round();
        if !(mu.abs() < 9.0e18) {
            return Err(Error::TransformOverflow);
        }
        let mu_i = mu as i64;
        let n = self.n;
        for row in 0..=j {
            self.r[row * n + k] -= mu * self.r[row * n + j];
        }
        for row in 0..n {
            let term = mu_i
                .checked_mul(self.z[row * n + j])
                .ok_or(Error::TransformOverflow)?;
            self.z[row * n + k] = self.z[row * n + k]
                .checked_sub(term)
                .ok_or(Error::TransformOverflow)?;
        }
        Ok(())
    }

    /// Swaps columns `k-1` and `k`, then re-triangularizes with a Givens
    /// rotation on rows `k-1` and `k` and re-signs the diagonal positive.
    fn swap_and_rotate(&mut self, k: usize) {
        let n = self.n;
        for row in 0..n {
            self.r.swap(row * n + (k - 1), row * n + k);
            self.z.swap(row * n + (k - 1), row * n + k);
        }
        let a = self.at(k - 1, k - 1);
        let b = self.at(k, k - 1);
        let rho = a.hypot(b);
        let c = a / rho;
        let s = b / rho;
        for col in (k - 1)..n {
            let x = self.r[(k - 1) * n + col];
            let y = self.r[k * n + col];
            self.r[(k - 1) * n + col] = c * x + s * y;
            self.r[k * n + col] = -s * x + c * y;
        }
        self.r[k * n + (k - 1)] = 0.0;
        if self.at(k - 1, k - 1) < 0.0 {
            for col in (k - 1)..n {
                self.r[(k - 1) * n + col] = -self.r[(k - 1) * n + col];
            }
        }
        if self.at(k, k) < 0.0 {
            for col in k..n {
                self.r[k * n + col] = -self.r[k * n + col];
            }
        }
    }

    fn finish(self, quality: ReductionKind, delta: f64) -> ReducedBasis {
        ReducedBasis {
            r: UpperTriangularFactor::from_upper_data(self.n, self.r),
            z: UnimodularTransform { dim: self.n, entries: self.z },
            quality,
            delta,
        }
    }
}

fn validate_delta(delta: f64) -> Result<()> {
    if delta > 0.25 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidDelta { delta })
    }
}

const MAX_REDUCTION_STEPS: u64 = 100_000_000;

/// Size-reduces every column: `|r_jk| <= r_jj / 2` for all `j < k`.
pub fn size_reduce(r: &UpperTriangularFactor) -> Result<ReducedBasis> {
    let mut red = Reducer::new(r);
    let n = red.n;
    for k in 1..n {
        for j in (0..k).rev() {
            red.size_reduce_entry(j, k)?;
        }
    }
    Ok(red.finish(ReductionKind::SizeOnly, 0.0))
}

/// LLL reduction: size condition everywhere plus the Lovasz condition
/// `delta * r_{k-1,k-1}^2 <= r_{k-1,k}^2 + r_{k,k}^2` at every adjacent pair.
/// An exact tie in the swap test does not swap.
pub fn lll_reduce(r: &UpperTriangularFactor, delta: f64) -> Result<ReducedBasis> {
    validate_delta(delta)?;
    let mut red = Reducer::new(r);
    let n = red.n;
    let mut k = 1usize;
    let mut steps = 0u64;
    while k < n {
        steps += 1;
        if steps > MAX_REDUCTION_STEPS {
            return Err(Error::PreconditionViolated(
                "reduction failed to converge".into(),
            ));
        }
        red.size_reduce_entry(k - 1, k)?;
        let a = red.at(k - 1, k - 1);
        let b01 = red.at(k - 1, k);
        let b = red.at(k, k);
        if delta * a * a > b01 * b01 + b * b {
            red.swap_and_rotate(k);
            k = k.max(2) - 1;
        } else {
            for j in (0..k.saturating_sub(1)).rev() {
                red.size_reduce_entry(j, k)?;
            }
            k += 1;
        }
    }
    Ok(red.finish(ReductionKind::Lll, delta))
}

/// Partial LLL: only the swap-deciding entry `(k-1, k)` is ever reduced
/// inside the loop, and a single full size-reduction pass runs at the end.
/// The swap sequence matches [`lll_reduce`], so the final factor satisfies
/// both LLL conditions.
pub fn plll_reduce(r: &UpperTriangularFactor, delta: f64) -> Result<ReducedBasis> {
    validate_delta(delta)?;
    let mut red = Reducer::new(r);
    let n = red.n;
    let mut k = 1usize;
    let mut steps = 0u64;
    while k < n {
        steps += 1;
        if steps > MAX_REDUCTION_STEPS {
            return Err(Error::PreconditionViolated(
                "reduction failed to converge".into(),
            ));
        }
        let a = red.at(k - 1, k - 1);
        let q = red.at(k - 1, k) / a;
        let rbar = if q.abs() <= 0.5 {
            red.at(k - 1, k)
        } else {
            red.at(k - 1, k) - q.round() * a
        };
        let b = red.at(k, k);
        if delta * a * a > rbar * rbar + b * b {
            red.size_reduce_entry(k - 1, k)?;
            red.swap_and_rotate(k);
            k = k.max(2) - 1;
        } else {
            k += 1;
        }
    }
    for k in 1..n {
        for j in (0..k).rev() {
            red.size_reduce_entry(j, k)?;
        }
    }
    Ok(red.finish(ReductionKind::PlllSize, delta))
}

/// `|r_jk| <= r_jj / 2 * (1 + 1e-12)` for all `j < k`.
pub fn satisfies_size_condition(r: &UpperTriangularFactor) -> bool {
    let n = r.dim();
    for k in 1..n {
        for j in 0..k {
            if r.get(j, k).abs() > 0.5 * r.get(j, j) * (1.0 + 1e-12) {
                return false;
            }
        }
    }
    true
}

/// `delta * r_{k-1,k-1}^2 <= r_{k-1,k}^2 + r_{k,k}^2 (1 + 1e-12)` at every
/// adjacent pair.
pub fn satisfies_lovasz(r: &UpperTriangularFactor, delta: f64) -> bool {
    let n = r.dim();
    for k in 1..n {
        let lhs = delta * r.get(k - 1, k - 1).powi(2);
        let rhs = r.get(k - 1, k).powi(2) + r.get(k, k).powi(2);
        if lhs > rhs * (1.0 + 1e-12) {
            return false;
        }
    }
    true
}
