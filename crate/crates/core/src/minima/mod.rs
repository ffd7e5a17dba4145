//! Exact successive minima for small lattices, plus the catalog of lower and
//! upper bounds on them and the monotonicity checks built from those bounds.
//!
//! The exact solver enumerates a ball guaranteed to contain all `n` minima
//! (the radius comes from a column-norm bound on the LLL-reduced basis) and
//! extracts witnesses greedily by rational rank. Everything else in this
//! module is a closed-form bound that the enumeration oracle can certify.

mod brute;
mod enumerate;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{self, DenseMatrix, SpdMatrix, UpperTriangularFactor};
use crate::reduction;
use crate::tolerances::{
    strictly_greater, DEFAULT_DELTA, ENUM_NODE_BUDGET, MAX_EXACT_DIM, RADIUS_INFLATION,
};
use crate::Result;

/// Exact successive minima of a lattice together with the integer witnesses.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimaResult {
    pub dim: usize,
    /// Nondecreasing minima values, in the same units as the basis entries.
    pub values: Vec<f64>,
    /// Linearly independent integer vectors with `||R w_i|| = values[i]`.
    pub witnesses: Vec<Vec<i64>>,
    pub exact: bool,
    pub search_radius: f64,
}

/// Which of the two inverse-sum bounds to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Thm2Side {
    /// Bound on the minima of `chol(G1^{-1})`.
    First,
    /// Bound on the minima of `chol(G2^{-1})`.
    Second,
}

/// Formula that produced a bound entry in a [`BoundsReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundTag {
    #[serde(rename = "prop1-lower")]
    Prop1Lower,
    #[serde(rename = "prop1-upper")]
    Prop1Upper,
    #[serde(rename = "remark3")]
    Remark3,
    #[serde(rename = "thm1")]
    Thm1,
    #[serde(rename = "thm2-a")]
    Thm2A,
    #[serde(rename = "thm2-b")]
    Thm2B,
    #[serde(rename = "cor3-generic")]
    Cor3Generic,
    #[serde(rename = "cor3-last")]
    Cor3Last,
}

/// Per-index lower/upper bounds with the formula that produced each entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundsReport {
    pub dim: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower_tag: Vec<BoundTag>,
    pub upper_tag: Vec<BoundTag>,
}

/// Outcome of the strict-monotonicity check on a dominating SPD pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub dim: usize,
    pub lam_g1: Vec<f64>,
    pub lam_g2: Vec<f64>,
    pub lam_inv_g1: Vec<f64>,
    pub lam_inv_g2: Vec<f64>,
    /// Per index: `lam_g1[i] > lam_g2[i]` with strict margin.
    pub direct_strict: Vec<bool>,
    /// Per index: `lam_inv_g1[i] < lam_inv_g2[i]` with strict margin.
    pub inverse_strict: Vec<bool>,
    pub all_hold: bool,
}

/// Outcome of the congruence-form monotonicity check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cor2Report {
    pub dim: usize,
    /// Per index: direct forms ordered strictly, inverse forms reversed.
    pub eq9_holds: Vec<bool>,
    /// Same for the factors built from `G1^{-1}` and `G2^{-1}`.
    pub eq10_holds: Vec<bool>,
    pub all_hold: bool,
}

/// The 2-D fixture on which the "generalized to i > 1" variants of the sum
/// bounds break down: `G1 = diag(3, 1)`, `G2 = diag(1, 8)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Counterexample2d {
    pub lam2_r1: f64,
    pub lam2_r2: f64,
    pub lam2_r3: f64,
    /// `sqrt(lam2_r1^2 + lam2_r2^2)`; exceeds `lam2_r3` strictly.
    pub direct_rhs: f64,
    pub inv1_lhs: f64,
    /// Exceeds `inv1_lhs` strictly.
    pub inv1_rhs: f64,
    pub inv2_lhs: f64,
    /// Equals `inv2_lhs` exactly on this fixture: the second inverse-form
    /// generalization degenerates to equality rather than failing strictly.
    pub inv2_rhs: f64,
}

/// Fraction-free rational-rank tracker used for greedy witness extraction.
struct Echelon {
    /// Reduced rows with strictly increasing pivot columns.
    rows: Vec<Vec<BigInt>>,
}

impl Echelon {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    /// Inserts `v` if it is independent of the rows so far; reports whether
    /// the rank grew.
    fn try_insert(&mut self, v: &[i64]) -> bool {
        let zero = BigInt::from(0);
        let mut row: Vec<BigInt> = v.iter().map(|&a| BigInt::from(a)).collect();
        for existing in &self.rows {
            let p = existing.iter().position(|e| *e != zero).unwrap();
            if row[p] == zero {
                continue;
            }
            let (a, b) = (existing[p].clone(), row[p].clone());
            for k in 0..row.len() {
                row[k] = &a * &row[k] - &b * &existing[k];
            }
        }
        match row.iter().position(|e| *e != zero) {
            None => false,
            Some(p) => {
                let at = self
                    .rows
                    .iter()
                    .position(|r| r.iter().position(|e| *e != zero).unwrap() > p)
                    .unwrap_or(self.rows.len());
                self.rows.insert(at, row);
                true
            }
        }
    }
}

fn canonical_sign(x: &mut [i64]) {
    if let Some(first) = x.iter().find(|&&v| v != 0) {
        if *first < 0 {
            for v in x {
                *v = -*v;
            }
        }
    }
}

/// Exact successive minima of the lattice generated by `r`.
///
/// Enumerates the ball of radius `(1 + 1e-9) * (prop1 upper bound on the
/// LLL-reduced basis)`, which is guaranteed to contain witnesses for all `n`
/// minima, then extracts a nondecreasing independent sequence greedily.
pub fn solve_smp(r: &UpperTriangularFactor) -> Result<MinimaResult> {
    let n = r.dim();
    if n > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge { dim: n, max: MAX_EXACT_DIM });
    }
    let reduced = reduction::lll_reduce(r, DEFAULT_DELTA)?;
    let radius = prop1_bounds(&reduced.r, n)?.1 * (1.0 + RADIUS_INFLATION);
    let found = enumerate::enumerate_ball(&reduced.r, radius, ENUM_NODE_BUDGET)?;

    let mut mapped: Vec<(f64, Vec<i64>)> = Vec::with_capacity(found.vectors.len());
    for (_, xbar) in &found.vectors {
        let mut x = reduced.z.mul_vec(xbar)?;
        canonical_sign(&mut x);
        let norm = r.norm_int_vec(&x)?;
        mapped.push((norm, x));
    }
    mapped.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    let mut ech = Echelon::new();
    let mut values = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for (norm, x) in &mapped {
        if values.len() == n {
            break;
        }
        if ech.try_insert(x) {
            values.push(*norm);
            witnesses.push(x.clone());
        }
    }
    if values.len() < n {
        return Err(Error::PreconditionViolated(
            "search ball missed an independent lattice vector".into(),
        ));
    }
    debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    Ok(MinimaResult { dim: n, values, witnesses, exact: true, search_radius: radius })
}

/// Shortest nonzero lattice vector: the first successive minimum.
pub fn solve_svp(r: &UpperTriangularFactor) -> Result<(f64, Vec<i64>)> {
    let smp = solve_smp(r)?;
    Ok((smp.values[0], smp.witnesses[0].clone()))
}

/// Shortest independent vectors: minimizes the largest column norm over
/// invertible integer matrices. Returns that norm and the matrix columns.
/// The matrix is invertible over the rationals but not necessarily
/// unimodular.
pub fn solve_sivp(r: &UpperTriangularFactor) -> Result<(f64, Vec<Vec<i64>>)> {
    let smp = solve_smp(r)?;
    Ok((smp.values[smp.dim - 1], smp.witnesses))
}

/// Cross-check oracle: exhaustive box search, no reduction and no pruning.
/// Slower and limited to tiny dimensions, but shares no search code with
/// [`solve_smp`].
pub fn brute_force_minima(r: &UpperTriangularFactor) -> Result<(Vec<f64>, Vec<Vec<i64>>)> {
    brute::brute_minima(r)
}

/// Diagonal/column-norm bounds: `min_j r_jj <= lam_i <= max_{j<=i} ||col j||`
/// (columns truncated to their leading rows). `i` is 1-based.
pub fn prop1_bounds(r: &UpperTriangularFactor, i: usize) -> Result<(f64, f64)> {
    let n = r.dim();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let mut upper: f64 = 0.0;
    for j in 0..i {
        upper = upper.max(r.col_norm(j));
    }
    Ok((r.min_diag(), upper))
}

/// Determinant lower bound on the last minimum: `lam_n >= |det R|^{1/n}`.
pub fn remark3_lower(r: &UpperTriangularFactor) -> f64 {
    (r.log_det() / r.dim() as f64).exp()
}

/// Lower bound on `lam_i(chol(G1 + G2))` from minima of the two summands:
/// `max{sqrt(lam_i(R1)^2 + lam_1(R2)^2), sqrt(lam_i(R2)^2 + lam_1(R1)^2)}`.
///
/// The four inputs may be exact minima or any valid lower bounds on them;
/// the formula is monotone, so the output stays a valid lower bound.
pub fn thm1_lower(lam1_g1: f64, lam1_g2: f64, lam_i_g1: f64, lam_i_g2: f64) -> Result<f64> {
    for v in [lam1_g1, lam1_g2, lam_i_g1, lam_i_g2] {
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        if v < 0.0 {
            return Err(Error::NegativeInput);
        }
    }
    let a = (lam_i_g1 * lam_i_g1 + lam1_g2 * lam1_g2).sqrt();
    let b = (lam_i_g2 * lam_i_g2 + lam1_g1 * lam1_g1).sqrt();
    Ok(a.max(b))
}

/// Lower bound on `lam_i(chol(G1^{-1}))` (or `G2`, per `which`) through the
/// Woodbury split `G1^{-1} = (G1+G2)^{-1} + T`. The minima of the two split
/// terms are computed exactly, so this is only available at oracle scale.
pub fn thm2_lower(g1: &SpdMatrix, g2: &SpdMatrix, i: usize, which: Thm2Side) -> Result<f64> {
    let n = g1.dim();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let (s, t) = match which {
        Thm2Side::First => linalg::woodbury_decompose(g1, g2)?,
        Thm2Side::Second => linalg::woodbury_decompose(g2, g1)?,
    };
    let shared = solve_smp(&linalg::cholesky(&s)?)?;
    let own = solve_smp(&linalg::cholesky(&t)?)?;
    let a = (shared.values[i - 1].powi(2) + own.values[0].powi(2)).sqrt();
    let b = (own.values[i - 1].powi(2) + shared.values[0].powi(2)).sqrt();
    Ok(a.max(b))
}

/// Closed-form weakening of [`thm1_lower`] that only needs the factor
/// diagonals (or determinants at `i = n`) plus the two first minima.
pub fn cor3_lower(g1: &SpdMatrix, g2: &SpdMatrix, i: usize) -> Result<f64> {
    let n = g1.dim();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let r1 = linalg::cholesky(g1)?;
    let r2 = linalg::cholesky(g2)?;
    let lam1_r1 = solve_svp(&r1)?.0;
    let lam1_r2 = solve_svp(&r2)?.0;
    let (term1, term2) = if i < n {
        (r1.min_diag().powi(2), r2.min_diag().powi(2))
    } else {
        (
            (2.0 * r1.log_det() / n as f64).exp(),
            (2.0 * r2.log_det() / n as f64).exp(),
        )
    };
    let a = (term1 + lam1_r2 * lam1_r2).sqrt();
    let b = (term2 + lam1_r1 * lam1_r1).sqrt();
    Ok(a.max(b))
}

fn minima_values(g: &SpdMatrix) -> Result<Vec<f64>> {
    Ok(solve_smp(&linalg::cholesky(g)?)?.values)
}

/// Checks the strict ordering of minima for a dominating pair: with
/// `G1 - G2` SPD, every `lam_i(chol(G1)) > lam_i(chol(G2))` and every
/// `lam_i(chol(G1^{-1})) < lam_i(chol(G2^{-1}))`.
pub fn check_monotonicity(g1: &SpdMatrix, g2: &SpdMatrix) -> Result<MonotonicityReport> {
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch { context: "monotonicity operands".into() });
    }
    let diff = g1.as_dense().sub(g2.as_dense())?;
    if !linalg::is_spd(&diff, true)? {
        return Err(Error::PreconditionViolated(
            "g1 - g2 must be symmetric positive definite".into(),
        ));
    }
    let lam_g1 = minima_values(g1)?;
    let lam_g2 = minima_values(g2)?;
    let lam_inv_g1 = minima_values(&linalg::spd_inverse(g1)?)?;
    let lam_inv_g2 = minima_values(&linalg::spd_inverse(g2)?)?;
    let n = g1.dim();
    let direct_strict: Vec<bool> =
        (0..n).map(|i| strictly_greater(lam_g1[i], lam_g2[i])).collect();
    let inverse_strict: Vec<bool> =
        (0..n).map(|i| strictly_greater(lam_inv_g2[i], lam_inv_g1[i])).collect();
    let all_hold = direct_strict.iter().chain(&inverse_strict).all(|&b| b);
    Ok(MonotonicityReport {
        dim: n,
        lam_g1,
        lam_g2,
        lam_inv_g1,
        lam_inv_g2,
        direct_strict,
        inverse_strict,
        all_hold,
    })
}

/// Checks that the strict ordering survives the congruence `G + B^T G_k B`
/// (and the same with `G_k^{-1}`), for PSD `G` and full-column-rank `B`.
pub fn check_cor2(
    g: &SpdMatrix,
    b: &DenseMatrix,
    g1: &SpdMatrix,
    g2: &SpdMatrix,
) -> Result<Cor2Report> {
    let n = g1.dim();
    let m = g.dim();
    if g2.dim() != n || b.rows() != n || b.cols() != m {
        return Err(Error::DimensionMismatch { context: "congruence operands".into() });
    }
    let gram_b = b.transpose().matmul(b)?.symmetrized()?;
    if SpdMatrix::new(gram_b).is_err() {
        return Err(Error::RankDeficient);
    }
    let diff = g1.as_dense().sub(g2.as_dense())?;
    if !linalg::is_spd(&diff, true)? {
        return Err(Error::PreconditionViolated(
            "g1 - g2 must be symmetric positive definite".into(),
        ));
    }

    let congruence = |core: &SpdMatrix| -> Result<(Vec<f64>, Vec<f64>)> {
        let inner = b.transpose().matmul(core.as_dense())?.matmul(b)?;
        let formed = SpdMatrix::new(g.as_dense().add(&inner)?.symmetrized()?)?;
        let direct = minima_values(&formed)?;
        let inverse = minima_values(&linalg::spd_inverse(&formed)?)?;
        Ok((direct, inverse))
    };

    let (d1, v1) = congruence(g1)?;
    let (d2, v2) = congruence(g2)?;
    let (d3, v3) = congruence(&linalg::spd_inverse(g1)?)?;
    let (d4, v4) = congruence(&linalg::spd_inverse(g2)?)?;

    let eq9_holds: Vec<bool> = (0..m)
        .map(|i| strictly_greater(d1[i], d2[i]) && strictly_greater(v2[i], v1[i]))
        .collect();
    let eq10_holds: Vec<bool> = (0..m)
        .map(|i| strictly_greater(d4[i], d3[i]) && strictly_greater(v3[i], v4[i]))
        .collect();
    let all_hold = eq9_holds.iter().chain(&eq10_holds).all(|&b| b);
    Ok(Cor2Report { dim: m, eq9_holds, eq10_holds, all_hold })
}

/// Bounds for a single factor from the diagonal/column-norm inequalities,
/// optionally evaluated on a lattice-reduced basis (same lattice, so the
/// bounds still apply — and the upper bound usually tightens).
pub fn bounds_report(r: &UpperTriangularFactor, use_reduction: bool) -> Result<BoundsReport> {
    let reduced;
    let base = if use_reduction {
        reduced = reduction::plll_reduce(r, DEFAULT_DELTA)?;
        &reduced.r
    } else {
        r
    };
    let n = base.dim();
    let rm3 = remark3_lower(base);
    let mut report = BoundsReport {
        dim: n,
        lower: Vec::with_capacity(n),
        upper: Vec::with_capacity(n),
        lower_tag: Vec::with_capacity(n),
        upper_tag: Vec::with_capacity(n),
    };
    for i in 1..=n {
        let (lo, up) = prop1_bounds(base, i)?;
        let (lo, lo_tag) =
            if i == n && rm3 > lo { (rm3, BoundTag::Remark3) } else { (lo, BoundTag::Prop1Lower) };
        report.lower.push(lo);
        report.lower_tag.push(lo_tag);
        report.upper.push(up);
        report.upper_tag.push(BoundTag::Prop1Upper);
    }
    Ok(report)
}

/// Bounds for the lattice of `chol(G1 + G2)`. With `cheap = false` the lower
/// bounds feed exact minima of the summands into the sum formula; with
/// `cheap = true` they use only factor diagonals and determinants.
pub fn bounds_report_sum(g1: &SpdMatrix, g2: &SpdMatrix, cheap: bool) -> Result<BoundsReport> {
    let n = g1.dim();
    if g2.dim() != n {
        return Err(Error::DimensionMismatch { context: "sum-bounds operands".into() });
    }
    let r3 = linalg::cholesky(&g1.add(g2)?)?;
    let mut report = BoundsReport {
        dim: n,
        lower: Vec::with_capacity(n),
        upper: Vec::with_capacity(n),
        lower_tag: Vec::with_capacity(n),
        upper_tag: Vec::with_capacity(n),
    };
    let exact = if cheap {
        None
    } else {
        Some((minima_values(g1)?, minima_values(g2)?))
    };
    for i in 1..=n {
        let (lo, tag) = match &exact {
            Some((m1, m2)) => (
                thm1_lower(m1[0], m2[0], m1[i - 1], m2[i - 1])?,
                BoundTag::Thm1,
            ),
            None => (
                cor3_lower(g1, g2, i)?,
                if i < n { BoundTag::Cor3Generic } else { BoundTag::Cor3Last },
            ),
        };
        let up = prop1_bounds(&r3, i)?.1;
        report.lower.push(lo);
        report.lower_tag.push(tag);
        report.upper.push(up);
        report.upper_tag.push(BoundTag::Prop1Upper);
    }
    Ok(report)
}

/// Bounds for the lattice of `chol(G1^{-1})` (or `G2^{-1}`) via the
/// Woodbury-split lower bound and the column-norm upper bound.
pub fn bounds_report_inverse(
    g1: &SpdMatrix,
    g2: &SpdMatrix,
    which: Thm2Side,
) -> Result<BoundsReport> {
    let n = g1.dim();
    if g2.dim() != n {
        return Err(Error::DimensionMismatch { context: "inverse-bounds operands".into() });
    }
    let target = match which {
        Thm2Side::First => g1,
        Thm2Side::Second => g2,
    };
    let rhat = linalg::cholesky(&linalg::spd_inverse(target)?)?;
    let tag = match which {
        Thm2Side::First => BoundTag::Thm2A,
        Thm2Side::Second => BoundTag::Thm2B,
    };
    let mut report = BoundsReport {
        dim: n,
        lower: Vec::with_capacity(n),
        upper: Vec::with_capacity(n),
        lower_tag: Vec::with_capacity(n),
        upper_tag: Vec::with_capacity(n),
    };
    for i in 1..=n {
        report.lower.push(thm2_lower(g1, g2, i, which)?);
        report.lower_tag.push(tag);
        report.upper.push(prop1_bounds(&rhat, i)?.1);
        report.upper_tag.push(BoundTag::Prop1Upper);
    }
    Ok(report)
}

/// Evaluates the fixture where the naive `i > 1` generalizations of the sum
/// bounds break down, returning every quantity needed to check them.
pub fn counterexample_2d() -> Result<Counterexample2d> {
    let g1 = SpdMatrix::new(DenseMatrix::diag(&[3.0, 1.0])?)?;
    let g2 = SpdMatrix::new(DenseMatrix::diag(&[1.0, 8.0])?)?;

    let lam_r1 = minima_values(&g1)?;
    let lam_r2 = minima_values(&g2)?;
    let lam_r3 = minima_values(&g1.add(&g2)?)?;

    let lam_inv1 = minima_values(&linalg::spd_inverse(&g1)?)?;
    let lam_inv2 = minima_values(&linalg::spd_inverse(&g2)?)?;
    let (s, t1) = linalg::woodbury_decompose(&g1, &g2)?;
    let (_, t2) = linalg::woodbury_decompose(&g2, &g1)?;
    let lam_shared = minima_values(&s)?;
    let lam_t1 = minima_values(&t1)?;
    let lam_t2 = minima_values(&t2)?;

    Ok(Counterexample2d {
        lam2_r1: lam_r1[1],
        lam2_r2: lam_r2[1],
        lam2_r3: lam_r3[1],
        direct_rhs: (lam_r1[1].powi(2) + lam_r2[1].powi(2)).sqrt(),
        inv1_lhs: lam_inv1[1],
        inv1_rhs: (lam_shared[1].powi(2) + lam_t1[1].powi(2)).sqrt(),
        inv2_lhs: lam_inv2[1],
        inv2_rhs: (lam_shared[1].powi(2) + lam_t2[1].powi(2)).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::tolerances::rel_close;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn factor(rows: &[Vec<f64>]) -> UpperTriangularFactor {
        UpperTriangularFactor::from_dense(&DenseMatrix::from_rows(rows).unwrap()).unwrap()
    }

    fn spd_diag(entries: &[f64]) -> SpdMatrix {
        SpdMatrix::new(DenseMatrix::diag(entries).unwrap()).unwrap()
    }

    #[test]
    fn identity_minima() {
        let r = factor(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let out = solve_smp(&r).unwrap();
        assert_eq!(out.values, vec![1.0, 1.0, 1.0]);
        assert_eq!(out.witnesses, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert!(out.exact);
    }

    #[test]
    fn hexagonal_minima() {
        let r = factor(&[vec![1.0, 0.5], vec![0.0, 3.0_f64.sqrt() / 2.0]]);
        let out = solve_smp(&r).unwrap();
        assert!(rel_close(out.values[0], 1.0, 1e-12));
        assert!(rel_close(out.values[1], 1.0, 1e-12));
    }

    #[test]
    fn diagonal_minima_two_three() {
        let out = solve_smp(&factor(&[vec![2.0, 0.0], vec![0.0, 3.0]])).unwrap();
        assert_eq!(out.values, vec![2.0, 3.0]);
        assert_eq!(out.witnesses, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn diagonal_family_minima_are_sorted_roots() {
        // diag(sqrt(alpha)) with alpha nondecreasing: lam_i = sqrt(alpha_i).
        let alpha = [1.0, 4.0, 9.0, 16.0];
        let roots: Vec<f64> = alpha.iter().map(|a: &f64| a.sqrt()).collect();
        let out = solve_smp(&factor(&[
            vec![roots[0], 0.0, 0.0, 0.0],
            vec![0.0, roots[1], 0.0, 0.0],
            vec![0.0, 0.0, roots[2], 0.0],
            vec![0.0, 0.0, 0.0, roots[3]],
        ]))
        .unwrap();
        assert_eq!(out.values, roots);
    }

    #[test]
    fn svp_skewed_diagonal() {
        let (val, wit) = solve_svp(&factor(&[vec![3.0_f64.sqrt(), 0.0], vec![0.0, 1.0]])).unwrap();
        assert_eq!(val, 1.0);
        assert_eq!(wit, vec![0, 1]);
    }

    #[test]
    fn svp_matches_smp_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let r = sampling::random_factor(&mut rng, 5).unwrap();
            let (val, _) = solve_svp(&r).unwrap();
            let smp = solve_smp(&r).unwrap();
            assert_eq!(val, smp.values[0]);
        }
    }

    #[test]
    fn sivp_identity_and_diagonal() {
        let r = factor(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ]);
        let (objective, columns) = solve_sivp(&r).unwrap();
        assert_eq!(objective, 3.0);
        assert_eq!(columns.len(), 3);
        let mut ech = Echelon::new();
        for c in &columns {
            assert!(ech.try_insert(c));
        }
    }

    #[test]
    fn sivp_objective_matches_last_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let r = sampling::random_factor(&mut rng, 4).unwrap();
        let (objective, _) = solve_sivp(&r).unwrap();
        assert_eq!(objective, solve_smp(&r).unwrap().values[3]);
    }

    #[test]
    fn dimension_cap_enforced() {
        let eye = UpperTriangularFactor::from_dense(&DenseMatrix::identity(11)).unwrap();
        match solve_smp(&eye) {
            Err(Error::DimensionTooLarge { dim, max }) => {
                assert_eq!(dim, 11);
                assert_eq!(max, 10);
            }
            other => panic!("expected DimensionTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn prop1_column_norms() {
        let r = factor(&[vec![2.0, 1.0], vec![0.0, 2.0]]);
        assert_eq!(prop1_bounds(&r, 1).unwrap(), (2.0, 2.0));
        let (lo, up) = prop1_bounds(&r, 2).unwrap();
        assert_eq!(lo, 2.0);
        assert!(rel_close(up, 5.0_f64.sqrt(), 1e-15));
    }

    #[test]
    fn prop1_rejects_bad_index() {
        let r = factor(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(matches!(prop1_bounds(&r, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(prop1_bounds(&r, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn prop1_tight_on_scaled_identity() {
        let r = UpperTriangularFactor::from_dense(
            &DenseMatrix::identity(4).scale(2.0).unwrap(),
        )
        .unwrap();
        let smp = solve_smp(&r).unwrap();
        for i in 1..=4 {
            let (lo, up) = prop1_bounds(&r, i).unwrap();
            assert_eq!(lo, 2.0);
            assert_eq!(up, 2.0);
            assert_eq!(smp.values[i - 1], 2.0);
        }
    }

    #[test]
    fn remark3_values() {
        let r = factor(&[vec![2.0, 0.0], vec![0.0, 3.0]]);
        assert!(rel_close(remark3_lower(&r), 6.0_f64.sqrt(), 1e-12));
        let eye = UpperTriangularFactor::from_dense(
            &DenseMatrix::identity(3).scale(1.5).unwrap(),
        )
        .unwrap();
        assert!(rel_close(remark3_lower(&eye), 1.5, 1e-12));
    }

    #[test]
    fn thm1_diagonal_family_equality() {
        // G1 = diag(alpha), G2 = beta I: lam_i of the sum is sqrt(alpha_i +
        // beta), met with equality.
        let alpha = [1.0, 4.0, 9.0];
        let beta = 2.0;
        let g1 = spd_diag(&alpha);
        let g2 = spd_diag(&[beta, beta, beta]);
        let m1 = minima_values(&g1).unwrap();
        let m2 = minima_values(&g2).unwrap();
        let m3 = minima_values(&g1.add(&g2).unwrap()).unwrap();
        for i in 1..=3 {
            let bound = thm1_lower(m1[0], m2[0], m1[i - 1], m2[i - 1]).unwrap();
            assert!(rel_close(bound, (alpha[i - 1] + beta).sqrt(), 1e-12));
            assert!(rel_close(bound, m3[i - 1], 1e-12));
        }
    }

    #[test]
    fn thm1_counterexample_inputs() {
        let bound = thm1_lower(1.0, 1.0, 3.0_f64.sqrt(), 8.0_f64.sqrt()).unwrap();
        assert!(rel_close(bound, 3.0, 1e-15));
    }

    #[test]
    fn thm1_rejects_bad_inputs() {
        assert!(matches!(thm1_lower(1.0, -0.5, 1.0, 1.0), Err(Error::NegativeInput)));
        assert!(matches!(thm1_lower(f64::NAN, 1.0, 1.0, 1.0), Err(Error::NonFinite)));
    }

    #[test]
    fn thm2_identity_pair_is_tight() {
        let eye = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        for i in 1..=2 {
            for which in [Thm2Side::First, Thm2Side::Second] {
                let bound = thm2_lower(&eye, &eye, i, which).unwrap();
                assert!(rel_close(bound, 1.0, 1e-12));
            }
        }
    }

    #[test]
    fn thm2_complementary_diagonal_equality() {
        // G1 = diag(alpha), G2 = beta I - G1: both bounds are met exactly.
        let g1 = spd_diag(&[1.0, 2.0, 3.0]);
        let g2 = spd_diag(&[3.0, 2.0, 1.0]);
        let expect = [1.0 / 3.0_f64.sqrt(), 1.0 / 2.0_f64.sqrt(), 1.0];
        for i in 1..=3 {
            let first = thm2_lower(&g1, &g2, i, Thm2Side::First).unwrap();
            let second = thm2_lower(&g1, &g2, i, Thm2Side::Second).unwrap();
            assert!(rel_close(first, expect[i - 1], 1e-9));
            assert!(rel_close(second, expect[i - 1], 1e-9));
        }
    }

    #[test]
    fn thm2_never_exceeds_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..8 {
            let g1 = sampling::random_spd(&mut rng, 3).unwrap();
            let g2 = sampling::random_spd(&mut rng, 3).unwrap();
            let lam_inv1 = minima_values(&linalg::spd_inverse(&g1).unwrap()).unwrap();
            let lam_inv2 = minima_values(&linalg::spd_inverse(&g2).unwrap()).unwrap();
            for i in 1..=3 {
                let first = thm2_lower(&g1, &g2, i, Thm2Side::First).unwrap();
                let second = thm2_lower(&g1, &g2, i, Thm2Side::Second).unwrap();
                assert!(first <= lam_inv1[i - 1] * (1.0 + 1e-9));
                assert!(second <= lam_inv2[i - 1] * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn cor3_hand_computed_values() {
        let g1 = spd_diag(&[4.0, 9.0]);
        let g2 = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        assert!(rel_close(cor3_lower(&g1, &g2, 1).unwrap(), 5.0_f64.sqrt(), 1e-12));
        assert!(rel_close(cor3_lower(&g1, &g2, 2).unwrap(), 7.0_f64.sqrt(), 1e-12));
    }

    #[test]
    fn cor3_weakens_thm1_but_stays_below_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..6 {
            let (g1, g2) = sampling::random_dominating_pair(&mut rng, 3).unwrap();
            let m1 = minima_values(&g1).unwrap();
            let m2 = minima_values(&g2).unwrap();
            let m3 = minima_values(&g1.add(&g2).unwrap()).unwrap();
            for i in 1..=3 {
                let cheap = cor3_lower(&g1, &g2, i).unwrap();
                let sharp = thm1_lower(m1[0], m2[0], m1[i - 1], m2[i - 1]).unwrap();
                assert!(cheap <= sharp * (1.0 + 1e-12));
                assert!(sharp <= m3[i - 1] * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn monotonicity_dominating_identity() {
        let g1 = spd_diag(&[2.0, 2.0]);
        let g2 = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        let report = check_monotonicity(&g1, &g2).unwrap();
        assert!(report.all_hold);
        assert!(rel_close(report.lam_g1[0], 2.0_f64.sqrt(), 1e-12));
        assert!(rel_close(report.lam_inv_g1[0], 1.0 / 2.0_f64.sqrt(), 1e-12));
    }

    #[test]
    fn monotonicity_requires_dominating_pair() {
        let g1 = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        let g2 = spd_diag(&[2.0, 2.0]);
        assert!(matches!(
            check_monotonicity(&g1, &g2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn cor2_identity_congruence() {
        let g = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        let b = DenseMatrix::identity(2);
        let g1 = spd_diag(&[2.0, 2.0]);
        let g2 = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        let report = check_cor2(&g, &b, &g1, &g2).unwrap();
        assert!(report.all_hold);
        assert_eq!(report.eq9_holds, vec![true, true]);
        assert_eq!(report.eq10_holds, vec![true, true]);
    }

    #[test]
    fn cor2_with_zero_g_matches_plain_monotonicity() {
        let g = SpdMatrix::new_psd(DenseMatrix::zeros(2, 2)).unwrap();
        let b = DenseMatrix::identity(2);
        let g1 = spd_diag(&[4.0, 2.0]);
        let g2 = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        let report = check_cor2(&g, &b, &g1, &g2).unwrap();
        assert!(report.all_hold);
        assert!(check_monotonicity(&g1, &g2).unwrap().all_hold);
    }

    #[test]
    fn cor2_rejects_rank_deficient_b() {
        let g = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        let b = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let g1 = spd_diag(&[2.0, 2.0]);
        let g2 = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        assert!(matches!(check_cor2(&g, &b, &g1, &g2), Err(Error::RankDeficient)));
    }

    #[test]
    fn psd_summand_never_shrinks_minima() {
        // Degenerate form of the sum bound: adding a singular PSD matrix.
        let g1 = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        let g2 = SpdMatrix::new_psd(DenseMatrix::diag(&[1.0, 0.0]).unwrap()).unwrap();
        let sum = SpdMatrix::new(g1.as_dense().add(g2.as_dense()).unwrap()).unwrap();
        let lam_sum = minima_values(&sum).unwrap();
        let lam_g1 = minima_values(&g1).unwrap();
        for i in 0..2 {
            assert!(lam_sum[i] >= lam_g1[i] - 1e-12);
        }
    }

    #[test]
    fn agrees_with_brute_force_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for trial in 0..30 {
            let n = 2 + trial % 3;
            let r = sampling::random_factor(&mut rng, n).unwrap();
            let smp = solve_smp(&r).unwrap();
            let (brute_values, _) = brute_force_minima(&r).unwrap();
            for (a, b) in smp.values.iter().zip(&brute_values) {
                assert!(rel_close(*a, *b, 1e-12), "smp {a} vs brute {b}");
            }
        }
    }

    #[test]
    fn chain_and_product_bound_on_random_bases() {
        let mut rng = ChaCha8Rng::seed_from_u64(88);
        for trial in 0..12 {
            let n = 2 + trial % 4;
            let r = sampling::random_factor(&mut rng, n).unwrap();
            let smp = solve_smp(&r).unwrap();
            assert!(smp.values.windows(2).all(|w| w[0] <= w[1]));
            let log_prod: f64 = smp.values.iter().map(|v| v.ln()).sum();
            assert!(log_prod >= r.log_det() - 1e-9);
            for i in 1..=n {
                let (lo, up) = prop1_bounds(&r, i).unwrap();
                assert!(lo <= smp.values[i - 1] * (1.0 + 1e-9));
                assert!(smp.values[i - 1] <= up * (1.0 + 1e-9));
            }
            assert!(remark3_lower(&r) <= smp.values[n - 1] * (1.0 + 1e-9));
        }
    }

    #[test]
    fn results_are_bitwise_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let r = sampling::random_factor(&mut rng, 4).unwrap();
        let a = solve_smp(&r).unwrap();
        let b = solve_smp(&r).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.witnesses, b.witnesses);
        assert_eq!(a.search_radius.to_bits(), b.search_radius.to_bits());
    }

    #[test]
    fn counterexample_quantities() {
        let fx = counterexample_2d().unwrap();
        assert!(rel_close(fx.lam2_r1, 3.0_f64.sqrt(), 1e-9));
        assert!(rel_close(fx.lam2_r2, 8.0_f64.sqrt(), 1e-9));
        assert!(rel_close(fx.lam2_r3, 3.0, 1e-9));
        assert!(rel_close(fx.direct_rhs, 11.0_f64.sqrt(), 1e-9));
        assert!(strictly_greater(fx.direct_rhs, fx.lam2_r3));
        assert!(rel_close(fx.inv1_rhs, (41.0_f64 / 36.0).sqrt(), 1e-9));
        assert!(strictly_greater(fx.inv1_rhs, fx.inv1_lhs));
        // The second inverse form degenerates to equality on this fixture.
        assert!((fx.inv2_rhs - fx.inv2_lhs).abs() <= 1e-12);
    }

    #[test]
    fn bounds_report_tags_single_factor() {
        let r = factor(&[vec![2.0, 0.0], vec![0.0, 3.0]]);
        let report = bounds_report(&r, false).unwrap();
        assert_eq!(report.lower_tag, vec![BoundTag::Prop1Lower, BoundTag::Remark3]);
        assert_eq!(report.upper_tag, vec![BoundTag::Prop1Upper, BoundTag::Prop1Upper]);
        assert_eq!(report.lower[0], 2.0);
        assert!(rel_close(report.lower[1], 6.0_f64.sqrt(), 1e-12));
        assert_eq!(report.upper, vec![2.0, 3.0]);
    }

    #[test]
    fn bounds_report_scaled_identity_prefers_diagonal() {
        let r = UpperTriangularFactor::from_dense(
            &DenseMatrix::identity(3).scale(2.0).unwrap(),
        )
        .unwrap();
        let report = bounds_report(&r, true).unwrap();
        assert!(report.lower_tag.iter().all(|t| *t == BoundTag::Prop1Lower));
        assert!(report.lower.iter().all(|&v| v == 2.0));
        assert!(report.upper.iter().all(|&v| v == 2.0));
    }

    #[test]
    fn bounds_report_sum_tag_selection() {
        let g1 = spd_diag(&[3.0, 1.0]);
        let g2 = spd_diag(&[1.0, 8.0]);
        let sharp = bounds_report_sum(&g1, &g2, false).unwrap();
        assert_eq!(sharp.lower_tag, vec![BoundTag::Thm1, BoundTag::Thm1]);
        assert!(rel_close(sharp.lower[1], 3.0, 1e-9));
        let cheap = bounds_report_sum(&g1, &g2, true).unwrap();
        assert_eq!(cheap.lower_tag, vec![BoundTag::Cor3Generic, BoundTag::Cor3Last]);
        for i in 0..2 {
            assert!(cheap.lower[i] <= sharp.lower[i] * (1.0 + 1e-12));
            assert!(sharp.lower[i] <= sharp.upper[i] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn bounds_report_inverse_sides() {
        let eye = SpdMatrix::new(DenseMatrix::identity(2)).unwrap();
        let first = bounds_report_inverse(&eye, &eye, Thm2Side::First).unwrap();
        assert!(first.lower_tag.iter().all(|t| *t == BoundTag::Thm2A));
        let second = bounds_report_inverse(&eye, &eye, Thm2Side::Second).unwrap();
        assert!(second.lower_tag.iter().all(|t| *t == BoundTag::Thm2B));
        for report in [first, second] {
            for i in 0..2 {
                assert!(rel_close(report.lower[i], 1.0, 1e-12));
                assert!(report.lower[i] <= report.upper[i] * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn minima_result_round_trips_through_json() {
        let out = solve_smp(&factor(&[vec![2.0, 1.0], vec![0.0, 2.0]])).unwrap();
        let text = serde_json::to_string(&out).unwrap();
        let back: MinimaResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back.values, out.values);
        assert_eq!(back.witnesses, out.witnesses);
        assert_eq!(back.exact, out.exact);
    }
}
