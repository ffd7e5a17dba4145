//! Naive box-search oracle used to cross-check the sphere enumeration.
//!
//! Deliberately independent of the DFS path: no reduction, no pruning. Every
//! integer vector in an axis-aligned box large enough to contain the search
//! ball is tested, and linear independence is tracked with fraction-free
//! `i128` elimination instead of the `BigInt` echelon the main path uses.

use crate::error::Error;
use crate::linalg::UpperTriangularFactor;
use crate::Result;

const MAX_BOX_POINTS: u128 = 100_000_000;

fn norm_rx(r: &UpperTriangularFactor, x: &[i64]) -> f64 {
    let n = r.dim();
    let mut s = 0.0;
    for i in 0..n {
        let mut acc = 0.0;
        for j in i..n {
            acc += r.get(i, j) * x[j] as f64;
        }
        s += acc * acc;
    }
    s.sqrt()
}

struct IntEchelon {
    /// Reduced rows with strictly increasing pivot columns.
    rows: Vec<Vec<i128>>,
}

impl IntEchelon {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    fn try_insert(&mut self, v: &[i64]) -> Result<bool> {
        let overflow = || Error::PreconditionViolated("overflow in rank elimination".into());
        let mut row: Vec<i128> = v.iter().map(|&a| a as i128).collect();
        for existing in &self.rows {
            let p = existing.iter().position(|&e| e != 0).unwrap();
            if row[p] == 0 {
                continue;
            }
            let (a, b) = (existing[p], row[p]);
            for k in 0..row.len() {
                let t1 = a.checked_mul(row[k]).ok_or_else(overflow)?;
                let t2 = b.checked_mul(existing[k]).ok_or_else(overflow)?;
                row[k] = t1.checked_sub(t2).ok_or_else(overflow)?;
            }
        }
        match row.iter().position(|&e| e != 0) {
            None => Ok(false),
            Some(p) => {
                let at = self
                    .rows
                    .iter()
                    .position(|r| r.iter().position(|&e| e != 0).unwrap() > p)
                    .unwrap_or(self.rows.len());
                self.rows.insert(at, row);
                Ok(true)
            }
        }
    }
}

/// Exact successive minima by exhaustive search over an `l_inf` box.
pub(crate) fn brute_minima(r: &UpperTriangularFactor) -> Result<(Vec<f64>, Vec<Vec<i64>>)> {
    let n = r.dim();
    let mut radius: f64 = 0.0;
    for j in 0..n {
        radius = radius.max(r.col_norm(j));
    }
    radius *= 1.0 + 1e-9;

    // |x_i| = |e_i^T R^{-1} (R x)| <= ||row i of R^{-1}|| * radius.
    let mut bounds = vec![0i64; n];
    let mut total: u128 = 1;
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let row = r.solve_lower_t(&e)?;
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        bounds[i] = (radius * norm + 1e-9).floor() as i64;
        total = total.saturating_mul(2 * bounds[i] as u128 + 1);
    }
    if total > MAX_BOX_POINTS {
        return Err(Error::PreconditionViolated("brute-force box too large".into()));
    }

    let mut candidates: Vec<(f64, Vec<i64>)> = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    'outer: loop {
        if x.iter().any(|&v| v != 0) {
            let norm = norm_rx(r, &x);
            if norm <= radius {
                let mut c = x.clone();
                if *c.iter().find(|&&v| v != 0).unwrap() < 0 {
                    for v in &mut c {
                        *v = -*v;
                    }
                }
                candidates.push((norm, c));
            }
        }
        for i in 0..n {
            if x[i] < bounds[i] {
                x[i] += 1;
                continue 'outer;
            }
            x[i] = -bounds[i];
        }
        break;
    }

    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    candidates.dedup_by(|a, b| a.1 == b.1);

    let mut ech = IntEchelon::new();
    let mut values = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for (norm, v) in &candidates {
        if values.len() == n {
            break;
        }
        if ech.try_insert(v)? {
            values.push(*norm);
            witnesses.push(v.clone());
        }
    }
    if values.len() < n {
        return Err(Error::PreconditionViolated(
            "brute-force box missed an independent vector".into(),
        ));
    }
    Ok((values, witnesses))
}
