//! Depth-first enumeration of all nonzero integer vectors `x` with
//! `||R x|| <= radius` for an upper-triangular factor `R`.
//!
//! Levels run from the last coordinate down to the first, so the partial
//! norm only depends on coordinates already fixed. Each candidate value at a
//! level costs one node against the caller's budget. Only one of `x` and
//! `-x` is produced: the last nonzero coordinate is always positive.

use crate::error::Error;
use crate::linalg::UpperTriangularFactor;
use crate::Result;

#[derive(Debug)]
pub(crate) struct EnumOutcome {
    /// `(||R x||^2, x)` pairs, unsorted.
    pub vectors: Vec<(f64, Vec<i64>)>,
}

struct Searcher<'a> {
    r: &'a UpperTriangularFactor,
    n: usize,
    radius_sq: f64,
    budget: u64,
    nodes: u64,
    x: Vec<i64>,
    /// `partial[i]` = squared norm contributed by levels `i..n`.
    partial: Vec<f64>,
    out: Vec<(f64, Vec<i64>)>,
}

impl<'a> Searcher<'a> {
    fn descend(&mut self, level: usize, suffix_zero: bool) -> Result<()> {
        let i = level - 1;
        let rem = self.radius_sq - self.partial[level];
        if rem < 0.0 {
            return Ok(());
        }
        // Center of the admissible interval for x_i.
        let mut off = 0.0;
        for j in (i + 1)..self.n {
            off += self.r.get(i, j) * self.x[j] as f64;
        }
        let rii = self.r.get(i, i);
        let half_width = rem.sqrt() / rii;
        let lo_f = (-off / rii - half_width).ceil();
        let hi_f = (-off / rii + half_width).floor();
        if !(lo_f >= -4.0e18 && hi_f <= 4.0e18) {
            return Err(Error::RadiusOverflow { budget: self.budget });
        }
        let mut lo = lo_f as i64;
        let hi = hi_f as i64;
        if suffix_zero && lo < 0 {
            lo = 0;
        }
        for v in lo..=hi {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::RadiusOverflow { budget: self.budget });
            }
            let y = rii * v as f64 + off;
            let contrib = y * y;
            if self.partial[level] + contrib > self.radius_sq {
                continue;
            }
            self.x[i] = v;
            self.partial[i] = self.partial[level] + contrib;
            let zero_so_far = suffix_zero && v == 0;
            if i == 0 {
                if !zero_so_far {
                    self.out.push((self.partial[0], self.x.clone()));
                }
            } else {
                self.descend(i, zero_so_far)?;
            }
        }
        self.x[i] = 0;
        Ok(())
    }
}

pub(crate) fn enumerate_ball(
    r: &UpperTriangularFactor,
    radius: f64,
    budget: u64,
) -> Result<EnumOutcome> {
    let n = r.dim();
    let mut s = Searcher {
        r,
        n,
        radius_sq: radius * radius,
        budget,
        nodes: 0,
        x: vec![0; n],
        partial: vec![0.0; n + 1],
        out: Vec::new(),
    };
    s.descend(n, true)?;
    Ok(EnumOutcome { vectors: s.out })
}
