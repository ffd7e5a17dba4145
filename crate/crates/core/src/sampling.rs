//! Seeded random instance generators shared by the property-test sweeps and
//! the `verify` command. Every draw flows through a caller-owned ChaCha8
//! stream, so a whole sweep is reproducible from one 64-bit seed.

use rand::RngExt;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::linalg::{DenseMatrix, SpdMatrix, UpperTriangularFactor};
use crate::Result;

/// Dense matrix with independent entries uniform on [-1, 1).
pub fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.random_range(-1.0..1.0));
        }
    }
    m
}

/// Well-conditioned random SPD matrix `A^T A + 0.1 I`.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Result<SpdMatrix> {
    let a = random_dense(rng, n, n);
    let mut g = a.transpose().matmul(&a)?.symmetrized()?;
    for i in 0..n {
        g.set(i, i, g.get(i, i) + 0.1);
    }
    SpdMatrix::new(g)
}

/// Random PSD matrix; singular (rank `n - 1`) half the time for `n > 1`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> Result<SpdMatrix> {
    let rank = if n > 1 && rng.random_range(0..2) == 0 { n - 1 } else { n };
    let a = random_dense(rng, rank, n);
    let g = a.transpose().matmul(&a)?.symmetrized()?;
    SpdMatrix::new_psd(g)
}

/// Pair `(g1, g2)` with `g1 - g2` SPD: `g1 = g2 + (SPD perturbation)`.
pub fn random_dominating_pair(rng: &mut ChaCha8Rng, n: usize) -> Result<(SpdMatrix, SpdMatrix)> {
    let g2 = random_spd(rng, n)?;
    let bump = random_spd(rng, n)?;
    let g1 = g2.add(&bump)?;
    Ok((g1, g2))
}

/// Random upper-triangular basis factor: diagonal uniform on [0.3, 2),
/// superdiagonal entries uniform on [-2, 2).
pub fn random_factor(rng: &mut ChaCha8Rng, n: usize) -> Result<UpperTriangularFactor> {
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, rng.random_range(0.3..2.0));
        for j in (i + 1)..n {
            m.set(i, j, rng.random_range(-2.0..2.0));
        }
    }
    UpperTriangularFactor::from_dense(&m)
}

/// Random full-column-rank matrix; redraws until the Gram matrix is SPD.
pub fn random_full_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Result<DenseMatrix> {
    for _ in 0..100 {
        let b = random_dense(rng, rows, cols);
        let gram = b.transpose().matmul(&b)?.symmetrized()?;
        if SpdMatrix::new(gram).is_ok() {
            return Ok(b);
        }
    }
    Err(Error::GenerationFailed { attempts: 100 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn spd_draws_are_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        let ga = random_spd(&mut a, 4).unwrap();
        let gb = random_spd(&mut b, 4).unwrap();
        assert_eq!(ga.as_dense().data(), gb.as_dense().data());
    }

    #[test]
    fn dominating_pair_difference_is_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let (g1, g2) = random_dominating_pair(&mut rng, n).unwrap();
            let diff = g1.as_dense().sub(g2.as_dense()).unwrap();
            assert!(crate::linalg::is_spd(&diff, true).unwrap());
        }
    }

    #[test]
    fn psd_draws_include_singular_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut saw_singular = false;
        for _ in 0..20 {
            let g = random_psd(&mut rng, 3).unwrap();
            saw_singular |= g.is_psd_only();
        }
        assert!(saw_singular);
    }

    #[test]
    fn factors_have_positive_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=8 {
            let r = random_factor(&mut rng, n).unwrap();
            assert!(r.diag().iter().all(|&d| d >= 0.3));
        }
    }

    #[test]
    fn full_rank_draws_have_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = random_full_rank(&mut rng, 4, 3).unwrap();
        let gram = b.transpose().matmul(&b).unwrap().symmetrized().unwrap();
        assert!(SpdMatrix::new(gram).is_ok());
    }
}
