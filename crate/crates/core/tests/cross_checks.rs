//! Cross-module consistency: reduction output against the exact minima
//! oracle, and transform round-trips through the Gram matrices.

use latmin::linalg::{self, DenseMatrix};
use latmin::minima;
use latmin::reduction;
use latmin::sampling;
use latmin::tolerances::{DEFAULT_DELTA, FACT_TOL};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn reduced_first_column_meets_the_lll_quality_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..40 {
        for n in 2..=5 {
            let r = sampling::random_factor(&mut rng, n).unwrap();
            let red = reduction::lll_reduce(&r, DEFAULT_DELTA).unwrap();
            let lam1 = minima::solve_svp(&r).unwrap().0;
            let bound = 2.0_f64.powf((n as f64 - 1.0) / 2.0) * lam1;
            assert!(
                red.r.col_norm(0) <= bound * (1.0 + 1e-9),
                "first column {} exceeds quality bound {bound}",
                red.r.col_norm(0)
            );
        }
    }
}

#[test]
fn classic_two_dimensional_swap_finds_the_short_vector() {
    // Basis (1, 0), (0.99, 0.1): the shortest vector is the difference,
    // with norm sqrt(0.01^2 + 0.1^2).
    let basis =
        DenseMatrix::from_rows(&[vec![1.0, 0.99], vec![0.0, 0.1]]).unwrap();
    let r = linalg::triangularize(&basis).unwrap();
    let red = reduction::lll_reduce(&r, 0.75).unwrap();
    let expected = (0.01_f64 * 0.01 + 0.1 * 0.1).sqrt();
    assert!((red.r.col_norm(0) - expected).abs() < 1e-12);
    let (lam1, _) = minima::solve_svp(&r).unwrap();
    assert!((lam1 - expected).abs() < 1e-12);
}

#[test]
fn transform_round_trips_through_the_gram_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 2..=6 {
        let r = sampling::random_factor(&mut rng, n).unwrap();
        for red in [
            reduction::lll_reduce(&r, DEFAULT_DELTA).unwrap(),
            reduction::plll_reduce(&r, DEFAULT_DELTA).unwrap(),
        ] {
            assert!(red.z.is_unimodular());
            let zd = red.z.to_dense();
            let gram = zd.transpose().matmul(&r.gram()).unwrap().matmul(&zd).unwrap();
            let reduced_gram = red.r.gram();
            let scale = reduced_gram.max_abs();
            for i in 0..n {
                for j in 0..n {
                    assert!(
                        (gram.get(i, j) - reduced_gram.get(i, j)).abs() <= FACT_TOL * scale,
                        "gram mismatch at ({i}, {j})"
                    );
                }
            }
        }
    }
}

#[test]
fn minima_are_invariant_under_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..25 {
        for n in 2..=4 {
            let r = sampling::random_factor(&mut rng, n).unwrap();
            let red = reduction::plll_reduce(&r, DEFAULT_DELTA).unwrap();
            let original = minima::solve_smp(&r).unwrap().values;
            let reduced = minima::solve_smp(&red.r).unwrap().values;
            for (a, b) in original.iter().zip(&reduced) {
                assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
            }
        }
    }
}

#[test]
fn plll_and_lll_agree_on_diagonal_bases() {
    let entries: Vec<f64> = (1..=8).rev().map(|v| v as f64).collect();
    let r = linalg::triangularize(&DenseMatrix::diag(&entries).unwrap()).unwrap();
    let a = reduction::lll_reduce(&r, DEFAULT_DELTA).unwrap();
    let b = reduction::plll_reduce(&r, DEFAULT_DELTA).unwrap();
    for j in 0..8 {
        assert!((a.r.col_norm(j) - b.r.col_norm(j)).abs() < 1e-12);
    }
    // Both must end sorted ascending: a diagonal lattice reduces to its
    // diagonal sorted by length.
    for j in 1..8 {
        assert!(a.r.col_norm(j) >= a.r.col_norm(j - 1));
    }
}
