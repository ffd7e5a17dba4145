//! Central numeric tolerances and limits.
//!
//! Every comparison tolerance used by the crate lives here so that tests and
//! library code agree on one set of values.

/// Relative symmetry tolerance: `|a_ij - a_ji| <= SYM_TOL * max_abs(A)`.
pub const SYM_TOL: f64 = 1e-10;

/// Cholesky pivot tolerance factor; a pivot at or below
/// `PIVOT_TOL_FACTOR * max_diag(G)` rejects the matrix.
pub const PIVOT_TOL_FACTOR: f64 = 1e-12;

/// Relative tolerance for factorization / reconstruction residuals.
pub const FACT_TOL: f64 = 1e-9;

/// Relative margin required when asserting a strict inequality.
pub const STRICT_TOL: f64 = 1e-9;

/// Default LLL / PLLL parameter.
pub const DEFAULT_DELTA: f64 = 0.99;

/// Largest dimension for which exact enumeration is attempted.
pub const MAX_EXACT_DIM: usize = 10;

/// Node budget for one exact-enumeration call.
pub const ENUM_NODE_BUDGET: u64 = 10_000_000;

/// Relative inflation applied to the enumeration search radius so that
/// vectors exactly at the radius survive floating-point rounding.
pub const RADIUS_INFLATION: f64 = 1e-9;

/// Relative width at which the bisection over d terminates.
pub const BISECT_TOL: f64 = 1e-6;

/// Hard cap on bisection iterations.
pub const MAX_BISECT_ITERS: u32 = 200;

/// Geometric-doubling fallback for the upper bisection endpoint stops at
/// `2^DOUBLING_CAP_EXP * d_min`.
pub const DOUBLING_CAP_EXP: u32 = 60;

/// `a > b` with relative margin greater than [`STRICT_TOL`].
pub fn strictly_greater(a: f64, b: f64) -> bool {
    a - b > STRICT_TOL * a.abs().max(b.abs())
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
