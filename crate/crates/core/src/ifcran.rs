//! Integer-forcing rate maximization for C-RAN uplinks: build the objective
//! factor `F(d)` and constraint factor `Fbar(d)`, bracket the feasible `d`
//! with closed-form initializers, bisect to the constraint boundary, and
//! extract the transform and symmetric rate.
//!
//! The constraint `lambda_m(Fbar(d)) <= tau` is never evaluated exactly
//! during the search; every probe uses the reduced-basis upper estimate
//! (largest column norm after PLLL or LLL reduction), so each accepted `d`
//! carries an integer witness that certifies feasibility on its own.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{self, DenseMatrix, SpdMatrix, UpperTriangularFactor};
use crate::reduction::{self, UnimodularTransform};
use crate::tolerances::{BISECT_TOL, DEFAULT_DELTA, DOUBLING_CAP_EXP, MAX_BISECT_ITERS};
use crate::Result;

/// Rate units for the symmetric-rate output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
}

/// Mapping from fronthaul capacity `C` to the norm threshold `tau`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMode {
    /// `tau = exp(2 C)`, the literal constraint-boundary form.
    Exp2C,
    /// `tau = exp(C)`, the natural-log reading of the rate constraint.
    ExpC,
    /// `tau = 2^C`, the bits reading.
    Pow2C,
}

/// Which reduction drives the probes and the final transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionChoice {
    #[serde(rename = "plll+size")]
    PlllSize,
    #[serde(rename = "lll")]
    Lll,
}

/// Solver knobs, echoed verbatim into every result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IfCranConfig {
    pub delta: f64,
    pub log_base: LogBase,
    pub threshold_mode: ThresholdMode,
    pub bisect_tol: f64,
    pub max_iters: u32,
    pub reduction: ReductionChoice,
}

impl Default for IfCranConfig {
    fn default() -> Self {
        Self {
            delta: DEFAULT_DELTA,
            log_base: LogBase::Two,
            threshold_mode: ThresholdMode::Exp2C,
            bisect_tol: BISECT_TOL,
            max_iters: MAX_BISECT_ITERS,
            reduction: ReductionChoice::PlllSize,
        }
    }
}

/// Norm threshold for the given capacity under the configured mode.
pub fn threshold_of(c: f64, mode: ThresholdMode) -> f64 {
    match mode {
        ThresholdMode::Exp2C => (2.0 * c).exp(),
        ThresholdMode::ExpC => c.exp(),
        ThresholdMode::Pow2C => 2.0_f64.powf(c),
    }
}

/// How the equalizer blocks of a generated instance are filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockMode {
    /// Identity blocks.
    Plain,
    /// Seeded random invertible blocks.
    Random,
}

/// A channel/equalizer pair with its power and fronthaul-capacity budget.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct IfCranInstance {
    h: DenseMatrix,
    b: DenseMatrix,
    blocks: Vec<usize>,
    p: f64,
    c: f64,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawInstance {
    h: DenseMatrix,
    b: DenseMatrix,
    blocks: Vec<usize>,
    p: f64,
    c: f64,
}

impl TryFrom<RawInstance> for IfCranInstance {
    type Error = Error;
    fn try_from(raw: RawInstance) -> Result<Self> {
        IfCranInstance::new(raw.h, raw.b, raw.blocks, raw.p, raw.c)
    }
}

impl From<IfCranInstance> for RawInstance {
    fn from(inst: IfCranInstance) -> Self {
        RawInstance { h: inst.h, b: inst.b, blocks: inst.blocks, p: inst.p, c: inst.c }
    }
}

impl IfCranInstance {
    /// Validates shapes, the exact block-diagonal structure and
    /// invertibility of `b`, the column rank of `h`, and the budgets.
    /// `c = 0` is allowed here; it surfaces as `CapacityTooSmall` once a
    /// threshold is needed.
    pub fn new(
        h: DenseMatrix,
        b: DenseMatrix,
        blocks: Vec<usize>,
        p: f64,
        c: f64,
    ) -> Result<Self> {
        let m = b.rows();
        if !b.is_square() || h.rows() != m {
            return Err(Error::DimensionMismatch {
                context: "equalizer must be square and match the channel rows".into(),
            });
        }
        if blocks.is_empty() || blocks.iter().any(|&s| s == 0) || blocks.iter().sum::<usize>() != m
        {
            return Err(Error::DimensionMismatch {
                context: "block sizes must be positive and sum to the equalizer dimension".into(),
            });
        }
        if h.cols() > m {
            return Err(Error::DimensionMismatch {
                context: "channel must have at least as many rows as columns".into(),
            });
        }
        if !p.is_finite() || !c.is_finite() {
            return Err(Error::NonFinite);
        }
        if p <= 0.0 || c < 0.0 {
            return Err(Error::NegativeInput);
        }
        let mut offset = 0;
        for &size in &blocks {
            for i in 0..m {
                for j in 0..m {
                    let inside = i >= offset && i < offset + size && j >= offset && j < offset + size;
                    let other_block = j >= offset && j < offset + size;
                    if !inside && other_block && b.get(i, j) != 0.0 {
                        return Err(Error::PreconditionViolated(
                            "equalizer has nonzero entries outside its diagonal blocks".into(),
                        ));
                    }
                }
            }
            offset += size;
        }
        if linalg::det(&b)? == 0.0 {
            return Err(Error::RankDeficient);
        }
        let gram_h = h.transpose().matmul(&h)?.symmetrized()?;
        if SpdMatrix::new(gram_h).is_err() {
            return Err(Error::RankDeficient);
        }
        Ok(Self { h, b, blocks, p, c })
    }

    pub fn h(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Number of equalizer rows (the constraint-lattice dimension).
    pub fn m(&self) -> usize {
        self.b.rows()
    }

    /// Number of user streams (the objective-lattice dimension).
    pub fn n(&self) -> usize {
        self.h.cols()
    }
}

/// Solver output: the boundary `d`, the stream transform, and the
/// feasibility certificate that was actually checked.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateResult {
    pub d_star: f64,
    /// Transform whose columns carry the decoded streams.
    pub x_hat: UnimodularTransform,
    /// `||F(d_star) x_i||` per column of `x_hat`.
    pub per_stream_norms: Vec<f64>,
    pub sym_rate: f64,
    /// Bisection probes spent narrowing the bracket.
    pub iterations: u32,
    /// Certified upper estimate of the last constraint-lattice minimum at
    /// `d_star`: the largest `||Fbar(d_star) z_i||` over the witness columns.
    pub lambda_n_fbar_at_d: f64,
    pub threshold: f64,
    /// Witness columns behind `lambda_n_fbar_at_d`.
    pub constraint_witness: UnimodularTransform,
    pub config: IfCranConfig,
}

fn ghat(inst: &IfCranInstance) -> Result<SpdMatrix> {
    let bh = inst.b.matmul(&inst.h)?;
    let outer = bh.matmul(&bh.transpose())?.scale(inst.p)?;
    let bbt = inst.b.matmul(&inst.b.transpose())?;
    SpdMatrix::new(outer.add(&bbt)?.symmetrized()?)
}

/// Factor of the constraint Gram at `d = 1` scale: `chol(P (BH)(BH)^T +
/// B B^T)`. Its determinant drives the lower bracket initializer.
pub fn fhat(inst: &IfCranInstance) -> Result<UpperTriangularFactor> {
    linalg::cholesky(&ghat(inst)?)
}

fn fbar_gram(g: &SpdMatrix, d: f64) -> Result<SpdMatrix> {
    let m = g.dim();
    let scaled = g.as_dense().scale(1.0 / d)?.add(&DenseMatrix::identity(m))?;
    SpdMatrix::new(scaled.symmetrized()?)
}

fn check_positive(d: f64) -> Result<()> {
    if !d.is_finite() {
        return Err(Error::NonFinite);
    }
    if d <= 0.0 {
        return Err(Error::NegativeInput);
    }
    Ok(())
}

/// Constraint factor `Fbar(d) = chol(d^{-1} (P (BH)(BH)^T + B B^T) + I)`.
pub fn build_fbar(inst: &IfCranInstance, d: f64) -> Result<UpperTriangularFactor> {
    check_positive(d)?;
    linalg::cholesky(&fbar_gram(&ghat(inst)?, d)?)
}

/// Objective factor `F(d) = chol((P^{-1} I + (BH)^T (B B^T + d I)^{-1} BH)^{-1})`.
pub fn build_f(inst: &IfCranInstance, d: f64) -> Result<UpperTriangularFactor> {
    check_positive(d)?;
    let m = inst.m();
    let n = inst.n();
    let bh = inst.b.matmul(&inst.h)?;
    let mut shifted = inst.b.matmul(&inst.b.transpose())?;
    for i in 0..m {
        shifted.set(i, i, shifted.get(i, i) + d);
    }
    let inv = linalg::spd_inverse(&SpdMatrix::new(shifted.symmetrized()?)?)?;
    let mut inner = bh.transpose().matmul(inv.as_dense())?.matmul(&bh)?;
    for i in 0..n {
        inner.set(i, i, inner.get(i, i) + 1.0 / inst.p);
    }
    let target = linalg::spd_inverse(&SpdMatrix::new(inner.symmetrized()?)?)?;
    linalg::cholesky(&target)
}

fn reduce(
    r: &UpperTriangularFactor,
    config: &IfCranConfig,
) -> Result<reduction::ReducedBasis> {
    match config.reduction {
        ReductionChoice::PlllSize => reduction::plll_reduce(r, config.delta),
        ReductionChoice::Lll => reduction::lll_reduce(r, config.delta),
    }
}

/// One feasibility probe: a certified upper estimate of the last minimum of
/// `Fbar(d)` plus the witness transform that attains it.
struct Probe {
    est: f64,
    witness: UnimodularTransform,
}

/// Estimates `lambda_m(Fbar(d))` from above by reducing the basis
/// `Fbar(d) Z0` (warm-started at the witness `z0`) and taking the larger
/// of: "keep `z0` as is" and "adopt the freshly reduced columns", whichever
/// certifies the smaller norm.
fn probe_fbar(
    g: &SpdMatrix,
    z0: &UnimodularTransform,
    d: f64,
    config: &IfCranConfig,
) -> Result<Probe> {
    let base = fbar_gram(g, d)?;
    let z0d = z0.to_dense();
    let gram = z0d.transpose().matmul(base.as_dense())?.matmul(&z0d)?;
    let start = linalg::cholesky(&SpdMatrix::new(gram.symmetrized()?)?)?;
    let m = start.dim();
    let start_est = (0..m).map(|j| start.col_norm(j)).fold(0.0, f64::max);
    let red = reduce(&start, config)?;
    let red_est = (0..m).map(|j| red.r.col_norm(j)).fold(0.0, f64::max);
    if red_est <= start_est {
        Ok(Probe { est: red_est, witness: z0.matmul(&red.z)? })
    } else {
        Ok(Probe { est: start_est, witness: z0.clone() })
    }
}

/// Smallest `d` with `lambda_m(Fbar(d)) >= tau` guaranteed: the boundary of
/// the determinant lower bound, `|det Fhat|^{2/m} / (tau^2 - 1)`.
pub fn d_min_init(inst: &IfCranInstance, config: &IfCranConfig) -> Result<f64> {
    let tau = threshold_of(inst.c, config.threshold_mode);
    if tau <= 1.0 {
        return Err(Error::CapacityTooSmall { threshold: tau });
    }
    let f = fhat(inst)?;
    let det_pow = (2.0 * f.log_det() / f.dim() as f64).exp();
    Ok(det_pow / (tau * tau - 1.0))
}

/// Closed-form upper bracket from the witness columns when every column is
/// short enough; otherwise geometric doubling from `d_min` until the probe
/// estimate drops below `tau`.
fn d_max_from_witness(
    g: &SpdMatrix,
    z0: &UnimodularTransform,
    d_min: f64,
    tau: f64,
    config: &IfCranConfig,
) -> Result<(f64, UnimodularTransform)> {
    let m = g.dim();
    let tau_sq = tau * tau;
    let mut d_max: f64 = 0.0;
    let mut all_short = true;
    for i in 0..m {
        let col = z0.col(i);
        let colf: Vec<f64> = col.iter().map(|&v| v as f64).collect();
        let gz = g.as_dense().mat_vec(&colf)?;
        let quad: f64 = colf.iter().zip(&gz).map(|(a, b)| a * b).sum();
        let len_sq: f64 = colf.iter().map(|v| v * v).sum();
        if len_sq >= tau_sq {
            all_short = false;
            break;
        }
        d_max = d_max.max(quad / (tau_sq - len_sq));
    }
    if all_short {
        return Ok((d_max, z0.clone()));
    }
    let mut d = d_min;
    for _ in 0..=DOUBLING_CAP_EXP {
        let probe = probe_fbar(g, z0, d, config)?;
        if probe.est <= tau {
            return Ok((d, probe.witness));
        }
        d *= 2.0;
    }
    Err(Error::CapacityTooSmall { threshold: tau })
}

/// Upper bracket initializer: reduces `Fhat` once and solves for the `d`
/// that pushes every witness column norm down to `tau`.
pub fn d_max_init(
    inst: &IfCranInstance,
    config: &IfCranConfig,
) -> Result<(f64, UnimodularTransform)> {
    let tau = threshold_of(inst.c, config.threshold_mode);
    if tau <= 1.0 {
        return Err(Error::CapacityTooSmall { threshold: tau });
    }
    let g = ghat(inst)?;
    let z0 = reduce(&fhat(inst)?, config)?.z;
    let d_min = d_min_init(inst, config)?;
    d_max_from_witness(&g, &z0, d_min, tau, config)
}

struct BisectOutcome {
    d: f64,
    est: f64,
    witness: UnimodularTransform,
    iterations: u32,
}

fn bisect(inst: &IfCranInstance, config: &IfCranConfig) -> Result<BisectOutcome> {
    let tau = threshold_of(inst.c, config.threshold_mode);
    let g = ghat(inst)?;
    let mut lo = d_min_init(inst, config)?;
    let (d_max, z0) = d_max_init(inst, config)?;
    let mut hi = d_max.max(lo);
    let mut best = probe_fbar(&g, &z0, hi, config)?;
    if best.est > tau * (1.0 + config.bisect_tol) {
        return Err(Error::PreconditionViolated(
            "upper bracket failed its own feasibility certificate".into(),
        ));
    }
    let width = config.bisect_tol * hi;
    let mut iterations = 0;
    while hi - lo > width && iterations < config.max_iters {
        let mid = 0.5 * (lo + hi);
        let probe = probe_fbar(&g, &z0, mid, config)?;
        if probe.est <= tau {
            hi = mid;
            best = probe;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(BisectOutcome { d: hi, est: best.est, witness: best.witness, iterations })
}

/// Smallest probed `d` whose certified estimate meets the constraint.
pub fn find_d(inst: &IfCranInstance, config: &IfCranConfig) -> Result<f64> {
    Ok(bisect(inst, config)?.d)
}

fn symmetric_rate(p: f64, norms: &[f64], base: LogBase) -> f64 {
    let worst = norms.iter().cloned().fold(0.0, f64::max);
    let ratio = p / (worst * worst);
    let rate = 0.5
        * match base {
            LogBase::Two => ratio.log2(),
            LogBase::E => ratio.ln(),
        };
    rate.max(0.0)
}

/// Full pipeline: bracket, bisect, reduce `F(d_star)`, and report the rate.
pub fn solve_rate(inst: &IfCranInstance, config: &IfCranConfig) -> Result<RateResult> {
    let outcome = bisect(inst, config)?;
    let f = build_f(inst, outcome.d)?;
    let x_hat = reduce(&f, config)?.z;
    let n = inst.n();
    let mut per_stream_norms = Vec::with_capacity(n);
    for j in 0..n {
        per_stream_norms.push(f.norm_int_vec(&x_hat.col(j))?);
    }
    let sym_rate = symmetric_rate(inst.p, &per_stream_norms, config.log_base);
    Ok(RateResult {
        d_star: outcome.d,
        x_hat,
        per_stream_norms,
        sym_rate,
        iterations: outcome.iterations,
        lambda_n_fbar_at_d: outcome.est,
        threshold: threshold_of(inst.c, config.threshold_mode),
        constraint_witness: outcome.witness,
        config: *config,
    })
}

fn random_normal(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, StandardNormal.sample(rng));
        }
    }
    m
}

/// Seeded random instance: standard-normal channel, identity or random
/// invertible equalizer blocks. Redraws on rank failures, up to 100 times.
pub fn generate_instance(
    n: usize,
    blocks: &[usize],
    p: f64,
    c: f64,
    seed: u64,
    mode: BlockMode,
) -> Result<IfCranInstance> {
    let m: usize = blocks.iter().sum();
    if m < n || n == 0 {
        return Err(Error::DimensionMismatch {
            context: "block sizes must sum to at least the number of streams".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let h = random_normal(&mut rng, m, n);
        let mut b = DenseMatrix::identity(m);
        if mode == BlockMode::Random {
            let mut offset = 0;
            for &size in blocks {
                let block = random_normal(&mut rng, size, size);
                for i in 0..size {
                    for j in 0..size {
                        b.set(offset + i, offset + j, block.get(i, j));
                    }
                }
                offset += size;
            }
        }
        if let Ok(inst) = IfCranInstance::new(h, b, blocks.to_vec(), p, c) {
            return Ok(inst);
        }
    }
    Err(Error::GenerationFailed { attempts: 100 })
}
