//! `latmin`: command-line front end for lattice reduction, exact successive
//! minima, bound reports, seeded property sweeps, and the integer-forcing
//! C-RAN rate solver.
//!
//! Exit codes are a stable contract: 0 success, 1 property violation,
//! 2 usage or parse error, 3 numeric or infeasible instance. All randomness
//! flows from the single `--seed` value through ChaCha8; reruns with the
//! same flags produce byte-identical output files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use latmin::ifcran::{
    self, BlockMode, IfCranConfig, IfCranInstance, LogBase, ReductionChoice, ThresholdMode,
};
use latmin::io::{self, MatrixInput, Output};
use latmin::linalg::{self, DenseMatrix, SpdMatrix, UpperTriangularFactor};
use latmin::minima::{self, Thm2Side};
use latmin::reduction;
use latmin::sampling;
use latmin::tolerances::{
    rel_close, strictly_greater, BISECT_TOL, DEFAULT_DELTA, FACT_TOL, MAX_BISECT_ITERS,
    MAX_EXACT_DIM,
};
use latmin::Error;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Reduce,
    Smp,
    Bounds,
    Verify,
    Ifcran,
    Gen,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LogBaseArg {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

impl From<LogBaseArg> for LogBase {
    fn from(arg: LogBaseArg) -> Self {
        match arg {
            LogBaseArg::Two => LogBase::Two,
            LogBaseArg::E => LogBase::E,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ThresholdModeArg {
    #[value(name = "exp2c")]
    Exp2C,
    #[value(name = "expc")]
    ExpC,
    #[value(name = "pow2c")]
    Pow2C,
}

impl From<ThresholdModeArg> for ThresholdMode {
    fn from(arg: ThresholdModeArg) -> Self {
        match arg {
            ThresholdModeArg::Exp2C => ThresholdMode::Exp2C,
            ThresholdModeArg::ExpC => ThresholdMode::ExpC,
            ThresholdModeArg::Pow2C => ThresholdMode::Pow2C,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReductionArg {
    #[value(name = "plll+size")]
    PlllSize,
    #[value(name = "lll")]
    Lll,
}

impl From<ReductionArg> for ReductionChoice {
    fn from(arg: ReductionArg) -> Self {
        match arg {
            ReductionArg::PlllSize => ReductionChoice::PlllSize,
            ReductionArg::Lll => ReductionChoice::Lll,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BModeArg {
    Plain,
    Random,
}

impl From<BModeArg> for BlockMode {
    fn from(arg: BModeArg) -> Self {
        match arg {
            BModeArg::Plain => BlockMode::Plain,
            BModeArg::Random => BlockMode::Random,
        }
    }
}

/// Lattice successive-minima toolkit.
#[derive(Parser, Debug)]
#[command(name = "latmin", version)]
struct Args {
    /// Command to run.
    #[arg(long = "cmd", value_enum)]
    cmd: Command,

    /// Input file: matrix JSON for reduce/smp/bounds, instance JSON for
    /// ifcran.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,

    /// Output file; results print to stdout when omitted.
    #[arg(long = "out", value_name = "FILE")]
    out: Option<PathBuf>,

    /// PRNG seed; the only entropy source.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Reduction quality parameter in (1/4, 1].
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,

    /// Rate units: bits (2) or nats (e).
    #[arg(long = "log-base", value_enum, default_value_t = LogBaseArg::Two)]
    log_base: LogBaseArg,

    /// Capacity-to-threshold mapping for ifcran.
    #[arg(long = "threshold-mode", value_enum, default_value_t = ThresholdModeArg::Exp2C)]
    threshold_mode: ThresholdModeArg,

    /// Reduction algorithm for reduce and the ifcran probes.
    #[arg(long, value_enum, default_value_t = ReductionArg::PlllSize)]
    reduction: ReductionArg,

    /// Relative bracket width at which the ifcran bisection stops.
    #[arg(long = "bisect-tol", default_value_t = BISECT_TOL)]
    bisect_tol: f64,

    /// Property-sweep trials per dimension (verify).
    #[arg(long, default_value_t = 100)]
    trials: u64,

    /// Inclusive dimension range for verify, e.g. 2..4.
    #[arg(long, default_value = "2..4")]
    dims: String,

    /// Sweep spec `param=lo:hi:steps` with param `c` or `p`; emits CSV
    /// (ifcran).
    #[arg(long)]
    grid: Option<String>,

    /// Number of user streams (gen, or ifcran without --in).
    #[arg(long)]
    n: Option<usize>,

    /// Comma-separated equalizer block sizes, e.g. 2,2; defaults to one
    /// block of size n.
    #[arg(long)]
    blocks: Option<String>,

    /// Transmit power.
    #[arg(long, default_value_t = 1.0)]
    p: f64,

    /// Fronthaul capacity per link.
    #[arg(long, default_value_t = 1.0)]
    c: f64,

    /// Equalizer fill for generated instances.
    #[arg(long = "b-mode", value_enum, default_value_t = BModeArg::Plain)]
    b_mode: BModeArg,
}

enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn message(&self) -> String {
        match self {
            CliError::Usage(msg) => msg.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Io(_)) | CliError::Core(Error::Json(_)) => 2,
            CliError::Core(_) => 3,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Resolved run parameters, echoed verbatim into every output artifact.
#[derive(Serialize)]
struct RunConfig {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    seed: u64,
    delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_base: Option<LogBase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold_mode: Option<ThresholdMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduction: Option<ReductionChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bisect_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dims: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b_mode: Option<BlockMode>,
}

impl RunConfig {
    fn base(args: &Args, command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            input: args.input.as_ref().map(|p| p.display().to_string()),
            output: args.out.as_ref().map(|p| p.display().to_string()),
            seed: args.seed,
            delta: args.delta,
            log_base: None,
            threshold_mode: None,
            reduction: None,
            bisect_tol: None,
            trials: None,
            dims: None,
            grid: None,
            n: None,
            blocks: None,
            p: None,
            c: None,
            b_mode: None,
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(args: &Args) -> CliResult<u8> {
    match args.cmd {
        Command::Reduce => cmd_reduce(args),
        Command::Smp => cmd_smp(args),
        Command::Bounds => cmd_bounds(args),
        Command::Verify => cmd_verify(args),
        Command::Ifcran => cmd_ifcran(args),
        Command::Gen => cmd_gen(args),
    }
}

fn emit<T: Serialize>(out: &Option<PathBuf>, value: &T) -> CliResult<()> {
    match out {
        Some(path) => io::write_json(path, value).map_err(CliError::from),
        None => {
            let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
            println!("{text}");
            Ok(())
        }
    }
}

fn require_input(args: &Args) -> CliResult<&Path> {
    args.input
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--cmd {:?} requires --in", args.cmd).to_lowercase()))
}

fn load_matrix_input(path: &Path) -> CliResult<MatrixInput> {
    match io::read_json(path) {
        Ok(input) => Ok(input),
        Err(Error::Json(_)) => Err(CliError::Usage(
            "input is not a matrix document: expected {rows, cols, data}, an {\"r\": ...} \
             factor, a {\"g1\": ..., \"g2\": ...} pair, or a reduce output"
                .into(),
        )),
        Err(other) => Err(other.into()),
    }
}

fn load_factor(path: &Path) -> CliResult<UpperTriangularFactor> {
    match load_matrix_input(path)? {
        MatrixInput::Single { r } | MatrixInput::Bare(r) => Ok(linalg::triangularize(&r)?),
        MatrixInput::Wrapped { result } => Ok(linalg::triangularize(&result.r)?),
        MatrixInput::Pair { .. } => Err(CliError::Usage(
            "this command takes a single matrix, not a g1/g2 pair".into(),
        )),
    }
}

fn spd_from_file(m: DenseMatrix) -> CliResult<SpdMatrix> {
    if !m.is_symmetric() {
        return Err(CliError::Core(Error::NotSymmetric));
    }
    Ok(SpdMatrix::new(m.symmetrized()?)?)
}

fn cmd_reduce(args: &Args) -> CliResult<u8> {
    let factor = load_factor(require_input(args)?)?;
    let result = match args.reduction {
        ReductionArg::PlllSize => reduction::plll_reduce(&factor, args.delta)?,
        ReductionArg::Lll => reduction::lll_reduce(&factor, args.delta)?,
    };
    let mut config = RunConfig::base(args, "reduce");
    config.reduction = Some(args.reduction.into());
    emit(&args.out, &Output { config, result })?;
    Ok(0)
}

fn cmd_smp(args: &Args) -> CliResult<u8> {
    let factor = load_factor(require_input(args)?)?;
    let result = minima::solve_smp(&factor)?;
    let config = RunConfig::base(args, "smp");
    emit(&args.out, &Output { config, result })?;
    Ok(0)
}

/// Bound reports for a Gram pair: the sum lattice (exact-minima and
/// cheap-certificate lower bounds) and both inverse lattices.
#[derive(Serialize)]
struct PairBounds {
    sum: minima::BoundsReport,
    sum_cheap: minima::BoundsReport,
    inv_g1: minima::BoundsReport,
    inv_g2: minima::BoundsReport,
}

fn cmd_bounds(args: &Args) -> CliResult<u8> {
    let config = RunConfig::base(args, "bounds");
    match load_matrix_input(require_input(args)?)? {
        MatrixInput::Single { r } | MatrixInput::Bare(r) => {
            let factor = linalg::triangularize(&r)?;
            let result = minima::bounds_report(&factor, true)?;
            emit(&args.out, &Output { config, result })?;
        }
        MatrixInput::Wrapped { result } => {
            let factor = linalg::triangularize(&result.r)?;
            let result = minima::bounds_report(&factor, true)?;
            emit(&args.out, &Output { config, result })?;
        }
        MatrixInput::Pair { g1, g2 } => {
            let g1 = spd_from_file(g1)?;
            let g2 = spd_from_file(g2)?;
            let result = PairBounds {
                sum: minima::bounds_report_sum(&g1, &g2, false)?,
                sum_cheap: minima::bounds_report_sum(&g1, &g2, true)?,
                inv_g1: minima::bounds_report_inverse(&g1, &g2, Thm2Side::First)?,
                inv_g2: minima::bounds_report_inverse(&g1, &g2, Thm2Side::Second)?,
            };
            emit(&args.out, &Output { config, result })?;
        }
    }
    Ok(0)
}

fn parse_dims(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("invalid --dims '{text}': expected a..b"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (
            a.parse::<usize>().map_err(|_| bad())?,
            b.parse::<usize>().map_err(|_| bad())?,
        ),
        None => {
            let v = text.parse::<usize>().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    if hi > MAX_EXACT_DIM {
        return Err(CliError::Usage(format!(
            "--dims upper end {hi} exceeds the exact-enumeration limit {MAX_EXACT_DIM}"
        )));
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct PropertyCount {
    name: &'static str,
    pass: u64,
    fail: u64,
}

#[derive(Serialize)]
struct CounterexampleFacts {
    /// The sum bound with both indices raised fails strictly on the fixture.
    direct_fails_strictly: bool,
    /// The first inverse-form variant fails strictly.
    inverse1_fails_strictly: bool,
    /// The second inverse-form variant lands exactly on equality.
    inverse2_is_equality: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    trials_per_dim: u64,
    dims: Vec<usize>,
    properties: Vec<PropertyCount>,
    counterexample: CounterexampleFacts,
    violations: u64,
}

fn minima_of(g: &SpdMatrix) -> Result<Vec<f64>, Error> {
    Ok(minima::solve_smp(&linalg::cholesky(g)?)?.values)
}

const SWEEP_TOL: f64 = 1e-9;

fn check_thm1(a: &SpdMatrix, b: &SpdMatrix) -> Result<bool, Error> {
    let la = minima_of(a)?;
    let lb = minima_of(b)?;
    let ls = minima_of(&a.add(b)?)?;
    for i in 0..ls.len() {
        let bound = minima::thm1_lower(la[0], lb[0], la[i], lb[i])?;
        if ls[i] < bound * (1.0 - SWEEP_TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_thm2(a: &SpdMatrix, b: &SpdMatrix) -> Result<bool, Error> {
    for (side, target) in [(Thm2Side::First, a), (Thm2Side::Second, b)] {
        let lt = minima_of(&linalg::spd_inverse(target)?)?;
        for i in 1..=lt.len() {
            let bound = minima::thm2_lower(a, b, i, side)?;
            if lt[i - 1] < bound * (1.0 - SWEEP_TOL) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_woodbury(a: &SpdMatrix, b: &SpdMatrix) -> Result<bool, Error> {
    let (s, t) = linalg::woodbury_decompose(a, b)?;
    let recon = s.as_dense().add(t.as_dense())?;
    let direct = linalg::spd_inverse(a)?;
    let scale = direct.as_dense().max_abs();
    let diff = recon.sub(direct.as_dense())?;
    Ok(diff.max_abs() <= FACT_TOL * scale)
}

fn check_cor3(a: &SpdMatrix, b: &SpdMatrix) -> Result<bool, Error> {
    let ls = minima_of(&a.add(b)?)?;
    for i in 1..=ls.len() {
        let bound = minima::cor3_lower(a, b, i)?;
        if ls[i - 1] < bound * (1.0 - SWEEP_TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_prop1(r: &UpperTriangularFactor, values: &[f64]) -> Result<bool, Error> {
    for i in 1..=values.len() {
        let (lo, hi) = minima::prop1_bounds(r, i)?;
        if values[i - 1] < lo * (1.0 - SWEEP_TOL) || values[i - 1] > hi * (1.0 + SWEEP_TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_remark3(r: &UpperTriangularFactor, values: &[f64]) -> bool {
    let n = values.len();
    if values[n - 1] < minima::remark3_lower(r) * (1.0 - SWEEP_TOL) {
        return false;
    }
    let product: f64 = values.iter().product();
    product >= r.det().abs() * (1.0 - SWEEP_TOL)
}

fn check_oracle(r: &UpperTriangularFactor, values: &[f64]) -> Result<bool, Error> {
    let (brute, _) = minima::brute_force_minima(r)?;
    Ok(values
        .iter()
        .zip(&brute)
        .all(|(a, b)| rel_close(*a, *b, 1e-12)))
}

fn cmd_verify(args: &Args) -> CliResult<u8> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let (lo, hi) = parse_dims(&args.dims)?;
    let mut config = RunConfig::base(args, "verify");
    config.trials = Some(args.trials);
    config.dims = Some(args.dims.clone());

    let names = [
        "thm1", "thm2", "woodbury", "cor1", "cor2", "cor3", "prop1", "remark3", "oracle",
    ];
    let mut props: Vec<PropertyCount> =
        names.iter().map(|n| PropertyCount { name: n, pass: 0, fail: 0 }).collect();
    let record = |props: &mut Vec<PropertyCount>, name: &str, ok: bool| {
        let entry = props.iter_mut().find(|p| p.name == name).expect("known property");
        if ok {
            entry.pass += 1;
        } else {
            entry.fail += 1;
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for n in lo..=hi {
        for _ in 0..args.trials {
            let a = sampling::random_spd(&mut rng, n)?;
            let b = sampling::random_spd(&mut rng, n)?;
            record(&mut props, "thm1", check_thm1(&a, &b)?);
            record(&mut props, "thm2", check_thm2(&a, &b)?);
            record(&mut props, "woodbury", check_woodbury(&a, &b)?);
            record(&mut props, "cor3", check_cor3(&a, &b)?);

            let (d1, d2) = sampling::random_dominating_pair(&mut rng, n)?;
            record(&mut props, "cor1", minima::check_monotonicity(&d1, &d2)?.all_hold);
            let g = sampling::random_psd(&mut rng, n)?;
            let bmat = sampling::random_full_rank(&mut rng, n, n)?;
            record(&mut props, "cor2", minima::check_cor2(&g, &bmat, &d1, &d2)?.all_hold);

            let r = linalg::cholesky(&sampling::random_spd(&mut rng, n)?)?;
            let values = minima::solve_smp(&r)?.values;
            record(&mut props, "prop1", check_prop1(&r, &values)?);
            record(&mut props, "remark3", check_remark3(&r, &values));
            if n <= 4 {
                record(&mut props, "oracle", check_oracle(&r, &values)?);
            }
        }
    }

    let fixture = minima::counterexample_2d()?;
    let counterexample = CounterexampleFacts {
        direct_fails_strictly: strictly_greater(fixture.direct_rhs, fixture.lam2_r3),
        inverse1_fails_strictly: strictly_greater(fixture.inv1_rhs, fixture.inv1_lhs),
        inverse2_is_equality: rel_close(fixture.inv2_lhs, fixture.inv2_rhs, 1e-12),
    };

    let mut violations: u64 = props.iter().map(|p| p.fail).sum();
    if !counterexample.direct_fails_strictly
        || !counterexample.inverse1_fails_strictly
        || !counterexample.inverse2_is_equality
    {
        violations += 1;
    }

    let report = VerifyReport {
        trials_per_dim: args.trials,
        dims: (lo..=hi).collect(),
        properties: props,
        counterexample,
        violations,
    };
    emit(&args.out, &Output { config, result: report })?;
    Ok(if violations == 0 { 0 } else { 1 })
}

fn parse_blocks(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid --blocks '{text}'")))
        })
        .collect()
}

fn ifcran_config(args: &Args) -> IfCranConfig {
    IfCranConfig {
        delta: args.delta,
        log_base: args.log_base.into(),
        threshold_mode: args.threshold_mode.into(),
        bisect_tol: args.bisect_tol,
        max_iters: MAX_BISECT_ITERS,
        reduction: args.reduction.into(),
    }
}

fn gen_params(args: &Args) -> CliResult<(usize, Vec<usize>)> {
    let n = args
        .n
        .ok_or_else(|| CliError::Usage("generation requires --n (and optionally --blocks)".into()))?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let blocks = match &args.blocks {
        Some(text) => parse_blocks(text)?,
        None => vec![n],
    };
    Ok((n, blocks))
}

/// Instance files may be bare or wrapped in a `{config, result}` artifact
/// (as written by `--cmd gen`).
#[derive(serde::Deserialize)]
#[serde(untagged)]
enum InstanceInput {
    Wrapped { result: IfCranInstance },
    Bare(IfCranInstance),
}

fn load_instance(args: &Args, config: &mut RunConfig) -> CliResult<IfCranInstance> {
    if let Some(path) = &args.input {
        let input: InstanceInput = io::read_json(path)?;
        Ok(match input {
            InstanceInput::Wrapped { result } => result,
            InstanceInput::Bare(inst) => inst,
        })
    } else {
        let (n, blocks) = gen_params(args)?;
        config.n = Some(n);
        config.blocks = Some(blocks.clone());
        config.b_mode = Some(args.b_mode.into());
        Ok(ifcran::generate_instance(
            n,
            &blocks,
            args.p,
            args.c,
            args.seed,
            args.b_mode.into(),
        )?)
    }
}

struct GridSpec {
    param: char,
    values: Vec<f64>,
}

fn parse_grid(text: &str) -> CliResult<GridSpec> {
    let bad = || CliError::Usage(format!("invalid --grid '{text}': expected param=lo:hi:steps"));
    let (name, rest) = text.split_once('=').ok_or_else(bad)?;
    let param = match name.trim() {
        "c" => 'c',
        "p" => 'p',
        _ => return Err(bad()),
    };
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    if !lo.is_finite() || !hi.is_finite() || lo > hi || steps == 0 {
        return Err(bad());
    }
    let values = (0..steps)
        .map(|k| {
            if steps == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (steps - 1) as f64
            }
        })
        .collect();
    Ok(GridSpec { param, values })
}

fn with_param(inst: &IfCranInstance, param: char, value: f64) -> CliResult<IfCranInstance> {
    let (p, c) = match param {
        'p' => (value, inst.c()),
        _ => (inst.p(), value),
    };
    Ok(IfCranInstance::new(
        inst.h().clone(),
        inst.b().clone(),
        inst.blocks().to_vec(),
        p,
        c,
    )?)
}

fn cmd_ifcran(args: &Args) -> CliResult<u8> {
    let mut config = RunConfig::base(args, "ifcran");
    config.log_base = Some(args.log_base.into());
    config.threshold_mode = Some(args.threshold_mode.into());
    config.reduction = Some(args.reduction.into());
    config.bisect_tol = Some(args.bisect_tol);
    let solver = ifcran_config(args);
    let inst = load_instance(args, &mut config)?;
    config.p = Some(inst.p());
    config.c = Some(inst.c());
    let started = Instant::now();
    match &args.grid {
        None => {
            let result = ifcran::solve_rate(&inst, &solver)?;
            eprintln!("solved in {:?}", started.elapsed());
            emit(&args.out, &Output { config, result })?;
        }
        Some(spec_text) => {
            config.grid = Some(spec_text.clone());
            let spec = parse_grid(spec_text)?;
            let mut rows = Vec::with_capacity(spec.values.len());
            for &value in &spec.values {
                let swept = with_param(&inst, spec.param, value)?;
                let result = ifcran::solve_rate(&swept, &solver)?;
                rows.push(vec![
                    value.to_string(),
                    result.d_star.to_string(),
                    result.sym_rate.to_string(),
                    result.iterations.to_string(),
                ]);
            }
            eprintln!("swept {} points in {:?}", spec.values.len(), started.elapsed());
            let columns = ["param", "d_star", "sym_rate", "iterations"];
            match &args.out {
                Some(path) => io::write_csv(path, &config, &columns, &rows)?,
                None => print!("{}", io::csv_string(&config, &columns, &rows)?),
            }
        }
    }
    Ok(0)
}

fn cmd_gen(args: &Args) -> CliResult<u8> {
    let mut config = RunConfig::base(args, "gen");
    let (n, blocks) = gen_params(args)?;
    config.n = Some(n);
    config.blocks = Some(blocks.clone());
    config.p = Some(args.p);
    config.c = Some(args.c);
    config.b_mode = Some(args.b_mode.into());
    let result =
        ifcran::generate_instance(n, &blocks, args.p, args.c, args.seed, args.b_mode.into())?;
    emit(&args.out, &Output { config, result })?;
    Ok(0)
}
