//! `anharm2d`: closed-form states of `V(r) = a r² + b r⁻⁴ + c r⁻⁶` in 2D, with numerical verification.
//!
//! Exit codes: 0 ok, 2 invalid input, 3 constraint violation, 4 convergence failure,
//! 5 verification failed.

mod format;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anharm2d_core::grid::{build_grid_with_threshold, RadialGrid, DEFAULT_TAIL_THRESHOLD};
use anharm2d_core::verify::verify_with_threshold;
use anharm2d_core::{
    excited_solve, ground_constraint_b, ground_constraint_residual, normalization_constant,
    squared_norm, AngularChannel, ClosedFormState, Error, Level, PotentialParams, SignBranch,
    VerificationReport,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const TAIL_ENV: &str = "ANHARM_TAIL_THRESHOLD";
/// Relative tolerance of the constraint gate for user-supplied `(a, b, c, m)`.
const CONSTRAINT_GATE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "anharm2d", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateArg {
    Ground,
    Excited,
}

impl From<StateArg> for Level {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::Ground => Level::Ground,
            StateArg::Excited => Level::Excited,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for SignBranch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => SignBranch::Plus,
            BranchArg::Minus => SignBranch::Minus,
        }
    }
}

/// Potential and state selection shared by `eval` and `normalize`.
#[derive(Debug, clap::Args)]
struct StateSpec {
    #[arg(long, value_enum)]
    state: StateArg,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// r⁻⁶ coefficient; omitted means the joint solution for (a, m)
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// r⁻⁴ coefficient; omitted means the value the constraint demands
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Ground-state sign branch; inferred from b when omitted
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fix c and b from a and m so that ground and first excited states are both exact
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Ground-state family: b from (a, c, m) on one sign branch
    Ground {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, value_enum, default_value = "minus")]
        branch: BranchArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample a radial wavefunction as `r,R` CSV
    Eval {
        #[command(flatten)]
        spec: StateSpec,
        #[arg(long, allow_negative_numbers = true)]
        r_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Scale by the normalization constant
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the joint solution against the finite-difference spectrum
    Verify {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long = "grid-n", default_value_t = 4000)]
        grid_n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Integral of |R|² and the normalization constant
    Normalize {
        #[command(flatten)]
        spec: StateSpec,
        /// Multiply the state by this factor first
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        scale: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Constraint(String),
    Convergence(String),
    Failed(String),
    Io(io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Constraint(_) => 3,
            CliError::Convergence(_) => 4,
            CliError::Failed(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "invalid input: {msg}"),
            CliError::Constraint(msg) => write!(f, "constraint violation: {msg}"),
            CliError::Convergence(msg) => write!(f, "convergence failure: {msg}"),
            CliError::Failed(msg) => write!(f, "verification failed: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) => CliError::Input(e.to_string()),
            Error::Unsolvable { .. } | Error::ConstraintViolation(_) => {
                CliError::Constraint(e.to_string())
            }
            Error::Convergence(_) => CliError::Convergence(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn tail_threshold() -> CliResult<f64> {
    match std::env::var(TAIL_ENV) {
        Err(_) => Ok(DEFAULT_TAIL_THRESHOLD),
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(CliError::Input(format!(
                "{TAIL_ENV} must be a positive number, got '{raw}'"
            ))),
        },
    }
}

fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::Input(format!(
            "--{name} must be a finite positive number, got {x}"
        )))
    }
}

fn open_output(path: Option<&PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(doc: &Value, path: Option<&PathBuf>) -> CliResult<()> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, doc).map_err(io::Error::from)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn cmd_solve(a: f64, m: u32) -> CliResult<Value> {
    positive("a", a)?;
    let sol = excited_solve(a, AngularChannel(m))?;
    Ok(json!({
        "a": a,
        "m": m,
        "c": sol.c(),
        "b": sol.b(),
        "kappa": sol.kappa(),
        "kappa1": sol.kappa1(),
        "E0": sol.e0(),
        "E1": sol.e1(),
        "a1": sol.a1,
        "a2": sol.a2,
        "a3": sol.a3,
    }))
}

fn cmd_ground(a: f64, c: f64, m: u32, branch: SignBranch) -> CliResult<Value> {
    positive("a", a)?;
    positive("c", c)?;
    let m = AngularChannel(m);
    let b = ground_constraint_b(a, c, m, branch)?;
    let p = PotentialParams::new(a, b, c)?;
    let state = ClosedFormState::ground(&p, m, branch);
    Ok(json!({
        "a": a,
        "b": b,
        "c": c,
        "m": m.0,
        "branch": branch.to_string(),
        "kappa": state.kappa,
        "E0": state.energy,
        "constraint_residual": ground_constraint_residual(&p, m),
    }))
}

/// Relative size of the ground constraint residual.
fn relative_ground_residual(p: &PotentialParams, m: AngularChannel) -> f64 {
    let mf = f64::from(m.0);
    let t = p.b() + 2.0 * p.c().sqrt();
    let scale = t * t + 4.0 * p.c() * (mf * mf + 2.0 * (p.a() * p.c()).sqrt());
    ground_constraint_residual(p, m).abs() / scale
}

/// Build the requested state and check that it is an exact eigenstate of the given potential.
fn resolve_state(
    spec: &StateSpec,
) -> CliResult<(PotentialParams, AngularChannel, ClosedFormState)> {
    let a = positive("a", spec.a)?;
    let m = AngularChannel(spec.m);
    let level = Level::from(spec.state);
    let branch = spec.branch.map(SignBranch::from);

    let Some(c) = spec.c else {
        if spec.b.is_some() {
            return Err(CliError::Input("--b requires --c".into()));
        }
        if branch == Some(SignBranch::Plus) {
            return Err(CliError::Input(
                "the joint solution lies on the minus branch; pass --c to use the plus branch"
                    .into(),
            ));
        }
        let sol = excited_solve(a, m)?;
        let state = match level {
            Level::Ground => sol.ground,
            Level::Excited => sol.excited,
        };
        return Ok((sol.params, m, state));
    };
    let c = positive("c", c)?;
    let sc = c.sqrt();

    match level {
        Level::Ground => {
            let b = match spec.b {
                Some(b) => b,
                None => ground_constraint_b(a, c, m, branch.unwrap_or(SignBranch::Minus))?,
            };
            let p = PotentialParams::new(a, b, c)?;
            let rel = relative_ground_residual(&p, m);
            if rel > CONSTRAINT_GATE {
                return Err(CliError::Constraint(format!(
                    "(b + 2√c)² = 4c(m² + 2√(ac)) fails for a = {a}, b = {b}, c = {c}, m = {}: \
                     relative residual {rel:e}",
                    m.0
                )));
            }
            let inferred = if b + 2.0 * sc >= 0.0 {
                SignBranch::Plus
            } else {
                SignBranch::Minus
            };
            let branch = branch.unwrap_or(inferred);
            let state = ClosedFormState::ground(&p, m, branch);
            // b = √c(2κ − 3) ties b to the branch
            let expected = sc * (2.0 * state.kappa - 3.0);
            if (b - expected).abs()
                > CONSTRAINT_GATE * (b.abs() + sc * (2.0 * state.kappa.abs() + 3.0))
            {
                return Err(CliError::Constraint(format!(
                    "b = {b} belongs to the other sign branch (the {branch} branch needs b = {expected})"
                )));
            }
            Ok((p, m, state))
        }
        Level::Excited => {
            let b = spec.b.unwrap_or(-6.0 * sc);
            let p = PotentialParams::new(a, b, c)?;
            if (b + 6.0 * sc).abs() > CONSTRAINT_GATE * 6.0 * sc {
                return Err(CliError::Constraint(format!(
                    "the excited state needs b = -6√c = {}, got {b}",
                    -6.0 * sc
                )));
            }
            let rel = relative_ground_residual(&p, m);
            if rel > CONSTRAINT_GATE {
                return Err(CliError::Constraint(format!(
                    "m² + 2√(ac) = 4 fails for a = {a}, c = {c}, m = {}: relative residual {rel:e}",
                    m.0
                )));
            }
            Ok((p, m, ClosedFormState::excited(&p)))
        }
    }
}

fn sample_curve(
    state: &ClosedFormState,
    range: (f64, f64),
    samples: usize,
    scale: f64,
) -> CliResult<Vec<(f64, f64)>> {
    let (lo, hi) = range;
    let step = (hi - lo) / (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            let r = if i + 1 == samples {
                hi
            } else {
                lo + i as f64 * step
            };
            Ok((r, scale * state.eval(r)?))
        })
        .collect()
}

fn default_grid(p: &PotentialParams, m: AngularChannel) -> CliResult<RadialGrid> {
    Ok(build_grid_with_threshold(p, m, 16, tail_threshold()?)?)
}

fn cmd_eval(
    spec: &StateSpec,
    r_min: Option<f64>,
    r_max: Option<f64>,
    samples: usize,
    normalize: bool,
) -> CliResult<Vec<(f64, f64)>> {
    if samples < 2 {
        return Err(CliError::Input(format!(
            "--samples must be at least 2, got {samples}"
        )));
    }
    let (p, m, state) = resolve_state(spec)?;
    let grid = default_grid(&p, m)?;
    let lo = r_min.unwrap_or(grid.r_min);
    let hi = r_max.unwrap_or(grid.r_max);
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(CliError::Input(format!(
            "range must satisfy 0 < r_min < r_max < inf, got [{lo}, {hi}]"
        )));
    }
    let scale = if normalize {
        normalization_constant(&state, &grid)?
    } else {
        1.0
    };
    sample_curve(&state, (lo, hi), samples, scale)
}

fn cmd_normalize(spec: &StateSpec, factor: f64) -> CliResult<Value> {
    if !(factor.is_finite() && factor != 0.0) {
        return Err(CliError::Input(format!(
            "--scale must be finite and nonzero, got {factor}"
        )));
    }
    let (p, m, state) = resolve_state(spec)?;
    let state = state.scaled(factor);
    let grid = default_grid(&p, m)?;
    let integral = squared_norm(&state, &grid)?;
    let n = normalization_constant(&state, &grid)?;
    Ok(json!({ "integral": integral, "N": n }))
}

fn report_json(rep: &VerificationReport) -> Value {
    json!({
        "exact_energies": [rep.exact_energies.0, rep.exact_energies.1],
        "numeric_energies": [rep.numeric_energies.0, rep.numeric_energies.1],
        "abs_errors": [rep.abs_errors.0, rep.abs_errors.1],
        "node_counts": [rep.node_counts.0, rep.node_counts.1],
        "overlap_01": rep.overlap_01,
        "norm_constants": [rep.norm_constants.0, rep.norm_constants.1],
        "convergence_order": rep.convergence_order,
        "grid": { "r_min": rep.grid.r_min, "r_max": rep.grid.r_max, "n": rep.grid.n },
        "params": { "a": rep.params.a(), "b": rep.params.b(), "c": rep.params.c() },
        "m": rep.m,
        "passed": rep.passed,
    })
}

fn cmd_verify(a: f64, m: u32, grid_n: usize) -> CliResult<VerificationReport> {
    positive("a", a)?;
    Ok(verify_with_threshold(
        a,
        AngularChannel(m),
        grid_n,
        tail_threshold()?,
    )?)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve { a, m, output } => write_json(&cmd_solve(a, m)?, output.as_ref()),
        Command::Ground {
            a,
            c,
            m,
            branch,
            output,
        } => write_json(&cmd_ground(a, c, m, branch.into())?, output.as_ref()),
        Command::Eval {
            spec,
            r_min,
            r_max,
            samples,
            normalize,
            output,
        } => {
            let rows = cmd_eval(&spec, r_min, r_max, samples, normalize)?;
            let out = open_output(output.as_ref())?;
            format::write_curve(out, &rows)?;
            Ok(())
        }
        Command::Verify {
            a,
            m,
            grid_n,
            output,
        } => {
            let rep = cmd_verify(a, m, grid_n)?;
            write_json(&report_json(&rep), output.as_ref())?;
            if rep.passed {
                Ok(())
            } else {
                Err(CliError::Failed(format!(
                    "numeric spectrum disagrees with the closed form beyond the h² error model \
                     (abs errors {:e}, {:e}; bounds {:e}, {:e}; nodes {:?}; overlap {:e}; order {})",
                    rep.abs_errors.0,
                    rep.abs_errors.1,
                    rep.error_bounds.0,
                    rep.error_bounds.1,
                    rep.node_counts,
                    rep.overlap_01,
                    rep.convergence_order
                )))
            }
        }
        Command::Normalize {
            spec,
            scale,
            output,
        } => write_json(&cmd_normalize(&spec, scale)?, output.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("anharm2d: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
