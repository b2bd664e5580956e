//! The `ptrig` command line: every library operation as a subcommand, with
//! JSON Lines or CSV on stdout (or `--out`).
//!
//! Exit codes: 0 success, 2 domain/validation error, 3 numerical failure.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fourier::{
    bound_check_lemma32, bound_check_lemma34, coeff_bound, compare_bounds_with,
    criterion_from_table, CoeffKind, CoeffTable,
};
use crate::operator::{
    expand_with, isometry_check, reconstruct_with, CosineVector, TruncatedBasisOp, ZeroTerm,
};
use crate::regularity::{bound_slope, report_from_table, SLOPE_SLACK};
use crate::thresholds::{solve_p0, solve_p1, zeta32_sandwich, RootResult};
use crate::trig::{v_p, EvalConfig, PExponent};

use config::ConfigFile;
use output::{floats, opt_float, Emission, Fields, OutputRecord};

pub const P0_REFERENCE: (f64, f64) = (1.458801, 5e-6);
pub const P1_REFERENCE: (f64, f64) = (2.42865, 5e-5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "ptrig",
    version,
    about = "Generalized p-trigonometric functions, Fourier coefficients and basis thresholds"
)]
pub struct Cli {
    /// Exponent p > 1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Largest coefficient index (J for criterion/regularity/bounds).
    #[arg(long, global = true)]
    pub jmax: Option<usize>,
    /// Relative tolerance of the p-sine evaluator.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key=value file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFn {
    #[value(name = "sin_p")]
    SinP,
    #[value(name = "cos_p")]
    CosP,
    #[value(name = "exp_p")]
    ExpP,
    #[value(name = "F_p")]
    FP,
    #[value(name = "u_p")]
    UP,
    #[value(name = "v_p")]
    VP,
    #[value(name = "dcos_p")]
    DcosP,
    #[value(name = "d2cos_p")]
    D2cosP,
}

impl EvalFn {
    fn name(self) -> &'static str {
        match self {
            EvalFn::SinP => "sin_p",
            EvalFn::CosP => "cos_p",
            EvalFn::ExpP => "exp_p",
            EvalFn::FP => "F_p",
            EvalFn::UP => "u_p",
            EvalFn::VP => "v_p",
            EvalFn::DcosP => "dcos_p",
            EvalFn::D2cosP => "d2cos_p",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// Sine coefficients a_j.
    A,
    /// Cosine coefficients b_j.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorAction {
    /// Coordinate list (k, n, value) of the truncated operator.
    Build,
    /// Column n against direct quadrature of cos_p(n π_p x).
    Reconstruct,
    /// Solve A c = fhat.
    Expand,
    /// L_s isometry of the dilation M_n.
    Isometry,
    /// Norm and condition estimate of the truncation.
    Condition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestFunction {
    X,
    X2,
    Cospi,
}

impl TestFunction {
    fn eval(self, x: f64) -> f64 {
        match self {
            TestFunction::X => x,
            TestFunction::X2 => x * x,
            TestFunction::Cospi => (std::f64::consts::PI * x).cos(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            TestFunction::X => "x",
            TestFunction::X2 => "x2",
            TestFunction::Cospi => "cospi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZeroArg {
    Unscaled,
    Halved,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function on a grid of points.
    Eval {
        #[arg(value_enum)]
        function: EvalFn,
        /// Points, comma separated or repeated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        /// Evenly spaced points `start:stop:count`, endpoints included.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Fourier coefficient table with error estimates and analytic bounds.
    Coeffs {
        #[arg(long, value_enum, default_value = "b")]
        kind: KindArg,
    },
    /// Basis criterion Σ_{j>=3}|b_j| < |b_1| with certified tail.
    Criterion,
    /// The sharper coefficient bounds next to the earlier ones.
    Bounds,
    /// The thresholds p0 and p1 and the zeta(3/2) sandwich.
    Thresholds,
    /// Sobolev partial sum and decay slope of the sine coefficients.
    Regularity {
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
    },
    /// The truncated change-of-basis operator.
    Operator {
        #[arg(long, value_enum, default_value = "build")]
        action: OperatorAction,
        /// Truncation size N.
        #[arg(long = "size", default_value_t = 32)]
        size: usize,
        /// Column for `reconstruct` (all columns if omitted).
        #[arg(long)]
        col: Option<usize>,
        /// Right-hand side for `expand`, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        fhat: Vec<f64>,
        /// Meaning of fhat[0].
        #[arg(long, value_enum, default_value = "unscaled")]
        zero_term: ZeroArg,
        /// Test function for `isometry`.
        #[arg(long, value_enum, default_value = "x")]
        g: TestFunction,
        /// Dilation factor n for `isometry`.
        #[arg(long, default_value_t = 2)]
        dilation: usize,
        /// Exponent s of L_s for `isometry`.
        #[arg(long, default_value_t = 2.0)]
        s: f64,
    },
}

/// Flags merged over the optional config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub p: Option<f64>,
    pub jmax: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub config: EvalConfig,
}

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mut config = EvalConfig::default();
        if let Some(v) = file.get("rel_tol")? {
            config.rel_tol = v;
        }
        if let Some(v) = file.get("abs_tol")? {
            config.abs_tol = v;
        }
        if let Some(v) = file.get("max_newton_iters")? {
            config.max_newton_iters = v;
        }
        if let Some(v) = file.get("quad_levels")? {
            config.quad_levels = v;
        }
        if let Some(v) = cli.tol.or(file.get("tol")?) {
            config.rel_tol = v;
        }
        config.validate()?;
        let format = match (cli.format, file.get_str("format")) {
            (Some(f), _) => f,
            (None, Some(s)) => Format::from_str(s, true)
                .map_err(|_| Error::domain(format!("config key format: unknown {s:?}")))?,
            (None, None) => Format::Json,
        };
        Ok(Self {
            p: cli.p.or(file.get("p")?),
            jmax: cli.jmax.or(file.get("jmax")?),
            format,
            out: cli.out.clone().or(file.get_str("out").map(PathBuf::from)),
            config,
        })
    }

    fn p(&self) -> Result<f64> {
        self.p
            .ok_or_else(|| Error::domain("this command needs --p (or p in the config file)"))
    }

    fn exponent(&self) -> Result<PExponent> {
        PExponent::with_config(self.p()?, self.config)
    }
}

/// `SOURCE_DATE_EPOCH` if set (reproducible runs), else the current time;
/// UTC, second resolution.
pub fn timestamp() -> Result<String> {
    use chrono::{DateTime, Utc};
    let when = match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(s) => {
            let secs: i64 = s.trim().parse().map_err(|_| {
                Error::domain(format!("SOURCE_DATE_EPOCH is not an integer: {s:?}"))
            })?;
            DateTime::<Utc>::from_timestamp(secs, 0)
                .ok_or_else(|| Error::domain("SOURCE_DATE_EPOCH out of range"))?
        }
        Err(_) => Utc::now(),
    };
    Ok(when.format("%Y-%m-%dT%H:%M:%SZ").to_string())
}

struct Recorder<'a> {
    command: &'static str,
    settings: &'a Settings,
    timestamp: String,
    records: Vec<OutputRecord>,
}

impl Recorder<'_> {
    fn push(&mut self, params: Fields, results: Fields) {
        self.records.push(OutputRecord {
            command: self.command.to_string(),
            params: params.into_map(),
            results: results.into_map(),
            config: self.settings.config,
            timestamp: self.timestamp.clone(),
        });
    }

    fn finish(self, columns: &[&str]) -> Emission {
        Emission {
            records: self.records,
            columns: columns.iter().map(|c| c.to_string()).collect(),
        }
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::domain(format!("--grid expects start:stop:count, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    match n {
        0 => Err(bad()),
        1 => Ok(vec![a]),
        _ => Ok((0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()),
    }
}

fn root_fields(r: &RootResult, reference: (f64, f64)) -> Fields {
    Fields::new()
        .f("root", r.root)
        .f("residual", r.residual)
        .f("bracket_lo", r.bracket.0)
        .f("bracket_hi", r.bracket.1)
        .v("iterations", r.iterations)
        .v("trace", floats(&r.trace))
        .v("within_window", (r.root - reference.0).abs() < reference.1)
}

fn odd_cutoff(jmax: usize) -> Result<usize> {
    if jmax < 3 || jmax.is_multiple_of(2) {
        return Err(Error::domain(format!("J must be odd and >= 3, got {jmax}")));
    }
    Ok(jmax)
}

fn execute(command: &Command, settings: &Settings) -> Result<Emission> {
    let name = match command {
        Command::Eval { .. } => "eval",
        Command::Coeffs { .. } => "coeffs",
        Command::Criterion => "criterion",
        Command::Bounds => "bounds",
        Command::Thresholds => "thresholds",
        Command::Regularity { .. } => "regularity",
        Command::Operator { .. } => "operator",
    };
    let mut rec = Recorder {
        command: name,
        settings,
        timestamp: timestamp()?,
        records: Vec::new(),
    };
    match command {
        Command::Eval { function, x, grid } => {
            let pe = settings.exponent()?;
            let mut points = x.clone();
            if let Some(spec) = grid {
                points.extend(parse_grid(spec)?);
            }
            if points.is_empty() {
                return Err(Error::domain("eval needs --x or --grid"));
            }
            for &x in &points {
                let params = Fields::new()
                    .v("function", function.name())
                    .f("p", pe.p())
                    .f("x", x);
                let results = match function {
                    EvalFn::SinP => Fields::new().f("value", pe.sin_p(x)?),
                    EvalFn::CosP => Fields::new().f("value", pe.cos_p(x)?),
                    EvalFn::ExpP => {
                        let z = pe.exp_p(x)?;
                        Fields::new().f("re", z.re).f("im", z.im)
                    }
                    EvalFn::FP => Fields::new().f("value", pe.incomplete_f(x)?),
                    EvalFn::UP => Fields::new().f("value", pe.u_p(x)?),
                    EvalFn::VP => Fields::new().f("value", v_p(x, pe.p())?),
                    EvalFn::DcosP => Fields::new().f("value", pe.dcos_p(x)?),
                    EvalFn::D2cosP => Fields::new().f("value", pe.d2cos_p(x)?),
                };
                rec.push(params, results);
            }
            let columns: &[&str] = if *function == EvalFn::ExpP {
                &["function", "p", "x", "re", "im"]
            } else {
                &["function", "p", "x", "value"]
            };
            Ok(rec.finish(columns))
        }
        Command::Coeffs { kind } => {
            let pe = settings.exponent()?;
            let kind = match kind {
                KindArg::A => CoeffKind::SineA,
                KindArg::B => CoeffKind::CosineB,
            };
            let table = CoeffTable::compute(&pe, kind, settings.jmax.unwrap_or(99))?;
            let kind_name = match kind {
                CoeffKind::SineA => "a",
                CoeffKind::CosineB => "b",
            };
            for (j, c) in table.iter() {
                rec.push(
                    Fields::new().f("p", pe.p()).v("kind", kind_name).v("j", j),
                    Fields::new()
                        .f("value", c.value)
                        .f("err_est", c.err_est)
                        .v("bound", opt_float(coeff_bound(pe.p(), kind, j)?)),
                );
            }
            Ok(rec.finish(&["j", "value", "err_est", "bound"]))
        }
        Command::Criterion => {
            let pe = settings.exponent()?;
            let cutoff = odd_cutoff(settings.jmax.unwrap_or(999))?;
            let table = CoeffTable::compute(&pe, CoeffKind::CosineB, cutoff)?;
            let r = criterion_from_table(&table)?;
            rec.push(
                Fields::new().f("p", r.p).v("J", r.cutoff),
                Fields::new()
                    .f("b1", r.b1)
                    .f("tail_computed", r.tail_computed)
                    .f("tail_remainder_bound", r.tail_remainder_bound)
                    .f("margin", r.margin)
                    .v("holds", r.holds)
                    .f("err_est", r.err_est)
                    .f("remainder_share", r.remainder_share()),
            );
            Ok(rec.finish(&[
                "p",
                "J",
                "b1",
                "tail_computed",
                "tail_remainder_bound",
                "margin",
                "holds",
                "err_est",
                "remainder_share",
            ]))
        }
        Command::Bounds => {
            let p = settings.p()?;
            let cutoff = odd_cutoff(settings.jmax.unwrap_or(999))?;
            let b = compare_bounds_with(p, cutoff)?;
            let slack = if p < 2.0 {
                Some(bound_check_lemma32(p, cutoff)?)
            } else if p > 2.0 {
                Some(bound_check_lemma34(p, cutoff)?)
            } else {
                None
            };
            rec.push(
                Fields::new().f("p", p).v("J", cutoff),
                Fields::new()
                    .f("tail_bound", b.tail_bound)
                    .f("prior_tail_bound", b.prior_tail_bound)
                    .f("b1_lower", b.b1_lower)
                    .f("prior_b1_lower", b.prior_b1_lower)
                    .f("tail_computed", b.tail_computed)
                    .f("b1_computed", b.b1_computed)
                    .v("tail_sharper", b.tail_sharper)
                    .v("b1_sharper", b.b1_sharper)
                    .v("worst_slack", opt_float(slack)),
            );
            Ok(rec.finish(&[
                "p",
                "J",
                "tail_bound",
                "prior_tail_bound",
                "b1_lower",
                "prior_b1_lower",
                "tail_computed",
                "b1_computed",
                "tail_sharper",
                "b1_sharper",
                "worst_slack",
            ]))
        }
        Command::Thresholds => {
            let p0 = solve_p0()?;
            let p1 = solve_p1()?;
            let z = zeta32_sandwich()?;
            for (name, r, reference) in [("p0", &p0, P0_REFERENCE), ("p1", &p1, P1_REFERENCE)] {
                rec.push(
                    Fields::new()
                        .v("quantity", name)
                        .f("reference", reference.0)
                        .f("window", reference.1),
                    root_fields(r, reference),
                );
            }
            rec.push(
                Fields::new().v("quantity", "zeta_3_2"),
                Fields::new()
                    .f("lower", z.lower)
                    .f("value", z.value)
                    .f("upper", z.upper)
                    .f("t0", z.t0),
            );
            let out = rec.finish(&[
                "quantity",
                "reference",
                "window",
                "root",
                "residual",
                "bracket_lo",
                "bracket_hi",
                "iterations",
                "within_window",
                "lower",
                "value",
                "upper",
                "t0",
                "trace",
            ]);
            for (r, (reference, window)) in [(&p0, P0_REFERENCE), (&p1, P1_REFERENCE)] {
                if (r.root - reference).abs() >= window {
                    return Err(Error::Convergence {
                        iterations: r.iterations,
                        residual: r.root - reference,
                    });
                }
            }
            Ok(out)
        }
        Command::Regularity { rho } => {
            let pe = settings.exponent()?;
            let table = CoeffTable::compute(&pe, CoeffKind::SineA, settings.jmax.unwrap_or(499))?;
            let r = report_from_table(&table, *rho)?;
            let limit = bound_slope(r.p).map(|s| s + SLOPE_SLACK);
            let consistent = match (r.slope_estimate, limit) {
                (Some(s), Some(l)) => Value::Bool(s <= l),
                _ => Value::Null,
            };
            rec.push(
                Fields::new().f("p", r.p).f("rho", r.rho).v("J", r.cutoff),
                Fields::new()
                    .f("partial_sum", r.partial_sum)
                    .v("slope_estimate", opt_float(r.slope_estimate))
                    .v("slope_limit", opt_float(limit))
                    .v("slope_consistent", consistent)
                    .v("r_threshold", opt_float(r.r_threshold)),
            );
            Ok(rec.finish(&[
                "p",
                "rho",
                "J",
                "partial_sum",
                "slope_estimate",
                "slope_limit",
                "slope_consistent",
                "r_threshold",
            ]))
        }
        Command::Operator {
            action,
            size,
            col,
            fhat,
            zero_term,
            g,
            dilation,
            s,
        } => {
            if *action == OperatorAction::Isometry {
                let err = isometry_check(|x| g.eval(x), *dilation, *s)?;
                rec.push(
                    Fields::new()
                        .v("action", "isometry")
                        .v("g", g.name())
                        .v("n", *dilation)
                        .f("s", *s),
                    Fields::new().f("relative_error", err),
                );
                return Ok(rec.finish(&["g", "n", "s", "relative_error"]));
            }
            let pe = settings.exponent()?;
            if *size < 2 {
                return Err(Error::domain(format!("N must be >= 2, got {size}")));
            }
            let table = CoeffTable::compute(&pe, CoeffKind::CosineB, size - 1)?;
            let op = TruncatedBasisOp::from_table(&table, *size)?;
            let base = |action: &str| {
                Fields::new()
                    .v("action", action.to_string())
                    .f("p", pe.p())
                    .v("N", *size)
            };
            match action {
                OperatorAction::Build => {
                    for (k, n, v) in op.triplets() {
                        rec.push(
                            base("build"),
                            Fields::new().v("k", k).v("n", n).f("value", v),
                        );
                    }
                    Ok(rec.finish(&["k", "n", "value"]))
                }
                OperatorAction::Reconstruct => {
                    let cols: Vec<usize> = match col {
                        Some(n) => vec![*n],
                        None => (0..*size).collect(),
                    };
                    for n in cols {
                        let dev = reconstruct_with(&op, &pe, n)?;
                        rec.push(
                            base("reconstruct").v("n", n),
                            Fields::new().f("max_abs_dev", dev),
                        );
                    }
                    Ok(rec.finish(&["p", "N", "n", "max_abs_dev"]))
                }
                OperatorAction::Expand => {
                    let zero = match zero_term {
                        ZeroArg::Unscaled => ZeroTerm::Unscaled,
                        ZeroArg::Halved => ZeroTerm::Halved,
                    };
                    let v = CosineVector::new(fhat.clone(), zero)
                        .map_err(|_| Error::domain("expand needs --fhat"))?;
                    let (c, residual) = expand_with(&op, &v)?;
                    rec.push(
                        base("expand").v(
                            "zero_term",
                            match zero {
                                ZeroTerm::Unscaled => "unscaled",
                                ZeroTerm::Halved => "halved",
                            },
                        ),
                        Fields::new()
                            .v("coeffs", floats(c.coeffs()))
                            .f("residual", residual),
                    );
                    Ok(rec.finish(&["p", "N", "coeffs", "residual"]))
                }
                OperatorAction::Condition => {
                    rec.push(
                        base("condition"),
                        Fields::new()
                            .f("norm1", op.norm1())
                            .f("condition_estimate", op.condition_estimate()?)
                            .v("nnz", op.nnz()),
                    );
                    Ok(rec.finish(&["p", "N", "norm1", "condition_estimate", "nnz"]))
                }
                OperatorAction::Isometry => unreachable!("handled above"),
            }
        }
    }
}

fn write_emission(
    emission: &Emission,
    settings: &Settings,
    stdout: &mut dyn Write,
) -> std::io::Result<()> {
    let mut buf = Vec::new();
    match settings.format {
        Format::Json => output::write_json_lines(&mut buf, emission)?,
        Format::Csv => output::write_csv(&mut buf, emission).map_err(std::io::Error::other)?,
    }
    match &settings.out {
        Some(path) => std::fs::write(path, buf),
        None => stdout.write_all(&buf),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = Settings::resolve(&cli).and_then(|settings| {
        let emission = execute(&cli.command, &settings)?;
        Ok((emission, settings))
    });
    match outcome {
        Ok((emission, settings)) => match write_emission(&emission, &settings, stdout) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                2
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
