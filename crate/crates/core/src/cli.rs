//! The `smd` command-line front end.
//!
//! Every command writes one document (JSON by default, CSV with `--format csv`) to standard
//! output or `--out`. Failures are reported on the error stream as
//! `{"error":{"kind":...,"message":...}}` with exit code 1 for domain and precondition
//! errors and 2 for usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{
    converge_report, localization_probe, simultaneous_fit, voronovskaja_fit, ExperimentReport,
    ExperimentSettings,
};
use crate::fexpr::FunctionSpec;
use crate::moments::{central_moment, moment, OperatorParams};
use crate::operator::{evaluate, evaluate_derivative, QuadratureConfig, DEFAULT_TAIL_TOL};
use crate::report::{self, Cell, Table};
use crate::diffop::simultaneous_coefficient;

#[derive(Debug, Parser)]
#[command(name = "smd", version, about = "Generalized Szász–Mirakjan–Durrmeyer operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate (S_{n,j} f)(x).
    Eval {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the m-th derivative (S_{n,j} f)^{(m)}(x).
    Deriv {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form moment (S_{n,j} e_r)(x).
    Moments {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form central moment S_{n,j}((t - x)^s)(x), split into main part and tail.
    CentralMoments {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        s: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Expansion coefficients c^{(m)}_{k,j}(f, x) for k = 0..=q.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Error against the modulus-of-continuity bound along an n grid.
    Converge {
        #[command(flatten)]
        grid: GridPoint,
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        output: Output,
    },
    /// Order fit of the expansion remainder after q terms (of the m-th derivative).
    Voronovskaja {
        #[command(flatten)]
        grid: GridPoint,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Relative tolerance for n^{q+1} R_q -> c_{q+1}.
        #[arg(long, default_value_t = 0.05)]
        stabilization_tol: f64,
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        output: Output,
    },
    /// Decay of S_{n,j} f(x) for f vanishing on (x - delta, x + delta).
    Localize {
        #[command(flatten)]
        grid: GridPoint,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
struct Point {
    #[arg(long)]
    n: f64,
    #[arg(long, allow_hyphen_values = true)]
    j: i64,
    #[arg(long)]
    x: f64,
}

#[derive(Debug, Args)]
struct GridPoint {
    /// `start:factor:count` (geometric), a comma list, or a single value.
    #[arg(long, value_parser = parse_grid)]
    n: NGrid,
    #[arg(long, allow_hyphen_values = true)]
    j: i64,
    #[arg(long)]
    x: f64,
}

#[derive(Debug, Args)]
struct FunctionArgs {
    /// `poly:a0,a1,...`, `expA:A`, or an expression in x.
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    /// Growth constant A in |f(t)| <= K e^{At} (expressions only).
    #[arg(long, default_value_t = 0.0)]
    growth_a: f64,
    /// Growth constant K in |f(t)| <= K e^{At} (expressions only).
    #[arg(long, default_value_t = 1.0)]
    growth_k: f64,
}

impl FunctionArgs {
    fn spec(&self) -> Result<FunctionSpec> {
        FunctionSpec::from_spec_str(&self.f, self.growth_a, self.growth_k)
    }
}

#[derive(Debug, Args)]
struct Numerics {
    /// Poisson mass allowed outside the series window.
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
    tol: f64,
    /// Relative tolerance of the inner quadrature.
    #[arg(long, default_value_t = QuadratureConfig::default().rel_tol)]
    quad_tol: f64,
}

impl Numerics {
    fn quad(&self) -> QuadratureConfig {
        QuadratureConfig { rel_tol: self.quad_tol, ..QuadratureConfig::default() }
    }

    fn settings(&self) -> ExperimentSettings {
        ExperimentSettings { quad: self.quad(), tail_tol: self.tol, ..ExperimentSettings::default() }
    }

    fn check(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Domain(format!("--tol must lie in (0, 1), got {}", self.tol)));
        }
        self.quad().validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the document to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
struct NGrid(Vec<f64>);

/// Parses `start:factor:count`, `a,b,c`, or a single number.
fn parse_grid(text: &str) -> std::result::Result<NGrid, String> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("invalid number `{s}` in n grid"));
    let values = if let Some((start, rest)) = text.split_once(':') {
        let (factor, count) = rest
            .split_once(':')
            .ok_or_else(|| format!("n grid `{text}` must have the form start:factor:count"))?;
        let (start, factor) = (num(start)?, num(factor)?);
        let count: usize = count.trim().parse().map_err(|_| format!("invalid count `{count}` in n grid"))?;
        if count == 0 || !(factor > 0.0) {
            return Err(format!("n grid `{text}` needs count >= 1 and factor > 0"));
        }
        (0..count).map(|i| start * factor.powi(i as i32)).collect()
    } else {
        text.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?
    };
    Ok(NGrid(values))
}

#[derive(Debug, Serialize)]
struct MomentRecord {
    r: u32,
    value: f64,
}

#[derive(Debug, Serialize)]
struct ErrorRecord<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Debug, Serialize)]
struct ErrorDocument<'a> {
    error: ErrorRecord<'a>,
}

/// A rendered output document.
struct Document {
    json: String,
    table: Table,
}

impl Document {
    fn new<T: Serialize + ?Sized>(value: &T, table: Table) -> Self {
        Self { json: report::to_json(value), table }
    }

    fn from_report(r: &ExperimentReport) -> Self {
        Self::new(r, report::report_table(r))
    }
}

fn execute(command: &Command) -> Result<(Document, &Output)> {
    match command {
        Command::Eval { point, function, numerics, output } => {
            numerics.check()?;
            let f = function.spec()?;
            let r = evaluate(OperatorParams::new(point.n, point.j)?, &f, point.x, &numerics.quad(), numerics.tol)?;
            Ok((Document::new(&r, report::eval_table(&r)), output))
        }
        Command::Deriv { point, m, function, numerics, output } => {
            numerics.check()?;
            let f = function.spec()?;
            let params = OperatorParams::new(point.n, point.j)?;
            let r = evaluate_derivative(params, &f, point.x, *m, &numerics.quad(), numerics.tol)?;
            Ok((Document::new(&r, report::eval_table(&r)), output))
        }
        Command::Moments { point, r, output } => {
            let value = moment(OperatorParams::new(point.n, point.j)?, *r, point.x)?;
            let table = Table {
                headers: vec!["r", "value"],
                rows: vec![vec![Cell::Int(i64::from(*r)), Cell::Num(value)]],
            };
            Ok((Document::new(&MomentRecord { r: *r, value }, table), output))
        }
        Command::CentralMoments { point, s, output } => {
            let c = central_moment(OperatorParams::new(point.n, point.j)?, *s, point.x)?;
            Ok((Document::new(&c, report::central_moment_table(&c)), output))
        }
        Command::Expand { j, x, q, m, function, output } => {
            let f = function.spec()?;
            let m = *m as usize;
            let terms = (0..=*q)
                .map(|k| simultaneous_coefficient(*j, k, m, &f.derivatives(*x, k + m, k + 1)?, *x))
                .collect::<Result<Vec<_>>>()?;
            Ok((Document::new(&terms, report::expansion_table(&terms)), output))
        }
        Command::Converge { grid, function, numerics, output } => {
            numerics.check()?;
            let f = function.spec()?;
            let r = converge_report(&f, grid.j, grid.x, &grid.n.0, &numerics.settings())?;
            Ok((Document::from_report(&r), output))
        }
        Command::Voronovskaja { grid, q, m, stabilization_tol, function, numerics, output } => {
            numerics.check()?;
            let f = function.spec()?;
            let settings = ExperimentSettings { stabilization_tol: *stabilization_tol, ..numerics.settings() };
            let r = if *m == 0 {
                voronovskaja_fit(&f, grid.j, grid.x, *q, &grid.n.0, &settings)?
            } else {
                simultaneous_fit(&f, grid.j, grid.x, *m, *q, &grid.n.0, &settings)?
            };
            Ok((Document::from_report(&r), output))
        }
        Command::Localize { grid, delta, function, numerics, output } => {
            numerics.check()?;
            let g = function.spec()?;
            let r = localization_probe(&g, grid.x, *delta, grid.j, &grid.n.0, &numerics.settings())?;
            Ok((Document::from_report(&r), output))
        }
    }
}

fn emit_error(stderr: &mut dyn Write, kind: &str, message: String) {
    let doc = ErrorDocument { error: ErrorRecord { kind, message } };
    let _ = stderr.write_all(report::to_json(&doc).as_bytes());
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    emit_error(stderr, "usage", e.render().to_string().trim_end().to_string());
                    2
                }
            };
        }
    };

    let (doc, output) = match execute(&cli.command) {
        Ok(done) => done,
        Err(e) => {
            emit_error(stderr, e.kind(), e.to_string());
            return 1;
        }
    };

    let text = match output.format {
        Format::Json => doc.json,
        Format::Csv => match doc.table.to_csv() {
            Ok(t) => t,
            Err(e) => {
                emit_error(stderr, e.kind(), e.to_string());
                return 1;
            }
        },
    };
    let written = match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    match written {
        Ok(()) => 0,
        Err(message) => {
            emit_error(stderr, "io", message);
            1
        }
    }
}
