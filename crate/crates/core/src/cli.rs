//! Command-line front end: `eval`, `scan` and `table`.
//!
//! Exit codes: 0 success or passing scan, 1 scan found violations,
//! 2 usage or domain error, 3 tolerance unreachable.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analytic;
use crate::domain::{AnglePoint, EvalPoint, EvalResult, Tolerance};
use crate::error::Error;
use crate::quadrature;
use crate::series;
use crate::verify::{self, Report, ScanGrid, DEFAULT_INSET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

/// Header of `table` CSV output.
pub const TABLE_HEADER: &str = "var,r,value,error_bound,route";

#[derive(Debug, Parser)]
#[command(
    name = "fcseries",
    version,
    about = "Evaluate and verify the alternating Chebyshev cosine series f(x, r)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate f at a single point.
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// Run a consistency, monotonicity, inequality or identity scan.
    #[command(allow_negative_numbers = true)]
    Scan(ScanArgs),
    /// Emit f, df/dx or the margin over a grid.
    #[command(allow_negative_numbers = true)]
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long = "out")]
    out: Option<PathBuf>,
    /// Significant decimal digits, 1 to 17.
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Series,
    Quad,
    Closed,
    Auto,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, conflicts_with = "phi", required_unless_present = "phi")]
    x: Option<f64>,
    /// Angle in radians (degrees with --degrees).
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long, requires = "phi")]
    degrees: bool,
    #[arg(long)]
    r: f64,
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    route: RouteArg,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    var_min: Option<f64>,
    #[arg(long)]
    var_max: Option<f64>,
    #[arg(long)]
    var_count: Option<usize>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    r_count: Option<usize>,
    /// Distance kept from the open ends of the domain.
    #[arg(long)]
    inset: Option<f64>,
}

impl GridArgs {
    fn any(&self) -> bool {
        self.var_min.is_some()
            || self.var_max.is_some()
            || self.var_count.is_some()
            || self.r_min.is_some()
            || self.r_max.is_some()
            || self.r_count.is_some()
            || self.inset.is_some()
    }

    /// `base` with any flags given on the command line applied over it.
    fn over(&self, base: ScanGrid) -> Result<ScanGrid, Error> {
        let vars = base.var_values();
        let rs = base.r_values();
        ScanGrid::new(
            base.var_kind(),
            self.var_min.unwrap_or(vars[0]),
            self.var_max.unwrap_or(vars[vars.len() - 1]),
            self.var_count.unwrap_or(base.var_count()),
            self.r_min.unwrap_or(rs[0]),
            self.r_max.unwrap_or(rs[rs.len() - 1]),
            self.r_count.unwrap_or(base.r_count()),
            self.inset.unwrap_or(DEFAULT_INSET),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanKind {
    Consistency,
    Monotonicity,
    Inequality,
    Identity,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    kind: ScanKind,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Surface {
    F,
    Dfdx,
    Margin,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    surface: Surface,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Rounds to `digits` significant digits and prints the shortest decimal
/// that reads back to the rounded value.
pub fn format_number(v: f64, digits: u8) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    format!("{:?}", round_sig(v, digits))
}

fn round_sig(v: f64, digits: u8) -> f64 {
    if !v.is_finite() {
        return v;
    }
    let d = usize::from(digits.clamp(1, 17)) - 1;
    format!("{v:.d$e}").parse().unwrap_or(v)
}

fn json_number(v: f64, digits: u8) -> Value {
    serde_json::Number::from_f64(round_sig(v, digits)).map_or(Value::Null, Value::Number)
}

fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::ToleranceUnreachable(_) => EXIT_TOLERANCE,
        _ => EXIT_USAGE,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `out` (or the `--out` file) and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (result, output) = match &cli.command {
        Command::Eval(a) => (cmd_eval(a), &a.output),
        Command::Scan(a) => (cmd_scan(a), &a.output),
        Command::Table(a) => (cmd_table(a), &a.output),
    };
    match result {
        Ok((code, text)) => {
            let written = match &output.out {
                Some(path) => fs::write(path, text.as_bytes())
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_USAGE
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

type Outcome = Result<(i32, String), Failure>;

fn tolerance(v: f64) -> Result<Tolerance, Error> {
    Tolerance::new(v)
}

fn cmd_eval(a: &EvalArgs) -> Outcome {
    let tol = tolerance(a.tol)?;
    let phi = a.phi.map(|p| if a.degrees { p.to_radians() } else { p });
    let (point, angle) = match phi {
        Some(phi) => {
            let angle = AnglePoint::new(phi, a.r)?;
            (angle.to_eval_point()?, Some(angle))
        }
        None => (EvalPoint::new(a.x.unwrap_or(f64::NAN), a.r)?, None),
    };
    let res = match (a.route, angle) {
        (RouteArg::Series, Some(angle)) => series::fourier_series(angle, tol)?,
        (RouteArg::Series, None) => series::f_series(point, tol)?,
        (RouteArg::Quad, _) => quadrature::f_quad(point, tol)?,
        (RouteArg::Closed, _) => analytic::f_closed(point)?,
        (RouteArg::Auto, _) => verify::dispatch_eval(point, tol)?,
    };
    let digits = a.output.precision;
    let n = |v: f64| format_number(v, digits);
    let text = match a.output.format.unwrap_or(Format::Plain) {
        Format::Plain => {
            let mut s = String::new();
            if let Some(phi) = phi {
                s.push_str(&format!("phi: {}\n", n(phi)));
            }
            s.push_str(&format!(
                "x: {}\nr: {}\nvalue: {}\nerror_bound: {}\nroute: {}\nwork: {}\n",
                n(point.x()),
                n(point.r()),
                n(res.value),
                n(res.error_bound),
                res.route,
                res.work
            ));
            s
        }
        Format::Csv => {
            let header = ["x", "r", "value", "error_bound", "route", "work"].map(String::from);
            csv_text([
                header,
                [
                    n(point.x()),
                    n(point.r()),
                    n(res.value),
                    n(res.error_bound),
                    res.route.to_string(),
                    res.work.to_string(),
                ],
            ])
        }
        Format::Json => {
            let mut v = json!({
                "x": json_number(point.x(), digits),
                "r": json_number(point.r(), digits),
                "value": json_number(res.value, digits),
                "error_bound": json_number(res.error_bound, digits),
                "route": res.route.as_str(),
                "work": res.work,
                "rigorous": res.rigorous,
            });
            if let Some(phi) = phi {
                v["phi"] = json_number(phi, digits);
            }
            to_json(&v)
        }
    };
    Ok((EXIT_OK, text))
}

fn csv_text<R, I>(records: R) -> String
where
    R: IntoIterator<Item = I>,
    I: IntoIterator,
    I::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    for record in records {
        w.write_record(record).expect("writing csv to memory");
    }
    let bytes = w.into_inner().expect("flushing csv to memory");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn scan_grid(kind: ScanKind, grid: &GridArgs) -> Result<ScanGrid, Error> {
    let base = match kind {
        ScanKind::Consistency => ScanGrid::consistency_default(),
        ScanKind::Monotonicity => ScanGrid::monotonicity_default(),
        ScanKind::Inequality => ScanGrid::inequality_default(),
        ScanKind::Identity => verify::identity_grid(),
    };
    if grid.any() {
        grid.over(base)
    } else {
        Ok(base)
    }
}

fn cmd_scan(a: &ScanArgs) -> Outcome {
    let tol = tolerance(a.tol)?;
    if a.kind == ScanKind::Identity && a.grid.any() {
        return Err(Error::InvalidGrid("the identity scan uses a fixed grid".into()).into());
    }
    let grid = scan_grid(a.kind, &a.grid)?;
    let report = match a.kind {
        ScanKind::Consistency => verify::consistency_scan(&grid, tol)?,
        ScanKind::Monotonicity => verify::monotonicity_scan(&grid, tol)?,
        ScanKind::Inequality => verify::inequality_scan(&grid, tol)?,
        ScanKind::Identity => verify::identity_scan(tol)?,
    };
    let text = render_report(&report, a.output.format.unwrap_or(Format::Csv), a.output.precision);
    let code = if report.passed() { EXIT_OK } else { EXIT_VIOLATIONS };
    Ok((code, text))
}

/// Renders a report. Wall-clock time is left out so output is reproducible.
pub fn render_report(report: &Report, format: Format, digits: u8) -> String {
    let n = |v: f64| format_number(v, digits);
    match format {
        Format::Csv => {
            let header = [
                "kind",
                "pass",
                "points_checked",
                "violations",
                "min_margin",
                "worst_var",
                "worst_r",
            ]
            .map(String::from);
            csv_text([
                header,
                [
                    report.kind.as_str().to_string(),
                    report.passed().to_string(),
                    report.points_checked.to_string(),
                    report.violations.len().to_string(),
                    n(report.min_margin),
                    n(report.worst_point.var),
                    n(report.worst_point.r),
                ],
            ])
        }
        Format::Json => {
            let violations: Vec<Value> = report
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "point": {
                            "var": json_number(v.point.var, digits),
                            "r": json_number(v.point.r, digits),
                        },
                        "check": v.check,
                        "observed": json_number(v.observed, digits),
                        "bound": json_number(v.bound, digits),
                    })
                })
                .collect();
            to_json(&json!({
                "kind": report.kind.as_str(),
                "pass": report.passed(),
                "points_checked": report.points_checked,
                "violations": violations,
                "min_margin": json_number(report.min_margin, digits),
                "worst_point": {
                    "var": json_number(report.worst_point.var, digits),
                    "r": json_number(report.worst_point.r, digits),
                },
            }))
        }
        Format::Plain => {
            let mut s = format!(
                "kind: {}\npass: {}\npoints_checked: {}\nviolations: {}\nmin_margin: {}\nworst_point: var = {}, r = {}\n",
                report.kind.as_str(),
                report.passed(),
                report.points_checked,
                report.violations.len(),
                n(report.min_margin),
                n(report.worst_point.var),
                n(report.worst_point.r),
            );
            for v in &report.violations {
                s.push_str(&format!(
                    "  {} at var = {}, r = {}: observed {} against bound {}\n",
                    v.check,
                    n(v.point.var),
                    n(v.point.r),
                    n(v.observed),
                    n(v.bound)
                ));
            }
            s
        }
    }
}

fn cmd_table(a: &TableArgs) -> Outcome {
    let tol = tolerance(a.tol)?;
    let base = match a.surface {
        Surface::F | Surface::Dfdx => ScanGrid::consistency_default(),
        Surface::Margin => ScanGrid::inequality_default(),
    };
    let grid = if a.grid.any() { a.grid.over(base)? } else { base };
    let surface = a.surface;
    let rows = grid
        .points()
        .par_iter()
        .map(|&(v, r)| {
            table_row(surface, v, r, tol).map(|res| (v, r, res)).map_err(|e| e.at_point(v, r))
        })
        .collect::<Vec<Result<_, Error>>>()
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()?;

    let digits = a.output.precision;
    let n = |v: f64| format_number(v, digits);
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|(v, r, res)| {
                    json!({
                        "var": json_number(*v, digits),
                        "r": json_number(*r, digits),
                        "value": json_number(res.value, digits),
                        "error_bound": json_number(res.error_bound, digits),
                        "route": res.route.as_str(),
                    })
                })
                .collect();
            to_json(&Value::Array(arr))
        }
        // plain output is the CSV table
        Format::Csv | Format::Plain => {
            let header = TABLE_HEADER.split(',').map(String::from).collect::<Vec<_>>();
            let body = rows.iter().map(|(v, r, res)| {
                vec![n(*v), n(*r), n(res.value), n(res.error_bound), res.route.to_string()]
            });
            csv_text(std::iter::once(header).chain(body))
        }
    };
    Ok((EXIT_OK, text))
}

fn table_row(surface: Surface, var: f64, r: f64, tol: Tolerance) -> Result<EvalResult, Error> {
    match surface {
        Surface::F => verify::dispatch_eval(EvalPoint::new(var, r)?, tol),
        Surface::Dfdx => quadrature::dfdx_quad(EvalPoint::new(var, r)?, tol),
        Surface::Margin => {
            let inner = verify::dispatch_eval(AnglePoint::new(var, r)?.to_eval_point()?, tol)?;
            let top = analytic::f_at_one_eval(r)?;
            Ok(EvalResult {
                value: top.value - inner.value,
                error_bound: top.error_bound + inner.error_bound,
                ..inner
            })
        }
    }
}
