//! Command-line front end: radii, sweep tables, certification reports and
//! asymptotic constants as JSON, CSV or plain text.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::asymptotics::{
    asymptotic_report, classical_envelopes, lower_bound_terms, upper_envelope,
};
use crate::cesaro::{s_alpha_majorant, CesaroContext};
use crate::error::BohrError;
use crate::radius::{
    cesaro_radius, closed_form_radius, general_radius, ClosedForm, RadiusOutcome, RadiusProblem,
};
use crate::specfun::DEFAULT_TOLERANCE;
use crate::verify::{certify_radius, CertificationGrid};
use crate::weights::WeightFamily;

/// Exit code for bad flags or parameters outside a function's domain.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for numerical failures.
pub const EXIT_FAILURE: i32 = 1;

/// Significant digits of numbers in CSV and plain output.
pub const SIGNIFICANT_DIGITS: usize = 15;

#[derive(Debug, Parser)]
#[command(
    name = "bohr-lab",
    version,
    about = "Bohr radii, Cesàro-operator majorants and sharpness checks"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Absolute tolerance for series and root solves.
    #[arg(long, global = true, env = "BOHR_LAB_TOLERANCE")]
    pub tolerance: Option<f64>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal positive root of the radius equation for one weight family.
    Radius(FamilyArgs),
    /// Sweep a quantity over a grid of p, alpha or r values.
    Table(TableArgs),
    /// Check the inequality below the radius and look for a violation above it.
    Verify(VerifyArgs),
    /// The asymptotic constant and the convergence of the lower-bound profile.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Monomial,
    Shifted,
    Power,
    Hypergeom,
    Cesaro,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Exponent of the power family or order of the Cesàro family.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// radius of --family over a p grid
    Radius,
    /// Cesàro radius over an alpha grid
    CesaroRadius,
    /// closed form of --kind next to the solver, over a p grid
    ClosedForm,
    /// S_alpha(r) over an r grid
    SAlpha,
    /// (alpha+1) Phi(r,1,alpha+1) over an r grid
    LerchMajorant,
    /// upper, Bombieri and Bombieri–Bourgain envelopes over an r grid
    Envelopes,
    /// scaled lower-bound profile over an r grid
    Profile,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub quantity: Quantity,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub step: f64,
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, value_enum)]
    pub kind: Option<ClosedFormKind>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClosedFormKind {
    R1,
    R2,
    R3,
}

impl From<ClosedFormKind> for ClosedForm {
    fn from(k: ClosedFormKind) -> Self {
        match k {
            ClosedFormKind::R1 => ClosedForm::R1,
            ClosedFormKind::R2 => ClosedForm::R2,
            ClosedFormKind::R3 => ClosedForm::R3,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random Schur samples checked below the radius.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Number of r values in (0, R].
    #[arg(long, default_value_t = 20)]
    pub below_points: usize,
    /// Largest j in the violation search over a = 1 − 2^−j.
    #[arg(long, default_value_t = 20)]
    pub max_j: u32,
}

#[derive(Debug, Clone, Args)]
pub struct AsymptoticsArgs {
    /// Radii at which the profile is tabulated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.9, 0.99, 0.999, 0.9999])]
    pub r: Vec<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(BohrError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

impl From<BohrError> for CliError {
    fn from(e: BohrError) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Numeric(e)
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// A numeric table; `None` marks a cell with no value (e.g. no root).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Map<String, Value>,
    /// Flat key/value results; nested structures use dotted keys.
    pub results: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

/// Flattens nested objects into dotted keys. Arrays are kept as values.
pub fn flatten(value: &Value) -> Map<String, Value> {
    fn go(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    go(&key, x, out);
                }
            }
            other => {
                out.insert(prefix.to_string(), other.clone());
            }
        }
    }
    let mut out = Map::new();
    go("", value, &mut out);
    out
}

/// `x` with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.prec$e}", prec = SIGNIFICANT_DIGITS - 1)
    }
}

fn format_value(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format_number(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl OutputRecord {
    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.render_csv(),
            Format::Plain => Ok(self.render_plain()),
        }
    }

    fn render_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.columns)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(|c| c.map(format_number).unwrap_or_default()))?;
                }
            }
            None => {
                w.write_record(self.results.keys())?;
                w.write_record(self.results.values().map(format_value))?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn render_plain(&self) -> String {
        let mut s = format!("# {}\n", self.command);
        for (k, v) in &self.parameters {
            s.push_str(&format!("# {k} = {}\n", format_value(v)));
        }
        for (k, v) in &self.results {
            s.push_str(&format!("{k} = {}\n", format_value(v)));
        }
        if let Some(t) = &self.table {
            s.push_str(&t.columns.join("\t"));
            s.push('\n');
            for row in &t.rows {
                let cells: Vec<String> = row
                    .iter()
                    .map(|c| c.map(format_number).unwrap_or_else(|| "-".into()))
                    .collect();
                s.push_str(&cells.join("\t"));
                s.push('\n');
            }
        }
        s
    }
}

fn family_from(
    name: FamilyName,
    alpha: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
) -> CliResult<WeightFamily> {
    let abc_given = a.is_some() || b.is_some() || c.is_some();
    match name {
        FamilyName::Monomial | FamilyName::Shifted => {
            if alpha.is_some() || abc_given {
                return usage(
                    "--alpha, --a, --b and --c do not apply to the monomial and shifted families",
                );
            }
            Ok(if name == FamilyName::Monomial {
                WeightFamily::monomial()
            } else {
                WeightFamily::shifted_monomial()
            })
        }
        FamilyName::Power | FamilyName::Cesaro => {
            if abc_given {
                return usage("--a, --b and --c only apply to --family hypergeom");
            }
            let Some(alpha) = alpha else {
                return usage("--alpha is required for the power and cesaro families");
            };
            Ok(if name == FamilyName::Power {
                WeightFamily::power(alpha)?
            } else {
                WeightFamily::cesaro(alpha)?
            })
        }
        FamilyName::Hypergeom => {
            if alpha.is_some() {
                return usage("--alpha does not apply to --family hypergeom");
            }
            match (a, b, c) {
                (Some(a), Some(b), Some(c)) => Ok(WeightFamily::hypergeometric(a, b, c)?),
                _ => usage("--family hypergeom needs --a, --b and --c"),
            }
        }
    }
}

impl FamilyArgs {
    fn family(&self) -> CliResult<WeightFamily> {
        family_from(self.family, self.alpha, self.a, self.b, self.c)
    }

    fn parameters(&self, w: &WeightFamily) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("family".into(), json!(w.label()));
        m.insert("p".into(), json!(self.p));
        m
    }
}

fn resolve_tolerance(t: Option<f64>) -> CliResult<f64> {
    let tol = t.unwrap_or(DEFAULT_TOLERANCE);
    if tol > 0.0 && tol < 1.0 {
        Ok(tol)
    } else {
        usage(format!("tolerance must lie in (0, 1), got {tol}"))
    }
}

fn outcome_results(out: &RadiusOutcome) -> Map<String, Value> {
    flatten(&serde_json::to_value(out).expect("plain data"))
}

fn cmd_radius(args: &FamilyArgs, tol: f64) -> CliResult<OutputRecord> {
    let w = args.family()?;
    let prob = RadiusProblem::with_tolerance(w, args.p, tol)?;
    let out = general_radius(&prob)?;
    let mut parameters = args.parameters(&w);
    parameters.insert("tolerance".into(), json!(tol));
    Ok(OutputRecord {
        command: "radius".into(),
        parameters,
        results: outcome_results(&out),
        table: None,
    })
}

/// from, from + step, … up to `to` (inclusive, with a small slack).
pub fn grid(from: f64, to: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0 && step.is_finite() && from.is_finite() && to.is_finite()) {
        return usage("--step must be positive and the range finite");
    }
    if to < from {
        return usage(format!("empty grid: --from {from} exceeds --to {to}"));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| from + i as f64 * step).collect())
}

fn require_alpha(args: &TableArgs) -> CliResult<f64> {
    args.alpha.ok_or_else(|| {
        CliError::Usage(format!(
            "--alpha is required for --quantity {:?}",
            args.quantity
        ))
    })
}

type Row = Vec<Option<f64>>;

fn sweep<F>(xs: &[f64], f: F) -> CliResult<Vec<Row>>
where
    F: Fn(f64) -> CliResult<Row> + Sync,
{
    xs.par_iter().map(|&x| f(x)).collect()
}

fn root_cells(out: &RadiusOutcome) -> [Option<f64>; 2] {
    match out.root() {
        Some(r) => [Some(r.radius), Some(r.residual)],
        None => [None, None],
    }
}

fn cmd_table(args: &TableArgs, tol: f64) -> CliResult<OutputRecord> {
    let xs = grid(args.from, args.to, args.step)?;
    let mut parameters = Map::new();
    parameters.insert("quantity".into(), json!(format!("{:?}", args.quantity)));
    parameters.insert("from".into(), json!(args.from));
    parameters.insert("to".into(), json!(args.to));
    parameters.insert("step".into(), json!(args.step));
    parameters.insert("tolerance".into(), json!(tol));

    let cols = |c: &[&str]| c.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let (columns, rows) = match args.quantity {
        Quantity::Radius => {
            let Some(name) = args.family else {
                return usage("--family is required for --quantity radius");
            };
            let w = family_from(name, args.alpha, args.a, args.b, args.c)?;
            parameters.insert("family".into(), json!(w.label()));
            let rows = sweep(&xs, |p| {
                let out = general_radius(&RadiusProblem::with_tolerance(w, p, tol)?)?;
                let [r, res] = root_cells(&out);
                Ok(vec![Some(p), r, res])
            })?;
            (cols(&["p", "radius", "residual"]), rows)
        }
        Quantity::CesaroRadius => {
            let rows = sweep(&xs, |alpha| {
                let root = cesaro_radius(alpha, tol)?;
                Ok(vec![Some(alpha), Some(root.radius), Some(root.residual)])
            })?;
            (cols(&["alpha", "radius", "residual"]), rows)
        }
        Quantity::ClosedForm => {
            let Some(kind) = args.kind else {
                return usage("--kind is required for --quantity closed-form");
            };
            let kind = ClosedForm::from(kind);
            parameters.insert("kind".into(), json!(kind));
            let rows = sweep(&xs, |p| {
                let exact = closed_form_radius(kind, p)?;
                let out = general_radius(&RadiusProblem::with_tolerance(kind.family(), p, tol)?)?;
                let solved = out.root().map(|r| r.radius);
                Ok(vec![
                    Some(p),
                    Some(exact),
                    solved,
                    solved.map(|s| s - exact),
                ])
            })?;
            (cols(&["p", "closed_form", "solver", "difference"]), rows)
        }
        Quantity::SAlpha => {
            let alpha = require_alpha(args)?;
            parameters.insert("alpha".into(), json!(alpha));
            let rows = sweep(&xs, |r| {
                let s = s_alpha_majorant(alpha, r, tol)?;
                Ok(vec![Some(r), Some(s.value), Some(s.error_bound)])
            })?;
            (cols(&["r", "s_alpha", "error_bound"]), rows)
        }
        Quantity::LerchMajorant => {
            let alpha = require_alpha(args)?;
            parameters.insert("alpha".into(), json!(alpha));
            let ctx = CesaroContext::new(alpha, 0)?;
            let rows = sweep(&xs, |r| {
                let m = ctx.lerch_majorant(r, tol)?;
                Ok(vec![Some(r), Some(m.value), Some(m.error_bound)])
            })?;
            (cols(&["r", "lerch_majorant", "error_bound"]), rows)
        }
        Quantity::Envelopes => {
            let flag = |b: bool| Some(if b { 1.0 } else { 0.0 });
            let rows = sweep(&xs, |r| {
                let e = classical_envelopes(r)?;
                Ok(vec![
                    Some(r),
                    Some(upper_envelope(r)?),
                    Some(e.bombieri.value),
                    flag(e.bombieri.in_range),
                    Some(e.bombieri_bourgain.value),
                    flag(e.bombieri_bourgain.in_range),
                ])
            })?;
            (
                cols(&[
                    "r",
                    "upper",
                    "bombieri",
                    "bombieri_in_range",
                    "bombieri_bourgain",
                    "bombieri_bourgain_in_range",
                ]),
                rows,
            )
        }
        Quantity::Profile => {
            let rows = sweep(&xs, |r| {
                let t = lower_bound_terms(r, tol)?;
                let s = (1.0 - r).sqrt();
                Ok(vec![
                    Some(r),
                    Some(t.value().value * s),
                    Some(t.leading.value * s),
                    Some(t.subtracted.value * s),
                ])
            })?;
            (
                cols(&["r", "scaled_profile", "scaled_leading", "scaled_subtracted"]),
                rows,
            )
        }
    };
    let mut results = Map::new();
    results.insert("rows".into(), json!(rows.len()));
    Ok(OutputRecord {
        command: "table".into(),
        parameters,
        results,
        table: Some(Table { columns, rows }),
    })
}

fn cmd_verify(args: &VerifyArgs, tol: f64) -> CliResult<OutputRecord> {
    let w = args.family.family()?;
    let p = args.family.p;
    let out = general_radius(&RadiusProblem::with_tolerance(w, p, tol)?)?;
    let Some(root) = out.root() else {
        return usage(format!("{} with p = {p} has no radius below 1", w.label()));
    };
    let grid = CertificationGrid {
        below_points: args.below_points.max(1),
        schur_samples: args.samples,
        seed: args.seed,
        max_j: args.max_j,
        tolerance: tol,
        ..CertificationGrid::default()
    };
    let report = certify_radius(&w, p, root.radius, &grid)?;
    let mut parameters = args.family.parameters(&w);
    parameters.insert("seed".into(), json!(args.seed));
    parameters.insert("tolerance".into(), json!(tol));
    let mut results = flatten(&serde_json::to_value(&report).expect("plain data"));
    if report.violation.is_none() {
        results.insert("violation".into(), json!("none found"));
    }
    Ok(OutputRecord {
        command: "verify".into(),
        parameters,
        results,
        table: None,
    })
}

fn cmd_asymptotics(args: &AsymptoticsArgs, tol: f64) -> CliResult<OutputRecord> {
    let report = asymptotic_report(&args.r, tol)?;
    let mut results = Map::new();
    results.insert("q".into(), json!(report.q));
    results.insert("q_residual".into(), json!(report.q_residual));
    results.insert("lower_constant".into(), json!(report.lower_constant));
    results.insert(
        "secondary_constant".into(),
        json!(report.secondary_constant),
    );
    let rows = report
        .profile
        .iter()
        .map(|p| {
            vec![
                Some(p.r),
                Some(p.scaled_profile),
                Some(p.scaled_leading),
                Some(p.scaled_subtracted),
                Some(p.upper_envelope),
            ]
        })
        .collect();
    let mut parameters = Map::new();
    parameters.insert("r".into(), json!(args.r));
    parameters.insert("tolerance".into(), json!(tol));
    Ok(OutputRecord {
        command: "asymptotics".into(),
        parameters,
        results,
        table: Some(Table {
            columns: [
                "r",
                "scaled_profile",
                "scaled_leading",
                "scaled_subtracted",
                "upper_envelope",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            rows,
        }),
    })
}

/// Runs a parsed command and returns its record.
pub fn execute(cli: &Cli) -> CliResult<OutputRecord> {
    let tol = resolve_tolerance(cli.tolerance)?;
    match &cli.command {
        Command::Radius(a) => cmd_radius(a, tol),
        Command::Table(a) => cmd_table(a, tol),
        Command::Verify(a) => cmd_verify(a, tol),
        Command::Asymptotics(a) => cmd_asymptotics(a, tol),
    }
}

/// Parses `args`, runs the command and renders it. Clap's own errors map
/// to [`EXIT_USAGE`].
pub fn run<I, T>(args: I) -> CliResult<String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    execute(&cli)?.render(cli.format)
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let rendered = execute(&cli).and_then(|rec| rec.render(cli.format));
    let text = match rendered {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}
