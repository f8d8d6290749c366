use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use soliton_core::catalog::{
    catalog_get, catalog_list, compile_unvalidated, load_file, read_spec, shipped_source, CatalogEntry,
    CatalogError,
};
use soliton_core::report::{crosscheck, Report};
use soliton_core::ricci_flow::{
    conserved_quantities, format_float, integrate, write_csv, ClosedForm, FlowState, IntegrateOptions,
    SystemKind, Trajectory,
};

const EXIT_FAIL: u8 = 1;
const EXIT_TRUNCATED: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Significant digits for floating-point output.
const DIGITS_VAR: &str = "SOLITON_FLOAT_DIGITS";
const DEFAULT_DIGITS: usize = 12;

#[derive(Parser)]
#[command(name = "soliton", version, about = "Exact verification of left-invariant metrics on 3-dimensional Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Print the shipped catalog ids, one per line.
    List {
        /// Keep ids containing this substring.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Verify every claim of a catalog entry or a model file.
    Report {
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        id: Option<String>,
        /// Model document in the catalog format.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Integrate the Ricci flow of diag(A, B, ±C) on the Heisenberg group and write a CSV.
    #[command(allow_negative_numbers = true)]
    Flow {
        /// riemannian-forward, riemannian-backward or lorentz-forward.
        #[arg(long)]
        system: String,
        #[arg(long = "A0", default_value_t = 1.0)]
        a0: f64,
        #[arg(long = "B0", default_value_t = 1.0)]
        b0: f64,
        #[arg(long = "C0", default_value_t = 1.0)]
        c0: f64,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long = "t-end")]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write every n-th grid point (the last one is always written).
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// Halve a step while its relative change exceeds this threshold.
        #[arg(long)]
        halving: Option<f64>,
    },
    /// Compare every quantity that has two independent computations.
    Crosscheck {
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        id: Option<String>,
        /// Model document; checked without the validation gate.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the model document of a shipped entry.
    Export { id: String },
}

/// Failure carrying its exit code.
struct Exit(u8, String);

impl Exit {
    fn usage(msg: impl ToString) -> Exit {
        Exit(EXIT_USAGE, msg.to_string())
    }
}

impl From<CatalogError> for Exit {
    fn from(e: CatalogError) -> Exit {
        match e {
            CatalogError::Invalid { .. } => Exit(EXIT_FAIL, e.to_string()),
            _ => Exit::usage(e),
        }
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Exit {
        Exit(EXIT_FAIL, e.to_string())
    }
}

fn digits() -> Result<usize, Exit> {
    match std::env::var(DIGITS_VAR) {
        Err(_) => Ok(DEFAULT_DIGITS),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(d) if (1..=17).contains(&d) => Ok(d),
            _ => Err(Exit::usage(format!("{DIGITS_VAR} must be an integer in 1..=17, got `{v}`"))),
        },
    }
}

fn entry(id: Option<&str>, file: Option<&Path>) -> Result<CatalogEntry, Exit> {
    match (id, file) {
        (_, Some(path)) => Ok(load_file(path)?),
        (Some(id), None) => Ok(catalog_get(id)?),
        (None, None) => Err(Exit::usage("an id or --file is required")),
    }
}

fn json_error(e: serde_json::Error) -> Exit {
    Exit(EXIT_FAIL, e.to_string())
}

fn cmd_list(filter: Option<&str>, out: &mut impl Write) -> Result<u8, Exit> {
    for id in catalog_list() {
        if filter.is_none_or(|f| id.contains(f)) {
            writeln!(out, "{id}")?;
        }
    }
    Ok(0)
}

fn cmd_report(id: Option<&str>, file: Option<&Path>, format: Format, out: &mut impl Write) -> Result<u8, Exit> {
    let report = Report::build(&entry(id, file)?);
    match format {
        Format::Text => write!(out, "{}", report.to_text())?,
        Format::Structured => writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(json_error)?)?,
    }
    Ok(report.exit_code() as u8)
}

fn cmd_crosscheck(id: Option<&str>, file: Option<&Path>, format: Format, out: &mut impl Write) -> Result<u8, Exit> {
    let entry = match (id, file) {
        (_, Some(path)) => compile_unvalidated(read_spec(path)?)?,
        _ => entry(id, None)?,
    };
    let cc = crosscheck(&entry);
    match format {
        Format::Text => write!(out, "{}", cc.to_text())?,
        Format::Structured => writeln!(out, "{}", serde_json::to_string_pretty(&cc).map_err(json_error)?)?,
    }
    if let Some(first) = cc.checks.iter().find(|c| !c.passed) {
        eprintln!("crosscheck failed: {}: {}", first.name, first.detail);
        return Ok(EXIT_FAIL);
    }
    Ok(0)
}

/// Largest relative deviation of any component from the closed form.
fn closed_form_error(traj: &Trajectory, cf: &ClosedForm) -> f64 {
    traj.states
        .iter()
        .filter_map(|s| cf.state(s.t).map(|exact| (s.abc(), exact)))
        .flat_map(|(got, exact)| (0..3).map(move |i| ((got[i] - exact[i]) / exact[i]).abs()))
        .fold(0.0, f64::max)
}

fn flow_summary(traj: &Trajectory, t_end: f64, digits: usize) -> Vec<String> {
    let f = |x: f64| format_float(x, digits);
    let initial = traj.states[0];
    let last = traj.last();
    let cons = conserved_quantities(traj);
    let mut lines = vec![format!(
        "{}: {} steps, t = {} .. {} (requested {}), final A={}, B={}, C={}",
        traj.kind,
        traj.steps,
        f(initial.t),
        f(last.t),
        f(t_end),
        f(last.a),
        f(last.b),
        f(last.c)
    )];
    let cf = ClosedForm::new(traj.kind, initial).expect("validated initial state");
    lines.push(format!(
        "drift AB {}, AC {}; max relative error vs closed form {}; ABC {}",
        f(cons.max_drift_ab),
        f(cons.max_drift_ac),
        f(closed_form_error(traj, &cf)),
        match (cons.volume_monotone, traj.kind.volume_sign() > 0.0) {
            _ if traj.states.len() < 2 => "unchanged (single state)",
            (true, true) => "strictly increasing",
            (true, false) => "strictly decreasing",
            (false, _) => "not monotone",
        }
    ));
    let (lo, hi) = cf.interval();
    let end = |x: f64| if x.is_infinite() { format!("{}inf", if x < 0.0 { "-" } else { "+" }) } else { f(x) };
    lines.push(format!("closed-form existence interval ({}, {})", end(lo), end(hi)));
    for e in &traj.events {
        lines.push(format!("truncated: {e}"));
    }
    lines
}

#[allow(clippy::too_many_arguments)]
fn cmd_flow(
    system: &str,
    initial: FlowState,
    t_end: f64,
    dt: f64,
    out: Option<&Path>,
    stride: usize,
    halving: Option<f64>,
    stdout: &mut impl Write,
) -> Result<u8, Exit> {
    let kind: SystemKind = system.parse().map_err(Exit::usage)?;
    if stride == 0 {
        return Err(Exit::usage("--stride must be at least 1"));
    }
    if let Some(h) = halving {
        if !(h.is_finite() && h > 0.0) {
            return Err(Exit::usage(format!("--halving must be positive, got {h}")));
        }
    }
    let digits = digits()?;
    let opts = IntegrateOptions {
        halving_threshold: halving,
        ..IntegrateOptions::default()
    };
    let traj = integrate(kind, initial, t_end, dt, &opts).map_err(Exit::usage)?;
    let summary = flow_summary(&traj, t_end, digits);
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Exit(EXIT_FAIL, format!("cannot write {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_csv(&traj, &mut w, stride, digits)?;
            w.flush()?;
            for line in &summary {
                writeln!(stdout, "{line}")?;
            }
        }
        None => {
            write_csv(&traj, stdout, stride, digits)?;
            for line in &summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(if traj.truncated() { EXIT_TRUNCATED } else { 0 })
}

fn run(cli: Cli) -> Result<u8, Exit> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::List { filter } => cmd_list(filter.as_deref(), &mut out),
        Command::Report { id, file, format } => cmd_report(id.as_deref(), file.as_deref(), format, &mut out),
        Command::Crosscheck { id, file, format } => cmd_crosscheck(id.as_deref(), file.as_deref(), format, &mut out),
        Command::Flow {
            system,
            a0,
            b0,
            c0,
            t0,
            t_end,
            dt,
            out: path,
            stride,
            halving,
        } => cmd_flow(
            &system,
            FlowState::new(t0, a0, b0, c0),
            t_end,
            dt,
            path.as_deref(),
            stride,
            halving,
            &mut out,
        ),
        Command::Export { id } => {
            write!(out, "{}", shipped_source(&id)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
