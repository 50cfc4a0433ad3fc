//! `omgbh`: classification, capacity reports, region scans, a↔c mapping tables
//! and Fock-oracle verification for the black hole channel.

pub mod records;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use omgbh_core::{
    a_params, capacity_report_with_tol, run_verification, BlackHoleParams, Error, LogBase,
    MapPreset, Suite, VerifyConfig, DEFAULT_TOL,
};
use rayon::prelude::*;

use records::{
    fmt_f64, fmt_opt, grid_points, keep_in_strip, write_csv, write_json_rows, MapRecord,
    PointRecord, Window, MAP_HEADER, SCAN_HEADER,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_NOT_CP: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_IO: u8 = 74;

#[derive(Debug, Parser)]
#[command(name = "omgbh", version, about = "One-mode Gaussian channels of an evaporating black hole")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionFilter {
    All,
    BlackHoleStrip,
}

#[derive(Debug, Clone, Args)]
pub struct Numerics {
    /// Logarithm base of entropic quantities.
    #[arg(long, env = "OMGBH_DEFAULT_BASE", default_value = "2", value_parser = parse_base)]
    pub base: LogBase,
    /// Tolerance for rank, boundary and complete-positivity tests.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

fn parse_base(s: &str) -> Result<LogBase, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_preset(s: &str) -> Result<MapPreset, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a channel given by (tau, y) or by black hole parameters (r, s).
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        r: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        s: Option<f64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Quantum-capacity report for a channel point.
    Capacity {
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Classify every point of a (tau, y) grid.
    Scan {
        /// Points per axis.
        #[arg(long, default_value_t = 300)]
        grid: usize,
        /// tau_min,tau_max,y_min,y_max
        #[arg(long, default_value = "0,3,0,3", allow_hyphen_values = true)]
        window: Window,
        #[arg(long, value_enum, default_value = "all")]
        region_filter: RegionFilter,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Map outgoing-channel points to the channel across the horizon, for both branches.
    Map {
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
        /// Sample grid: fig5 (35 points) or fig6 (25 points).
        #[arg(long, value_parser = parse_preset)]
        preset: Option<MapPreset>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Compare the closed forms with a truncated Fock-space computation.
    Verify {
        /// bogoliubov, channel, entropy or all.
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        cutoff: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Random parameter points on top of the fixed ones.
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    NotCp(String),
    Io(String),
    Verify,
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::NotCp(_) => EXIT_NOT_CP,
            Self::Io(_) => EXIT_IO,
            Self::Verify | Self::Internal(_) => EXIT_VERIFY_FAILED,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotCompletelyPositive { .. } | Error::ParamsNotCompletelyPositive { .. } => {
                Self::NotCp(e.to_string())
            }
            Error::InvalidArgument(_) | Error::DimensionTooLarge { .. } => Self::Usage(e.to_string()),
            other => Self::Internal(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

/// Run the CLI with explicit streams; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Usage(m) => {
                    let _ = writeln!(err, "error: {m}");
                }
                Failure::NotCp(m) if m.contains("completely positive") => {
                    let _ = writeln!(err, "error: {m}");
                }
                Failure::NotCp(m) => {
                    let _ = writeln!(err, "error: not completely positive: {m}");
                }
                Failure::Io(m) => {
                    let _ = writeln!(err, "error: I/O failure: {m}");
                }
                Failure::Internal(m) => {
                    let _ = writeln!(err, "error: {m}");
                }
                Failure::Verify => {}
            }
            f.code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Classify { tau, y, r, s, format, numerics } => {
            cmd_classify(tau, y, r, s, format, &numerics, out)
        }
        Command::Capacity { tau, y, format, numerics } => cmd_capacity(tau, y, format, &numerics, out),
        Command::Scan { grid, window, region_filter, output, format, numerics } => {
            cmd_scan(grid, &window, region_filter, output, format, &numerics, out)
        }
        Command::Map { tau, y, preset, output, format, tol } => cmd_map(tau, y, preset, output, format, tol, out),
        Command::Verify { suite, cutoff, seed, draws, format } => {
            cmd_verify(suite, cutoff, seed, draws, format, out, err)
        }
    }
}

fn cmd_classify(
    tau: Option<f64>,
    y: Option<f64>,
    r: Option<f64>,
    s: Option<f64>,
    format: Format,
    numerics: &Numerics,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let (point, rs) = match (tau, y, r, s) {
        (Some(tau), Some(y), None, None) => ((tau, y), None),
        (None, None, Some(r), Some(s)) => {
            let p = BlackHoleParams::new(r, s)?;
            (a_params(&p), Some((r, s)))
        }
        _ => {
            return Err(Failure::Usage(
                "provide exactly one of --tau/--y or --r/--s".into(),
            ))
        }
    };
    let rec = PointRecord::evaluate(point.0, point.1, numerics.base, numerics.tol)?;
    if !rec.cp {
        return Err(Failure::NotCp(format!(
            "y = {} < |tau - 1| = {} at tau = {}",
            fmt_f64(rec.y),
            fmt_f64((rec.tau - 1.0).abs()),
            fmt_f64(rec.tau)
        )));
    }
    match format {
        Format::Csv => write_csv(&mut *out, &SCAN_HEADER, std::iter::once(rec.csv_fields()))?,
        Format::Json => {
            let mut v = rec.to_json();
            if let Some((r, s)) = rs {
                v["r"] = records::json_f64(r);
                v["s"] = records::json_f64(s);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))?;
        }
        Format::Text => {
            if let Some((r, s)) = rs {
                writeln!(out, "r: {}\ns: {}", fmt_f64(r), fmt_f64(s))?;
            }
            let f = rec.csv_fields();
            for (name, value) in SCAN_HEADER.iter().zip(&f) {
                writeln!(out, "{name}: {value}")?;
            }
            writeln!(out, "exact_value: {}", fmt_opt(rec.exact_value))?;
        }
    }
    Ok(())
}

fn cmd_capacity(tau: f64, y: f64, format: Format, numerics: &Numerics, out: &mut dyn Write) -> Result<(), Failure> {
    if !tau.is_finite() || !y.is_finite() {
        return Err(Failure::Usage(format!("non-finite point ({tau}, {y})")));
    }
    let report = capacity_report_with_tol(tau, y, numerics.base, numerics.tol)?;
    match format {
        Format::Json => {
            let v = serde_json::json!({
                "tau": records::json_f64(report.tau),
                "y": records::json_f64(report.y),
                "base": report.base.to_string(),
                "status": report.status.to_string(),
                "K": records::json_f64(report.k),
                "coh_info_limit": records::json_opt(report.coh_info_limit),
                "lower_bound": records::json_f64(report.lower_bound),
                "exact_value": records::json_opt(report.exact_value),
                "notes": report.notes,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))?;
        }
        Format::Text | Format::Csv => {
            if format == Format::Csv {
                return Err(Failure::Usage("capacity supports --format text or json".into()));
            }
            writeln!(out, "tau: {}", fmt_f64(report.tau))?;
            writeln!(out, "y: {}", fmt_f64(report.y))?;
            writeln!(out, "base: {}", report.base)?;
            writeln!(out, "status: {}", report.status)?;
            writeln!(out, "K: {}", fmt_f64(report.k))?;
            writeln!(out, "coh_info_limit: {}", fmt_opt(report.coh_info_limit))?;
            writeln!(out, "lower_bound: {}", fmt_f64(report.lower_bound))?;
            writeln!(out, "exact_value: {}", fmt_opt(report.exact_value))?;
            for note in &report.notes {
                writeln!(out, "note: {note}")?;
            }
        }
    }
    Ok(())
}

fn open_output<'a>(path: Option<PathBuf>, out: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, Failure> {
    match path {
        Some(p) => {
            let f = File::create(&p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(out)),
    }
}

fn table_format(format: Format) -> Result<Format, Failure> {
    if format == Format::Text {
        Err(Failure::Usage("tables support --format csv or json".into()))
    } else {
        Ok(format)
    }
}

fn cmd_scan(
    grid: usize,
    window: &Window,
    filter: RegionFilter,
    output: Option<PathBuf>,
    format: Format,
    numerics: &Numerics,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let format = table_format(format)?;
    if grid < 2 {
        return Err(Failure::Usage(format!("--grid must be >= 2, got {grid}")));
    }
    let points: Vec<(f64, f64)> = grid_points(window, grid)
        .into_iter()
        .filter(|&(t, y)| filter == RegionFilter::All || keep_in_strip(t, y))
        .collect();
    let rows: Vec<PointRecord> = points
        .par_iter()
        .map(|&(t, y)| PointRecord::evaluate(t, y, numerics.base, numerics.tol))
        .collect::<Result<_, _>>()?;
    let mut sink = open_output(output, out)?;
    match format {
        Format::Json => write_json_rows(&mut sink, rows.iter().map(PointRecord::to_json))?,
        _ => write_csv(&mut sink, &SCAN_HEADER, rows.iter().map(PointRecord::csv_fields))?,
    }
    sink.flush()?;
    Ok(())
}

fn cmd_map(
    tau: Option<f64>,
    y: Option<f64>,
    preset: Option<MapPreset>,
    output: Option<PathBuf>,
    format: Format,
    tol: f64,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let format = table_format(format)?;
    let points = match (tau, y, preset) {
        (Some(t), Some(y), None) => vec![(t, y)],
        (None, None, Some(p)) => p.points(),
        _ => return Err(Failure::Usage("provide either --tau and --y, or --preset".into())),
    };
    let rows: Vec<MapRecord> = points.iter().map(|&(t, y)| MapRecord::evaluate(t, y, tol)).collect();
    let mut sink = open_output(output, out)?;
    match format {
        Format::Json => write_json_rows(&mut sink, rows.iter().map(MapRecord::to_json))?,
        _ => write_csv(&mut sink, &MAP_HEADER, rows.iter().map(MapRecord::csv_fields))?,
    }
    sink.flush()?;
    Ok(())
}

fn cmd_verify(
    suite: Suite,
    cutoff: usize,
    seed: u64,
    draws: usize,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let cfg = VerifyConfig { suite, cutoff, seed, draws, ..Default::default() };
    let report = run_verification(&cfg)?;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?,
        Format::Text => {
            for check in &report.checks {
                writeln!(out, "{check}")?;
            }
            writeln!(
                out,
                "suite={} cutoff={} seed={} checks={} max_covariance_residual={:.3e} max_coh_info_residual={:.3e} elapsed={:.2}s result={}",
                suite,
                cutoff,
                seed,
                report.checks.len(),
                report.max_covariance_residual,
                report.max_coh_info_residual,
                report.elapsed_seconds,
                if report.passed { "PASS" } else { "FAIL" }
            )?;
        }
        Format::Csv => return Err(Failure::Usage("verify supports --format text or json".into())),
    }
    if report.passed {
        Ok(())
    } else {
        writeln!(err, "failing cases:")?;
        for check in report.failures() {
            writeln!(err, "  {check}")?;
        }
        Err(Failure::Verify)
    }
}
