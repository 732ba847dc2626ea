//! The `hutchlab` command: gallery export, analysis runs and report replay.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hutchlab::attractor::attraction_profile;
use hutchlab::rational::{parse_rational, to_f64};
use hutchlab::{
    analyze, build_gallery, gallery_entry, replay_report, AnalysisParams, AnalysisReport, Check, Error, Format,
    Rational, SystemSpec, DEFAULT_MAX_CELLS,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

/// Environment variable capping the number of cells of any space built.
pub const MAX_CELLS_VAR: &str = "HUTCHLAB_MAX_CELLS";

/// Checks run when neither `--checks` nor the system file's expectations
/// name any.
const DEFAULT_CHECKS: [Check; 4] = [Check::Attractor, Check::Physical, Check::Exactness, Check::Mixing];

#[derive(Debug, Parser)]
#[command(name = "hutchlab", version, about = "Cell-resolution analysis of iterated function systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Built-in example systems.
    #[command(subcommand)]
    Gallery(GalleryCommand),
    /// Run checks on a system file or gallery entry and write a report.
    Analyze(AnalyzeArgs),
    /// Recompute every record of a report and compare.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum GalleryCommand {
    /// Print the available entries.
    List,
    /// Write an entry as a system file (`.json` for JSON, TOML otherwise).
    Export { id: String, file: PathBuf },
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// A system file, or `gallery:<id>`.
    #[arg(long)]
    system: String,
    /// Comma-separated checks; defaults to the file's expectations.
    #[arg(long)]
    checks: Option<String>,
    /// Override the resolution; grid-dependent parameters from the file are
    /// dropped in favor of defaults for the new grid.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, value_parser = rational_arg)]
    delta: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    basis_radius: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    tolerance: Option<Rational>,
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write `i,d_H` rows of the worst singleton attraction trace.
    #[arg(long)]
    trace_csv: Option<PathBuf>,
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text)
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::TooManyCells { .. } => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

fn io_failure(path: &Path, err: std::io::Error) -> Failure {
    Failure::usage(format!("{}: {err}", path.display()))
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn max_cells() -> Result<usize, Failure> {
    match std::env::var(MAX_CELLS_VAR) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{MAX_CELLS_VAR} must be a cell count, got `{text}`"))),
        Err(_) => Ok(DEFAULT_MAX_CELLS),
    }
}

fn dispatch(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Gallery(GalleryCommand::List) => {
            let mut out = String::new();
            for entry in build_gallery() {
                let _ = writeln!(
                    out,
                    "{:<18} {:<6} {:>5}  {}",
                    entry.id,
                    entry.spec.space.kind.name(),
                    entry.spec.space.resolution,
                    entry.summary
                );
            }
            print!("{out}");
            Ok(EXIT_OK)
        }
        Command::Gallery(GalleryCommand::Export { id, file }) => {
            let entry = gallery_entry(&id).ok_or_else(|| Failure::from(Error::UnknownGalleryEntry(id)))?;
            let text = entry.spec.render(Format::from_path(&file));
            fs::write(&file, text).map_err(|e| io_failure(&file, e))?;
            Ok(EXIT_OK)
        }
        Command::Analyze(args) => analyze_cmd(args),
        Command::Verify { report } => verify_cmd(&report),
    }
}

fn load_system(source: &str) -> Result<(String, SystemSpec), Failure> {
    if let Some(id) = source.strip_prefix("gallery:") {
        let entry = gallery_entry(id).ok_or_else(|| Failure::from(Error::UnknownGalleryEntry(id.into())))?;
        return Ok((entry.id.to_string(), entry.spec));
    }
    let path = Path::new(source);
    let spec = SystemSpec::load(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let id = spec
        .name
        .clone()
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| source.to_string());
    Ok((id, spec))
}

fn analyze_cmd(args: AnalyzeArgs) -> Result<u8, Failure> {
    let cap = max_cells()?;
    let (id, spec) = load_system(&args.system)?;
    let system = spec.build(args.resolution, cap)?;

    let file_params = match args.resolution {
        Some(r) if r != spec.space.resolution => spec.analysis.without_grid_terms(),
        _ => spec.analysis.clone(),
    };
    let cli_params = AnalysisParams {
        horizon: args.horizon,
        basis_radius: args.basis_radius,
        tolerance: args.tolerance,
        delta: args.delta,
        rng_seed: args.rng_seed,
        ..Default::default()
    };
    let params = file_params.overlay(&cli_params).resolve(system.space())?;

    let checks = match &args.checks {
        Some(list) => Check::parse_list(list)?,
        None if !spec.expected.is_empty() => spec.expected.keys().copied().collect(),
        None => DEFAULT_CHECKS.to_vec(),
    };

    let report = analyze(&id, &system, &checks, &params, &spec.expected)?;
    let json = report.to_json();
    match &args.out {
        Some(path) => {
            fs::write(path, &json).map_err(|e| io_failure(path, e))?;
            print!("{}", summary(&report));
        }
        None => {
            print!("{json}");
            eprint!("{}", summary(&report));
        }
    }

    if let Some(path) = &args.trace_csv {
        let rel = system.hutchinson()?;
        let profile = attraction_profile(&rel, params.horizon)?;
        let mut csv = String::with_capacity(profile.len() * 20);
        for (i, d) in profile.iter().enumerate() {
            let value = d.map_or_else(|| "nan".to_string(), |d| significant(to_f64(d), 12));
            let _ = writeln!(csv, "{i},{value}");
        }
        fs::write(path, csv).map_err(|e| io_failure(path, e))?;
    }

    let mismatched = report.mismatches().count() > 0;
    Ok(if mismatched { EXIT_MISMATCH } else { EXIT_OK })
}

fn summary(report: &AnalysisReport) -> String {
    let mut out = format!(
        "{} at resolution {} ({} cells), horizon {}\n",
        report.system_id, report.resolution, report.cell_count, report.horizon
    );
    for rec in &report.records {
        let expected = match rec.expected {
            Some(v) if v == rec.verdict => " (as expected)".to_string(),
            Some(v) => format!(" (EXPECTED {v})"),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "  {:<18} {:<22}{expected}  {:.1} ms",
            rec.property.name(),
            rec.verdict.as_str(),
            rec.wall_time_ms
        );
    }
    out
}

fn verify_cmd(path: &Path) -> Result<u8, Failure> {
    let cap = max_cells()?;
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let report: AnalysisReport = serde_json::from_str(&text).map_err(|e| {
        Failure::usage(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let mismatches = replay_report(&report, cap)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if mismatches.is_empty() {
        let _ = writeln!(out, "{}: {} records reproduce", report.system_id, report.records.len());
        Ok(EXIT_OK)
    } else {
        for m in &mismatches {
            let _ = writeln!(out, "mismatch: {m}");
        }
        Ok(EXIT_MISMATCH)
    }
}

/// Decimal rendering with `digits` significant digits.
fn significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}
