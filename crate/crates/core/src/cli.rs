//! Command-line front end. Exit codes: 0 success, 1 usage or validation
//! error, 2 numerical failure, 3 I/O error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use crate::error::{Error, Result};
use crate::io::config::{read_config_file, Job, RunConfig};
use crate::io::csv::{generator_line, sweep_table, threshold_table, CsvTable};
use crate::io::verify::verify_all;
use crate::sweep::{find_threshold, run_sweep};

#[derive(Debug, Parser)]
#[command(name = "mixspin", version, about = "Thermal negativity of mixed spin-1/2 / spin-1 Heisenberg rings")]
struct Args {
    /// sweep-temp, sweep-field, sweep-j2, grid, threshold or verify
    command: Option<String>,
    /// Flat key=value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of sites
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    j1: Option<String>,
    #[arg(long)]
    j2: Option<String>,
    /// Longitudinal field
    #[arg(long)]
    b: Option<String>,
    /// Fixed temperature for coupling sweeps and thresholds
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    tmin: Option<String>,
    #[arg(long)]
    tmax: Option<String>,
    #[arg(long)]
    bmin: Option<String>,
    #[arg(long)]
    bmax: Option<String>,
    #[arg(long)]
    j2min: Option<String>,
    #[arg(long)]
    j2max: Option<String>,
    /// Points per axis; `AxB` for grids (j2 by temperature)
    #[arg(long)]
    steps: Option<String>,
    /// Comma-separated: half_one, half_half, one_one or site pairs like 0-3
    #[arg(long)]
    pairs: Option<String>,
    /// Threshold search parameter: t, b or j2
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    lo: Option<String>,
    #[arg(long)]
    hi: Option<String>,
    /// first or last sign change in the threshold scan
    #[arg(long)]
    crossing: Option<String>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    threads: Option<String>,
    /// Output CSV path
    #[arg(long)]
    out: Option<String>,
}

impl Args {
    fn flag_entries(self) -> (Option<PathBuf>, BTreeMap<String, String>) {
        let pairs = [
            ("command", self.command),
            ("n", self.n),
            ("j1", self.j1),
            ("j2", self.j2),
            ("b", self.b),
            ("t", self.t),
            ("tmin", self.tmin),
            ("tmax", self.tmax),
            ("bmin", self.bmin),
            ("bmax", self.bmax),
            ("j2min", self.j2min),
            ("j2max", self.j2max),
            ("steps", self.steps),
            ("pairs", self.pairs),
            ("param", self.param),
            ("lo", self.lo),
            ("hi", self.hi),
            ("crossing", self.crossing),
            ("threads", self.threads),
            ("out", self.out),
        ];
        let entries = pairs
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect();
        (self.config, entries)
    }
}

/// Result of argument parsing: either a run, or text clap wants printed
/// (help, version) with its exit status.
#[derive(Debug)]
pub enum Parsed {
    Run(Box<RunConfig>),
    Exit { message: String, code: i32 },
}

pub fn parse_args<I, T>(argv: I) -> Result<Parsed>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return Ok(Parsed::Exit {
                message: e.render().to_string(),
                code,
            });
        }
    };
    let (config_path, flags) = args.flag_entries();
    let mut entries = match config_path {
        Some(path) => read_config_file(&path)?,
        None => BTreeMap::new(),
    };
    entries.extend(flags);
    Ok(Parsed::Run(Box::new(RunConfig::from_entries(entries)?)))
}

fn comments(cfg: &RunConfig) -> Vec<String> {
    std::iter::once(generator_line()).chain(cfg.echo_lines()).collect()
}

fn write_or_print(table: &CsvTable, cfg: &RunConfig) -> Result<()> {
    match &cfg.out {
        Some(path) => table.write(path),
        None => {
            print!("{}", table.render()?);
            Ok(())
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<()> {
    match &cfg.job {
        Job::Sweep(req) => {
            let result = run_sweep(req)?;
            write_or_print(&sweep_table(&result, comments(cfg)), cfg)?;
            eprintln!("{} rows", result.rows.len());
        }
        Job::Threshold(req) => {
            let result = find_threshold(req)?;
            write_or_print(&threshold_table(req, &result, comments(cfg)), cfg)?;
            match result.value {
                Some(v) => eprintln!("{} threshold {v}", result.parameter),
                None => eprintln!("no threshold in [{}, {}]", req.lo, req.hi),
            }
        }
        Job::Verify(opts) => {
            let report = verify_all(opts)?;
            write_or_print(&report.table(comments(cfg)), cfg)?;
            for s in report.summary() {
                let status = if s.failures == 0 { "pass" } else { "FAIL" };
                eprintln!("{status} {:<32} rows={:<4} max|diff|={:.3e}", s.check, s.rows, s.max_abs_diff);
            }
            if !report.all_passed() {
                return Err(Error::Numerical(format!("{} verification rows failed", report.failures().len())));
            }
        }
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn with_threads(threads: Option<usize>, f: impl FnOnce() -> Result<()> + Send) -> Result<()> {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config("threads", e.to_string()))?
            .install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads(_threads: Option<usize>, f: impl FnOnce() -> Result<()> + Send) -> Result<()> {
    f()
}

/// Parses, runs and reports; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = parse_args(argv).and_then(|parsed| match parsed {
        Parsed::Exit { message, code } => {
            if code == 0 {
                print!("{message}");
            } else {
                eprint!("{message}");
            }
            Ok(code)
        }
        Parsed::Run(cfg) => with_threads(cfg.threads, || execute(&cfg)).map(|_| 0),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
