//! Run configuration from flat `key=value` text and command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::verify::VerifyOptions;
use crate::model::ModelSpec;
use crate::sweep::{Axis, Crossing, PairSelector, Parameter, SweepRequest, ThresholdRequest};

/// Every recognised key, in echo order.
pub const KEYS: &[&str] = &[
    "command", "n", "j1", "j2", "b", "t", "tmin", "tmax", "bmin", "bmax", "j2min", "j2max", "steps", "pairs", "param", "lo",
    "hi", "crossing", "threads", "out",
];

const DEFAULT_STEPS: usize = 100;
const DEFAULT_GRID_STEPS: usize = 80;
const DEFAULT_VERIFY_SITES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SweepTemp,
    SweepField,
    SweepJ2,
    Grid,
    Threshold,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SweepTemp => "sweep-temp",
            Command::SweepField => "sweep-field",
            Command::SweepJ2 => "sweep-j2",
            Command::Grid => "grid",
            Command::Threshold => "threshold",
            Command::Verify => "verify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Command::SweepTemp,
            Command::SweepField,
            Command::SweepJ2,
            Command::Grid,
            Command::Threshold,
            Command::Verify,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| Error::config("command", format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Sweep(SweepRequest),
    Threshold(ThresholdRequest),
    Verify(VerifyOptions),
}

/// A validated run. The raw entries are kept so the configuration can be
/// echoed into output files and parsed back.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub job: Job,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    entries: BTreeMap<String, String>,
}

/// Parses flat `key=value` text. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut entries = BTreeMap::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        insert_line(&mut entries, line)?;
    }
    Ok(entries)
}

fn insert_line(entries: &mut BTreeMap<String, String>, line: &str) -> Result<()> {
    let (key, value) = line
        .split_once('=')
        .ok_or_else(|| Error::config(line, "expected key=value"))?;
    let key = key.trim().to_ascii_lowercase();
    if !KEYS.contains(&key.as_str()) {
        return Err(Error::config(key, "unknown key"));
    }
    entries.insert(key, value.trim().to_string());
    Ok(())
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_text(&text)
}

/// Recovers the entries echoed into the `# key=value` comment lines of an
/// output file. The generator line is not a configuration key and is skipped.
pub fn entries_from_comments(text: &str) -> Result<BTreeMap<String, String>> {
    let mut entries = BTreeMap::new();
    for line in text.lines() {
        let Some(comment) = line.strip_prefix('#') else {
            continue;
        };
        let comment = comment.trim();
        if comment.starts_with("generator=") {
            continue;
        }
        insert_line(&mut entries, comment)?;
    }
    Ok(entries)
}

/// Typed access to raw entries; every error names its key.
struct Entries<'a>(&'a BTreeMap<String, String>);

impl Entries<'_> {
    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::config(key, format!("cannot parse `{v}`")))
            })
            .transpose()
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        match self.get::<f64>(key)? {
            Some(v) if !v.is_finite() => Err(Error::config(key, "must be finite")),
            v => Ok(v),
        }
    }

    fn require<T>(&self, key: &str, value: Option<T>) -> Result<T> {
        value.ok_or_else(|| Error::config(key, format!("missing required key for `{}`", self.0["command"])))
    }
}

fn parse_steps(raw: Option<&String>, dims: usize) -> Result<Vec<usize>> {
    let Some(raw) = raw else {
        let default = if dims == 2 { DEFAULT_GRID_STEPS } else { DEFAULT_STEPS };
        return Ok(vec![default; dims]);
    };
    let parts: Vec<usize> = raw
        .split('x')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::config("steps", format!("cannot parse `{raw}`")))?;
    match (parts.len(), dims) {
        (1, _) => Ok(vec![parts[0]; dims]),
        (2, 2) => Ok(parts),
        _ => Err(Error::config("steps", format!("expected {dims} step count(s), got `{raw}`"))),
    }
}

fn axis(parameter: Parameter, min: f64, max: f64, steps: usize, keys: (&str, &str)) -> Result<Axis> {
    Axis::new(parameter, min, max, steps).map_err(|e| match e {
        Error::InvalidSweep(reason) if steps >= 2 => Error::config(format!("{}/{}", keys.0, keys.1), reason),
        Error::InvalidSweep(reason) => Error::config("steps", reason),
        other => other,
    })
}

impl RunConfig {
    pub fn from_entries(entries: BTreeMap<String, String>) -> Result<Self> {
        if let Some(key) = entries.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::config(key.clone(), "unknown key"));
        }
        let e = Entries(&entries);
        let command: Command = e
            .0
            .get("command")
            .ok_or_else(|| Error::config("command", "missing command"))?
            .parse()?;

        // Parse everything present first, so malformed values are reported
        // before anything else.
        let n: Option<usize> = e.get("n")?;
        let j1 = e.real("j1")?.unwrap_or(1.0);
        let j2 = e.real("j2")?.unwrap_or(0.0);
        let b = e.real("b")?.unwrap_or(0.0);
        let t = e.real("t")?;
        let [tmin, tmax, bmin, bmax, j2min, j2max, lo, hi] =
            ["tmin", "tmax", "bmin", "bmax", "j2min", "j2max", "lo", "hi"].map(|k| e.real(k));
        let (tmin, tmax, bmin, bmax, j2min, j2max, lo, hi) = (tmin?, tmax?, bmin?, bmax?, j2min?, j2max?, lo?, hi?);
        let threads: Option<usize> = e.get("threads")?;
        if threads == Some(0) {
            return Err(Error::config("threads", "must be at least 1"));
        }
        let param: Option<Parameter> = e.get("param")?;
        let crossing: Option<Crossing> = e.get("crossing")?;
        let pairs: Option<Vec<PairSelector>> = entries
            .get("pairs")
            .map(|raw| {
                raw.split(',')
                    .map(|p| p.trim().parse::<PairSelector>())
                    .collect::<Result<Vec<_>>>()
                    .map_err(|err| Error::config("pairs", err.to_string()))
            })
            .transpose()?;
        let out = entries.get("out").map(PathBuf::from);

        if command == Command::Verify {
            let max_sites = n.unwrap_or(DEFAULT_VERIFY_SITES);
            if max_sites < 2 {
                return Err(Error::config("n", "verify needs n >= 2"));
            }
            return Ok(RunConfig {
                command,
                job: Job::Verify(VerifyOptions {
                    max_sites,
                    ..VerifyOptions::default()
                }),
                out,
                threads,
                entries,
            });
        }

        let n = e.require("n", n)?;
        let model = ModelSpec {
            n_sites: n,
            j1,
            j2,
            field_b: b,
        };
        // Model constraints over the whole swept range come first.
        let probes: Vec<ModelSpec> = match command {
            Command::SweepJ2 | Command::Grid => vec![model.with_j2(j2min.unwrap_or(0.0)), model.with_j2(j2max.unwrap_or(1.0))],
            Command::SweepField => vec![model.with_field(bmin.unwrap_or(0.0)), model.with_field(bmax.unwrap_or(1.0))],
            Command::Threshold => match param {
                Some(p @ (Parameter::J2 | Parameter::FieldB)) => {
                    let apply = |x: f64| match p {
                        Parameter::J2 => model.with_j2(x),
                        _ => model.with_field(x),
                    };
                    vec![apply(lo.unwrap_or(0.0)), apply(hi.unwrap_or(1.0))]
                }
                _ => vec![model],
            },
            _ => vec![model],
        };
        for m in probes {
            m.validate()?;
        }

        let pairs = pairs.unwrap_or_else(|| PairSelector::defaults_for(n));
        for p in &pairs {
            p.sites(n).map_err(|err| Error::config("pairs", err.to_string()))?;
        }

        let job = match command {
            Command::SweepTemp | Command::SweepField | Command::SweepJ2 | Command::Grid => {
                let dims = if command == Command::Grid { 2 } else { 1 };
                let steps = parse_steps(entries.get("steps"), dims)?;
                let t_axis = || -> Result<Axis> {
                    axis(Parameter::Temperature, e.require("tmin", tmin)?, e.require("tmax", tmax)?, *steps.last().unwrap(), ("tmin", "tmax"))
                };
                let request = match command {
                    Command::SweepTemp => SweepRequest::new(model, t_axis()?),
                    Command::SweepField => SweepRequest::new(
                        model,
                        axis(Parameter::FieldB, bmin.unwrap_or(0.0), e.require("bmax", bmax)?, steps[0], ("bmin", "bmax"))?,
                    ),
                    Command::SweepJ2 => SweepRequest::new(
                        model,
                        axis(Parameter::J2, j2min.unwrap_or(0.0), e.require("j2max", j2max)?, steps[0], ("j2min", "j2max"))?,
                    ),
                    _ => SweepRequest::new(
                        model,
                        axis(Parameter::J2, j2min.unwrap_or(0.0), e.require("j2max", j2max)?, steps[0], ("j2min", "j2max"))?,
                    )
                    .with_axis2(t_axis()?),
                };
                let request = request.with_pairs(pairs);
                let request = match command {
                    Command::SweepField | Command::SweepJ2 => request.with_temperature(positive_temperature(e.require("t", t)?)?),
                    _ => request,
                };
                request.validate()?;
                Job::Sweep(request)
            }
            Command::Threshold => {
                let parameter = e.require("param", param)?;
                let pair = match pairs.as_slice() {
                    [single] => *single,
                    _ if !entries.contains_key("pairs") => PairSelector::HalfOne,
                    _ => return Err(Error::config("pairs", "threshold takes exactly one pair")),
                };
                let mut request = ThresholdRequest::new(model, parameter, pair, e.require("lo", lo)?, e.require("hi", hi)?)
                    .with_crossing(crossing.unwrap_or_default());
                if let Some(steps) = entries.get("steps") {
                    request.scan_points = parse_steps(Some(steps), 1)?[0];
                }
                if parameter != Parameter::Temperature {
                    request = request.with_temperature(positive_temperature(e.require("t", t)?)?);
                }
                request.validate().map_err(|err| match err {
                    Error::InvalidSweep(reason) => Error::config("lo/hi", reason),
                    other => other,
                })?;
                Job::Threshold(request)
            }
            Command::Verify => unreachable!("handled above"),
        };

        if out.is_none() {
            return Err(Error::config("out", "missing output path"));
        }
        Ok(RunConfig {
            command,
            job,
            out,
            threads,
            entries,
        })
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    /// `key=value` lines in canonical key order. The thread count is left
    /// out so that it cannot change output bytes.
    pub fn echo_lines(&self) -> Vec<String> {
        KEYS.iter()
            .filter(|k| **k != "threads")
            .filter_map(|k| self.entries.get(*k).map(|v| format!("{k}={v}")))
            .collect()
    }

    /// The same run with the thread count dropped, as recovered from echoed
    /// output.
    pub fn without_threads(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.remove("threads");
        RunConfig {
            threads: None,
            entries,
            ..self.clone()
        }
    }

    pub fn from_comments(text: &str) -> Result<Self> {
        Self::from_entries(entries_from_comments(text)?)
    }
}

fn positive_temperature(t: f64) -> Result<f64> {
    if t > 0.0 {
        Ok(t)
    } else {
        Err(Error::config("t", format!("temperature must be positive, got {t}")))
    }
}
