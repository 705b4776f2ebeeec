//! Deterministic CSV output: `# key=value` comment lines, one header row,
//! reals at 12 significant digits, LF line endings.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::{SweepResult, ThresholdRequest, ThresholdResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Real)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// `x` rounded to 12 significant digits, positional for moderate exponents
/// and scientific otherwise, without trailing zeros.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exponent}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl CsvTable {
    pub fn new(header: Vec<String>) -> Self {
        CsvTable {
            header,
            ..Default::default()
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    /// The full file contents. Fails on a non-finite value or a row whose
    /// length differs from the header.
    pub fn render(&self) -> Result<String> {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for (r, row) in self.rows.iter().enumerate() {
            if row.len() != self.header.len() {
                return Err(Error::Numerical(format!(
                    "row {r} has {} cells, expected {}",
                    row.len(),
                    self.header.len()
                )));
            }
            let cells = row
                .iter()
                .zip(&self.header)
                .map(|(cell, column)| match cell {
                    Cell::Real(x) if !x.is_finite() => {
                        Err(Error::Numerical(format!("non-finite value {x} in column {column}, row {r}")))
                    }
                    Cell::Real(x) => Ok(format_real(*x)),
                    Cell::Text(s) => Ok(s.clone()),
                    Cell::Empty => Ok(String::new()),
                })
                .collect::<Result<Vec<_>>>()?;
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        Ok(out)
    }

    /// Renders and writes through a temporary file in the target directory,
    /// then renames it into place.
    pub fn write(&self, path: &Path) -> Result<()> {
        let contents = self.render()?;
        write_atomic(path, contents.as_bytes())
    }
}

pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let name = path.file_name().ok_or_else(|| {
        io_err(std::io::Error::new(std::io::ErrorKind::InvalidInput, "output path has no file name"))
    })?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err)
}

pub fn generator_line() -> String {
    format!("generator=mixspin {}", env!("CARGO_PKG_VERSION"))
}

pub fn sweep_table(result: &SweepResult, comments: Vec<String>) -> CsvTable {
    let mut table = CsvTable::new(result.columns());
    table.comments = comments;
    for row in &result.rows {
        table.push_row(SweepResult::row_values(row).into_iter().map(Cell::Real).collect());
    }
    table
}

pub fn threshold_table(request: &ThresholdRequest, result: &ThresholdResult, comments: Vec<String>) -> CsvTable {
    let mut table = CsvTable::new(
        ["parameter", "pair", "threshold", "lo", "hi", "entangled_side", "status"]
            .map(String::from)
            .to_vec(),
    );
    table.comments = comments;
    let side = match result.entangled_below {
        Some(true) => Cell::from("below"),
        Some(false) => Cell::from("above"),
        None => Cell::Empty,
    };
    table.push_row(vec![
        Cell::from(result.parameter.name()),
        Cell::Text(request.pair.to_string()),
        Cell::from(result.value),
        Cell::from(result.bracket.map(|b| b.0)),
        Cell::from(result.bracket.map(|b| b.1)),
        side,
        Cell::from(result.status.label()),
    ]);
    table
}
