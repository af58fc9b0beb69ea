//! Output tables: `#`-prefixed metadata block, one header row, and numeric
//! rows printed with 9 significant digits.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::svg;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_sig9(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputTable {
    /// Comment lines, written without the leading `# `.
    pub metadata: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl OutputTable {
    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        if let Some(bad) = self.rows.iter().find(|r| r.len() != self.header.len()) {
            return Err(CliError::Invalid(format!(
                "table row has {} fields, header has {}",
                bad.len(),
                self.header.len()
            )));
        }
        let mut out = Vec::new();
        for line in &self.metadata {
            out.extend_from_slice(b"# ");
            out.extend_from_slice(line.as_bytes());
            out.push(b'\n');
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Formats like C's `%.9g`: 9 significant digits, trailing zeros dropped,
/// exponent form outside [1e-4, 1e9). Independent of locale.
pub fn format_sig9(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Path of the SVG written next to `csv_path`.
pub fn svg_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("svg")
}

/// Writes the table as CSV to `path` (stdout when `None`), replacing any
/// existing file only once the new content is complete. With `plot`, also
/// writes an SVG line chart of every numeric column against the first.
pub fn emit_table(table: &OutputTable, path: Option<&Path>, plot: bool) -> Result<(), CliError> {
    let bytes = table.to_csv()?;
    match path {
        Some(p) => {
            write_atomically(p, &bytes)?;
            if plot {
                let chart = svg::line_chart(table)?;
                write_atomically(&svg_path(p), chart.as_bytes())?;
            }
        }
        None => {
            if plot {
                return Err(CliError::Usage("--plot requires --out".into()));
            }
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}
