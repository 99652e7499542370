//! CSV and JSON emission.
//!
//! Every CSV starts with `#` comment lines carrying the tool version and the
//! resolved configuration, followed by the column header. Numbers carry 12
//! significant digits so reruns are byte-identical.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output destination; `-` is standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    pub fn parse(raw: &str) -> Self {
        if raw == "-" {
            Sink::Stdout
        } else {
            Sink::File(PathBuf::from(raw))
        }
    }

    fn label(&self) -> PathBuf {
        match self {
            Sink::Stdout => PathBuf::from("<stdout>"),
            Sink::File(p) => p.clone(),
        }
    }

    fn open(&self) -> Result<Box<dyn Write>> {
        match self {
            Sink::Stdout => Ok(Box::new(io::stdout().lock())),
            Sink::File(p) => {
                let f = File::create(p).map_err(|e| CliError::io(p, e))?;
                Ok(Box::new(BufWriter::new(f)))
            }
        }
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            Sink::Stdout => None,
            Sink::File(p) => Some(p),
        }
    }
}

pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub fn write_csv(
    sink: &Sink,
    command: &str,
    config: &[(String, String)],
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<Cell>>,
) -> Result<()> {
    let label = sink.label();
    let io_err = |e: io::Error| CliError::io(&label, e);
    let mut out = sink.open()?;
    writeln!(out, "# geophase {VERSION} {command}").map_err(io_err)?;
    for (k, v) in config {
        writeln!(out, "# {k} = {v}").map_err(io_err)?;
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let csv_err = |e: csv::Error| CliError::io(&label, e.into());
    w.write_record(columns).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn write_json<T: Serialize>(sink: &Sink, value: &T) -> Result<()> {
    let label = sink.label();
    let mut out = sink.open()?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::io(&label, e.into()))?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| CliError::io(&label, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.432), "4.32000000000e-1");
        assert_eq!(fmt_num(-1.0 / 3.0), "-3.33333333333e-1");
        assert_eq!(fmt_num(0.0), "0.00000000000e0");
    }

    #[test]
    fn dash_is_stdout() {
        assert_eq!(Sink::parse("-"), Sink::Stdout);
        assert_eq!(Sink::parse("a.csv").path(), Some(Path::new("a.csv")));
    }
}
