//! Output writing: CSV with `#` metadata lines and a fixed numeric format.
//!
//! Numbers are written as `{:.16e}` (17 significant digits), which
//! round-trips f64 exactly, so write -> read -> write is a fixed point.
//! Lines end with LF; all output goes through a single writer in
//! deterministic order.

use crate::error::CliError;
use std::io::Write;
use std::path::PathBuf;

pub fn fmt_g(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| {
                CliError::input(format!("cannot create {}: {e}", path.display()))
            })?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
    }
}

pub struct CsvWriter {
    out: Box<dyn Write>,
}

impl CsvWriter {
    pub fn new(out: Box<dyn Write>) -> Self {
        CsvWriter { out }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> Result<(), CliError> {
        writeln!(self.out, "# {key}={value}")?;
        Ok(())
    }

    pub fn header(&mut self, columns: &[String]) -> Result<(), CliError> {
        writeln!(self.out, "{}", columns.join(","))?;
        Ok(())
    }

    pub fn row(&mut self, values: &[f64]) -> Result<(), CliError> {
        let cells: Vec<String> = values.iter().map(|&v| fmt_g(v)).collect();
        writeln!(self.out, "{}", cells.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out.flush()?;
        Ok(())
    }
}

pub fn write_json(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
