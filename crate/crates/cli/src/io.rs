//! Input files and atomic output.

use num_complex::Complex64;
use std::io::Write;
use std::path::Path;

use hbspace::hb::SymbolB;
use hbspace::measure::{DiskMeasure, MeasureSpec};
use hbspace::HbError;

fn read(path: &Path) -> Result<String, HbError> {
    std::fs::read_to_string(path).map_err(|e| HbError::Parse(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: HbError) -> HbError {
    match e {
        HbError::Parse(m) => HbError::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

pub fn load_symbol(path: &Path) -> Result<SymbolB, HbError> {
    SymbolB::from_json(&read(path)?).map_err(|e| located(path, e))
}

pub fn load_measure(path: &Path) -> Result<DiskMeasure, HbError> {
    MeasureSpec::from_json(&read(path)?).and_then(|s| s.build()).map_err(|e| located(path, e))
}

pub fn load_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, HbError> {
    serde_json::from_str(&read(path)?).map_err(|e| {
        HbError::Parse(format!("{}: {what} JSON at line {} column {}: {e}", path.display(), e.line(), e.column()))
    })
}

/// Write `body` to `out` through a temporary file in the same directory,
/// or to stdout.
pub fn emit(body: &str, out: Option<&Path>) -> Result<(), HbError> {
    let io_err = |e: std::io::Error| HbError::Config(format!("writing output: {e}"));
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(io_err)?;
            stdout.flush().map_err(io_err)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
            tmp.write_all(body.as_bytes()).map_err(io_err)?;
            tmp.as_file().sync_all().map_err(io_err)?;
            tmp.persist(path).map_err(|e| io_err(e.error))?;
            Ok(())
        }
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    Ok(Complex64::new(p(re)?, p(im)?))
}

pub fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("`{s}` is not name=value"))?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}
