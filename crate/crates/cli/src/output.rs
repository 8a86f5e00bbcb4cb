use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::{CliError, CliResult};

/// Shortest decimal text that parses back to the same `f64`.
///
/// Magnitudes outside `[1e-5, 1e16)` use exponent notation to keep cells short.
pub fn fmt_float(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// Writes a header plus rows of pre-formatted cells and returns the data row count.
pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> CliResult<usize>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut writer = csv::Writer::from_writer(BufWriter::new(file));
    let to_cli = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::io(path, std::io::Error::other(format!("{other:?}"))),
    };
    writer.write_record(header).map_err(to_cli)?;
    let mut count = 0;
    for row in rows {
        writer.write_record(row).map_err(to_cli)?;
        count += 1;
    }
    writer.flush().map_err(|e| CliError::io(path, e))?;
    Ok(count)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// `<path>` with `suffix` appended to the file name.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub path: PathBuf,
    pub rows: usize,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a ScenarioConfig,
    pub warnings: &'a [String],
    pub wall_clock_seconds: f64,
    pub outputs: &'a [OutputFile],
}

impl RunManifest<'_> {
    pub fn write(&self, path: &Path) -> CliResult<()> {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, self)
            .map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
        w.write_all(b"\n")
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [
            0.0,
            1.0,
            -2.5,
            0.1,
            1.0 / 3.0,
            std::f64::consts::PI,
            1e-7,
            6.02e23,
            -1.5e-300,
            12345.678,
        ] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_float(0.25), "0.25");
        assert_eq!(fmt_float(3.0), "3");
        assert_eq!(fmt_float(1e-7), "1e-7");
        assert_eq!(fmt_opt(None), "");
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(
            sibling(Path::new("out/run.csv"), ".manifest.json"),
            PathBuf::from("out/run.csv.manifest.json")
        );
    }
}
