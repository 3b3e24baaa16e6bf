//! Trajectory CSV and summary JSON writers.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use spr3_core::Trajectory;

use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "t,xi1,xi2,xi3,cx,cy,theta,power";

/// Writes one row per sample with 17 significant digits.
pub fn write_csv<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for s in &traj.samples {
        let row = [s.t, s.xi.x, s.xi.y, s.xi.z, s.c.x, s.c.y, s.theta, s.power];
        let fields: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("summaries contain only plain data");
    text.push('\n');
    text
}

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<PathBuf> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(path.to_path_buf())
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<PathBuf> {
    let mut buf = Vec::new();
    write_csv(&mut buf, traj).expect("writing to memory cannot fail");
    write_file(path, &buf)
}
