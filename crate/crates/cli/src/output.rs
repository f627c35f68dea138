use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::error::CliError;

/// Cell written in place of a value that could not be computed.
pub const FAILURE_MARKER: &str = "NA";

/// A CSV table with a `#` metadata header.
#[derive(Debug, Clone, Default)]
pub struct Table {
    info: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(first_column: &str) -> Self {
        Table {
            columns: vec![first_column.to_string()],
            ..Default::default()
        }
    }

    pub fn info(&mut self, key: impl Into<String>, value: impl ToString) {
        self.info.push((key.into(), value.to_string()));
    }

    /// Add a column and record what produced it.
    pub fn column(&mut self, name: impl Into<String>, tag: &str) {
        let name = name.into();
        self.info.push((format!("column.{name}"), tag.to_string()));
        self.columns.push(name);
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# info.version={}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# info.command={}", cfg.command.as_str());
        for (k, v) in cfg.entries() {
            let _ = writeln!(s, "# {k}={v}");
        }
        for (k, v) in &self.info {
            let _ = writeln!(s, "# info.{k}={v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

/// Shortest representation that parses back to the same bits.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) || !a.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `dir/name.ext` -> `dir/name_{suffix}.ext`.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}
