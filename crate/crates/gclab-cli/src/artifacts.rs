//! Deterministic artifact plumbing. A [`Workspace`] owns one run directory,
//! collects manifest lines in execution order, and writes every table and
//! mesh under that directory. Floats are printed with Rust's shortest
//! round-trip formatting, which is locale-independent and loses no
//! precision; nothing written here includes a timestamp.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use crate::CliError;

pub struct Workspace {
    dir: PathBuf,
    lines: Vec<String>,
}

impl Workspace {
    pub fn create(dir: &Path, command: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let mut ws = Workspace {
            dir: dir.to_path_buf(),
            lines: Vec::new(),
        };
        ws.kv("tool", format!("gclab {}", env!("CARGO_PKG_VERSION")));
        ws.kv("manifest-format", 1);
        ws.kv("command", command);
        Ok(ws)
    }

    /// Appends one `key value` manifest line.
    pub fn kv(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key} {value}"));
    }

    pub fn blank(&mut self) {
        self.lines.push(String::new());
    }

    /// Writes a file under the run directory and records it as an artifact.
    pub fn write_artifact(&mut self, rel: &str, content: &str) -> Result<(), CliError> {
        let path = self.dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|source| CliError::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
        fs::write(&path, content).map_err(|source| CliError::Io { path, source })?;
        self.lines.push(format!("artifact {rel}"));
        Ok(())
    }

    /// Closes a successful run: status line plus the manifest file.
    pub fn finish(mut self) -> Result<(), CliError> {
        self.blank();
        self.kv("status", "ok");
        self.write_manifest()
    }

    /// Closes a failed run: the failure is recorded in the manifest, partial
    /// artifacts stay on disk, and the original error is handed back.
    pub fn fail(mut self, stage: &str, err: CliError) -> CliError {
        self.blank();
        self.kv("status", "failed");
        self.kv("error.stage", stage);
        self.kv("error.message", &err);
        let _ = self.write_manifest();
        err
    }

    fn write_manifest(&self) -> Result<(), CliError> {
        let path = self.dir.join("manifest.txt");
        let mut text = self.lines.join("\n");
        text.push('\n');
        fs::write(&path, text).map_err(|source| CliError::Io { path, source })
    }
}

/// Builds one csv table from a header and row-producing closure outputs.
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &str) -> Self {
        let mut text = String::with_capacity(4096);
        text.push_str(header);
        text.push('\n');
        Table { text }
    }

    pub fn row(&mut self, fields: &[f64]) {
        let mut first = true;
        for &v in fields {
            if !first {
                self.text.push(',');
            }
            first = false;
            self.text.push_str(&format!("{v}"));
        }
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
