//! Self-describing output documents. Every run emits its full effective
//! configuration so a file can be interpreted (and reproduced) on its own.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::io;
use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub struct RunOutput {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Value,
    pub status: String,
}

impl RunOutput {
    pub fn new(command: impl Into<String>) -> Self {
        RunOutput {
            command: command.into(),
            config: BTreeMap::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            summary: json!({}),
            status: "ok".into(),
        }
    }

    /// Record one effective-config entry for the output header.
    pub fn set(&mut self, key: &str, value: impl Display) {
        self.config.insert(key.to_string(), value.to_string());
    }

    pub fn columns(&mut self, cols: &[&str]) {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# tool_version = {}\n", env!("CARGO_PKG_VERSION")));
        s.push_str(&format!("# command = {}\n", self.command));
        s.push_str(&format!("# status = {}\n", self.status));
        for (k, v) in &self.config {
            s.push_str(&format!("# {k} = {v}\n"));
        }
        if !self.columns.is_empty() {
            s.push_str(&self.columns.join(","));
            s.push('\n');
        }
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s.push_str(&format!("# summary = {}\n", self.summary));
        s
    }

    pub fn to_json(&self) -> String {
        let doc = json!({
            "tool_version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "status": self.status,
            "config": self.config,
            "columns": self.columns,
            "rows": self.rows,
            "summary": self.summary,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Write through a temp file in the same directory and rename over the
/// target, so re-runs replace outputs atomically.
pub fn write_atomic(path: &Path, content: &str) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp_name = format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id());
    let tmp = match dir {
        Some(d) => d.join(&tmp_name),
        None => tmp_name.clone().into(),
    };
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)
}

/// Emit the document: to the path when given (plus a one-line summary on
/// stdout), otherwise straight to stdout.
pub fn emit(out: &RunOutput, path: Option<&Path>, format: Format) -> io::Result<()> {
    let content = out.render(format);
    match path {
        Some(p) => {
            write_atomic(p, &content)?;
            println!("{}", out.summary);
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
