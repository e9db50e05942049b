//! Config file loading and the small parsers shared by flags and files.
//! Flags always win over file values; unknown file keys are rejected.

use std::path::PathBuf;

use serde::Deserialize;
use tribeta::{Error, Result};

use crate::output::Format;

/// JSON config file. Field names match the long flag names (with `_` for
/// `-`); any key outside this set is an error naming the key.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub ns: Option<Vec<usize>>,
    pub ks: Option<Vec<usize>>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub beta: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub c: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub eta: Option<f64>,
    pub tau: Option<f64>,
    pub m_order: Option<usize>,
    pub grid_re: Option<String>,
    pub grid_im: Option<String>,
    pub floor: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

pub fn load_file(path: &std::path::Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::param("config", format!("cannot read {}: {e}", path.display()))
    })?;
    serde_json::from_str(&text)
        .map_err(|e| Error::param("config", format!("{}: {e}", path.display())))
}

/// Parse an axis argument: either a single value `x` or a range `start,stop,count`.
/// Geometric axes require strictly positive endpoints.
pub fn parse_axis(name: &'static str, s: &str, geometric: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = |msg: String| Error::param(name, msg);
    let num = |p: &str| -> Result<f64> {
        p.trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("`{p}` is not a number")))
    };
    match parts.len() {
        1 => Ok(vec![num(parts[0])?]),
        3 => {
            let start = num(parts[0])?;
            let stop = num(parts[1])?;
            let count: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| bad(format!("`{}` is not a count", parts[2])))?;
            if count == 0 {
                return Err(bad("count must be positive".into()));
            }
            if !start.is_finite() || !stop.is_finite() {
                return Err(bad("endpoints must be finite".into()));
            }
            if geometric && (start <= 0.0 || stop <= 0.0) {
                return Err(bad("geometric axis needs positive endpoints".into()));
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            let mut out = Vec::with_capacity(count);
            for i in 0..count {
                let t = i as f64 / (count - 1) as f64;
                out.push(if geometric {
                    start * (stop / start).powf(t)
                } else {
                    start + (stop - start) * t
                });
            }
            Ok(out)
        }
        _ => Err(bad(format!("expected `value` or `start,stop,count`, got `{s}`"))),
    }
}

/// Parse a comma list of positive integers, e.g. `100,200,400`.
pub fn parse_usize_list(name: &'static str, s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::param(name, format!("`{part}` is not a positive integer")))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::param(name, "list is empty"));
    }
    Ok(out)
}
