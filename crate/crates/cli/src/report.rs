//! Report emission. Every artifact goes through one emitter so that the
//! same config always produces byte-identical files: JSON maps keep sorted
//! keys, every float is rounded to the configured number of significant
//! digits before serialization, and CSV rows are formatted with the same
//! rule.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub struct Emitter {
    dir: PathBuf,
    precision: usize,
    config_hash: String,
}

pub fn config_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

/// Round to `digits` significant digits by a decimal round-trip; the result
/// is a plain JSON number whose rendering is a pure function of the input.
pub fn fixed(x: f64, digits: usize) -> Value {
    if !x.is_finite() {
        return Value::String(format!("{x}"));
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("fixed-format float round-trip");
    serde_json::Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{x}")))
}

/// Apply `fixed` to every number in a JSON tree.
pub fn canonicalize(v: Value, digits: usize) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.as_i64().is_none() && n.as_u64().is_none() => fixed(x, digits),
            _ => Value::Number(n),
        },
        Value::Array(items) => {
            Value::Array(items.into_iter().map(|x| canonicalize(x, digits)).collect())
        }
        Value::Object(map) => {
            let mut out = Map::new();
            for (k, val) in map {
                out.insert(k, canonicalize(val, digits));
            }
            Value::Object(out)
        }
        other => other,
    }
}

impl Emitter {
    pub fn new(dir: &Path, precision: usize, config_bytes: &[u8]) -> Result<Emitter, String> {
        fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
        Ok(Emitter {
            dir: dir.to_path_buf(),
            precision,
            config_hash: config_hash(config_bytes),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn hash(&self) -> &str {
        &self.config_hash
    }

    pub fn num(&self, x: f64) -> Value {
        fixed(x, self.precision)
    }

    /// Write one JSON report; `body` keys are merged after the common
    /// header fields and all floats are rounded.
    pub fn json_report(
        &self,
        name: &str,
        kind: &str,
        quantities: &[&str],
        pass: bool,
        body: Map<String, Value>,
    ) -> Result<PathBuf, String> {
        let mut root = Map::new();
        root.insert("config_hash".into(), Value::String(self.config_hash.clone()));
        root.insert("kind".into(), Value::String(kind.into()));
        root.insert(
            "quantities".into(),
            Value::Array(quantities.iter().map(|q| Value::String((*q).into())).collect()),
        );
        root.insert("pass".into(), Value::Bool(pass));
        for (k, v) in body {
            root.insert(k, v);
        }
        let doc = canonicalize(Value::Object(root), self.precision);
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(&doc)
            .map_err(|e| format!("cannot serialize {name}: {e}"))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        Ok(path)
    }

    /// Write a CSV file with a header row; every cell is already a string.
    pub fn csv(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, String> {
        let path = self.dir.join(name);
        let mut out = Vec::new();
        writeln!(out, "{}", header.join(",")).unwrap();
        for row in rows {
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        fs::write(&path, out).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        Ok(path)
    }

    /// One CSV cell with the emitter's precision.
    pub fn cell(&self, x: f64) -> String {
        if x.is_finite() {
            format!("{:.*e}", self.precision.saturating_sub(1), x)
        } else {
            format!("{x}")
        }
    }
}
