use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

/// Version of the JSON summary layout.
pub const SUMMARY_SCHEMA: u32 = 1;

/// Columns every row ends with.
pub const PROVENANCE: [&str; 4] = ["formula", "anchor", "seed", "budget"];

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        let mut header = columns.to_vec();
        header.extend(PROVENANCE);
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip form, scientific for tiny and huge magnitudes.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// JSON has no infinities; they become strings.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(num(x))
    }
}

pub fn seed_str(seed: Option<u64>) -> String {
    seed.map(|s| s.to_string()).unwrap_or_else(|| "none".into())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
}

impl Tally {
    pub fn add(&mut self, verdict: &str) {
        match verdict {
            "holds" => self.holds += 1,
            "fails" => self.fails += 1,
            "inconclusive" => self.inconclusive += 1,
            _ => {}
        }
    }
}

/// Everything a command produces before it is written out.
#[derive(Debug, Default)]
pub struct Outcome {
    /// The main table and extra tables keyed by file suffix.
    pub main: Table,
    pub extra: Vec<(String, Table)>,
    pub tally: Tally,
    pub cases: Vec<Value>,
}

pub struct Paths {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub config: PathBuf,
}

impl Paths {
    pub fn new(out: &Path, name: &str) -> Self {
        Paths {
            csv: out.join(format!("{name}.csv")),
            summary: out.join(format!("{name}.summary.json")),
            config: out.join(format!("{name}.config.toml")),
        }
    }

    pub fn extra(out: &Path, name: &str, suffix: &str) -> PathBuf {
        out.join(format!("{name}.{suffix}.csv"))
    }
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
