//! Run manifest: sorted key=value lines recording every resolved parameter
//! and result, so identical configurations reproduce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Default)]
pub struct Manifest {
    entries: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn write(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for (key, value) in &self.entries {
            writeln!(out, "{key}={value}")?;
        }
        out.flush()
    }

    pub fn read(path: impl AsRef<Path>) -> std::io::Result<BTreeMap<String, String>> {
        let text = std::fs::read_to_string(path)?;
        Ok(text
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect())
    }
}
