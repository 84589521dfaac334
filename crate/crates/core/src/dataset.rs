//! Word datasets: one row per word form, plus named string columns for
//! lexeme identifiers and inflectional features.

use std::fs::File;
use std::path::Path;

use crate::error::{Error, Result};

/// An immutable table of word records. Row order is canonical: every matrix
/// in the pipeline indexes words by their position here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    columns: Vec<String>,
    form_column: usize,
    rows: Vec<Vec<String>>,
}

/// View of a single dataset row.
#[derive(Debug, Clone, Copy)]
pub struct WordRecord<'a> {
    dataset: &'a Dataset,
    row: usize,
}

impl<'a> WordRecord<'a> {
    pub fn form(&self) -> &'a str {
        self.dataset.form(self.row)
    }

    /// Value of a named column, if the column exists.
    pub fn attribute(&self, column: &str) -> Option<&'a str> {
        let idx = self.dataset.column_index(column)?;
        Some(self.dataset.rows[self.row][idx].as_str())
    }
}

impl Dataset {
    /// Builds a dataset from a header and rows. Every row must have one cell
    /// per column and a non-empty form.
    pub fn from_rows(
        columns: Vec<String>,
        form_column: &str,
        rows: Vec<Vec<String>>,
    ) -> Result<Self> {
        for (i, name) in columns.iter().enumerate() {
            if columns[..i].contains(name) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        let form_idx = columns
            .iter()
            .position(|c| c == form_column)
            .ok_or_else(|| Error::MissingColumn(form_column.to_string()))?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::ShapeMismatch {
                    context: "dataset row",
                    expected: format!("{} cells", columns.len()),
                    found: format!("{} cells at row {}", row.len(), i + 1),
                });
            }
            if row[form_idx].is_empty() {
                return Err(Error::EmptyForm { row: i + 1 });
            }
        }
        Ok(Self {
            columns,
            form_column: form_idx,
            rows,
        })
    }

    /// Reads a comma-separated file with a header line. Rows keep file order.
    pub fn load(path: impl AsRef<Path>, form_column: &str) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(file);
        let headers = reader
            .headers()
            .map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })?
            .iter()
            .map(str::to_string)
            .collect::<Vec<_>>();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        Self::from_rows(headers, form_column, rows)
    }

    /// Writes the table back out as csv with a header. Loading the result
    /// with the same form column reproduces the dataset.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut writer = csv::Writer::from_writer(file);
        let io_err = |source: csv::Error| Error::Csv {
            path: path.to_path_buf(),
            source,
        };
        writer.write_record(&self.columns).map_err(io_err)?;
        for row in &self.rows {
            writer.write_record(row).map_err(io_err)?;
        }
        writer.flush().map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn form_column(&self) -> &str {
        &self.columns[self.form_column]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Form string of row `i`.
    pub fn form(&self, i: usize) -> &str {
        &self.rows[i][self.form_column]
    }

    /// All form strings in row order.
    pub fn forms(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r[self.form_column].clone())
            .collect()
    }

    pub fn record(&self, i: usize) -> WordRecord<'_> {
        WordRecord {
            dataset: self,
            row: i,
        }
    }

    /// Values of a named column in row order.
    pub fn column(&self, name: &str) -> Result<Vec<&str>> {
        let idx = self
            .column_index(name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        Ok(self.rows.iter().map(|r| r[idx].as_str()).collect())
    }
}
