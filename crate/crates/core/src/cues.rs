//! Sublexical cue extraction: boundary-marked n-grams over syllables,
//! phones, or characters, the binary word-by-cue matrix built from them,
//! and the successor structure used to weave cues back into forms.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::sparse::SparseBinaryMatrix;

/// Default reserved word-boundary symbol.
pub const BOUNDARY: &str = "#";

/// How a form string is split into tokens before n-gram extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tokenization {
    /// One token per character.
    Characters,
    /// Split on a separator string, e.g. `"_"` for syllables or `"."` for
    /// phones.
    Separator(String),
}

impl Tokenization {
    pub fn separated(sep: impl Into<String>) -> Self {
        Tokenization::Separator(sep.into())
    }

    fn split(&self, form: &str) -> Result<Vec<String>> {
        match self {
            Tokenization::Characters => Ok(form.chars().map(String::from).collect()),
            Tokenization::Separator(sep) => {
                if sep.is_empty() {
                    return Err(Error::InvalidParameter(
                        "separator must be non-empty".into(),
                    ));
                }
                let tokens: Vec<String> = form.split(sep.as_str()).map(String::from).collect();
                if tokens.iter().any(String::is_empty) {
                    return Err(Error::InvalidParameter(format!(
                        "form {form:?} has an empty token"
                    )));
                }
                Ok(tokens)
            }
        }
    }
}

/// Splits a form into tokens and wraps them in boundary symbols.
///
/// ```
/// use ldl_core::{tokenize_form, Tokenization};
/// let tokens = tokenize_form("go_rUm_ni_da", &Tokenization::separated("_")).unwrap();
/// assert_eq!(tokens, ["#", "go", "rUm", "ni", "da", "#"]);
/// ```
pub fn tokenize_form(form: &str, tokenization: &Tokenization) -> Result<Vec<String>> {
    if form.is_empty() {
        return Err(Error::EmptyForm { row: 0 });
    }
    if form.contains(BOUNDARY) {
        return Err(Error::BoundaryInForm {
            form: form.to_string(),
            row: 0,
            boundary: BOUNDARY.to_string(),
        });
    }
    let mut tokens = Vec::with_capacity(form.len() + 2);
    tokens.push(BOUNDARY.to_string());
    tokens.extend(tokenization.split(form)?);
    tokens.push(BOUNDARY.to_string());
    Ok(tokens)
}

/// The ordered cue vocabulary of a dataset. Cue identity is the token
/// sequence; the display form joins tokens with the separator (or
/// concatenates them for character tokens).
#[derive(Debug, Clone)]
pub struct CueInventory {
    n: usize,
    tokenization: Tokenization,
    cues: Vec<String>,
    tokens: Vec<Vec<String>>,
    index: HashMap<String, usize>,
}

impl CueInventory {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cues.is_empty()
    }

    pub fn tokenization(&self) -> &Tokenization {
        &self.tokenization
    }

    /// Display strings in column order.
    pub fn cues(&self) -> &[String] {
        &self.cues
    }

    pub fn display(&self, ordinal: usize) -> &str {
        &self.cues[ordinal]
    }

    pub fn tokens(&self, ordinal: usize) -> &[String] {
        &self.tokens[ordinal]
    }

    pub fn ordinal(&self, cue: &str) -> Option<usize> {
        self.index.get(cue).copied()
    }

    pub fn starts_with_boundary(&self, ordinal: usize) -> bool {
        self.tokens[ordinal][0] == BOUNDARY
    }

    pub fn ends_with_boundary(&self, ordinal: usize) -> bool {
        self.tokens[ordinal][self.n - 1] == BOUNDARY
    }

    fn join(&self, tokens: &[String]) -> String {
        match &self.tokenization {
            Tokenization::Characters => tokens.concat(),
            Tokenization::Separator(sep) => tokens.join(sep),
        }
    }

    /// Reconstructs the surface form of an overlap-consistent cue sequence
    /// by keeping the first cue's tokens and the trailing token of every
    /// following cue; boundary symbols are stripped.
    pub fn sequence_to_form(&self, sequence: &[usize]) -> Result<String> {
        let mut tokens: Vec<String> = Vec::new();
        for (k, &ordinal) in sequence.iter().enumerate() {
            if ordinal >= self.len() {
                return Err(Error::UnknownCueOrdinal(ordinal));
            }
            if k == 0 {
                tokens.extend_from_slice(self.tokens(ordinal));
            } else {
                tokens.push(self.tokens(ordinal)[self.n - 1].clone());
            }
        }
        tokens.retain(|t| t != BOUNDARY);
        Ok(self.join(&tokens))
    }

    /// Writes the inventory as one cue per line, in column order.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source: std::io::Error| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
        for cue in &self.cues {
            writeln!(out, "{cue}").map_err(io_err)?;
        }
        out.flush().map_err(io_err)?;
        Ok(())
    }
}

/// Binary word-by-cue matrix plus the ordered cue sequence of every word.
#[derive(Debug, Clone)]
pub struct CueMatrix {
    /// Presence matrix: entry `(i, j)` is 1 iff cue `j` occurs in word `i`.
    pub matrix: SparseBinaryMatrix,
    /// Per word, cue column ordinals in left-to-right form order. Length is
    /// `token_count + 2 - n`; consecutive cues overlap in `n - 1` tokens.
    pub sequences: Vec<Vec<usize>>,
}

impl CueMatrix {
    pub fn shape(&self) -> (usize, usize) {
        (self.matrix.nrows(), self.matrix.ncols())
    }

    /// Length of the longest cue sequence.
    pub fn max_sequence_len(&self) -> usize {
        self.sequences.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Writes the presence matrix in Matrix Market coordinate/pattern
    /// format with 1-based indices.
    pub fn write_matrix_market(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source: std::io::Error| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
        writeln!(out, "%%MatrixMarket matrix coordinate pattern general").map_err(io_err)?;
        writeln!(
            out,
            "{} {} {}",
            self.matrix.nrows(),
            self.matrix.ncols(),
            self.matrix.nnz()
        )
        .map_err(io_err)?;
        for (i, cols) in self.matrix.row_iter() {
            for &j in cols {
                writeln!(out, "{} {}", i + 1, j + 1).map_err(io_err)?;
            }
        }
        out.flush().map_err(io_err)?;
        Ok(())
    }
}

/// Scans the dataset row by row, assigning cue columns in first-occurrence
/// order, and returns the inventory together with the presence matrix.
pub fn build_cue_matrix(
    dataset: &Dataset,
    n: usize,
    tokenization: Tokenization,
) -> Result<(CueInventory, CueMatrix)> {
    if n == 0 {
        return Err(Error::InvalidParameter("gram order must be >= 1".into()));
    }
    let mut inventory = CueInventory {
        n,
        tokenization,
        cues: Vec::new(),
        tokens: Vec::new(),
        index: HashMap::new(),
    };
    let mut sequences = Vec::with_capacity(dataset.len());
    for i in 0..dataset.len() {
        let form = dataset.form(i);
        let tokens = tokenize_form(form, &inventory.tokenization).map_err(|e| match e {
            Error::BoundaryInForm { form, boundary, .. } => Error::BoundaryInForm {
                form,
                row: i + 1,
                boundary,
            },
            other => other,
        })?;
        if tokens.len() < n {
            return Err(Error::InvalidParameter(format!(
                "form {form:?} at row {} is too short for {n}-grams",
                i + 1
            )));
        }
        let mut sequence = Vec::with_capacity(tokens.len() + 1 - n);
        for window in tokens.windows(n) {
            let display = inventory.join(window);
            let ordinal = match inventory.index.get(&display) {
                Some(&ord) => ord,
                None => {
                    let ord = inventory.cues.len();
                    inventory.cues.push(display.clone());
                    inventory.tokens.push(window.to_vec());
                    inventory.index.insert(display, ord);
                    ord
                }
            };
            sequence.push(ordinal);
        }
        sequences.push(sequence);
    }
    let matrix = SparseBinaryMatrix::from_rows(sequences.clone(), inventory.len())?;
    Ok((inventory, CueMatrix { matrix, sequences }))
}

/// Successor sets over cue ordinals: `b` follows `a` iff the last `n - 1`
/// tokens of `a` equal the first `n - 1` tokens of `b`. Cues ending in the
/// boundary symbol are word-final and have no successors, since the
/// boundary cannot occur word-internally.
pub fn adjacency(inventory: &CueInventory) -> Vec<Vec<usize>> {
    let n = inventory.n();
    let mut by_prefix: HashMap<&[String], Vec<usize>> = HashMap::new();
    for ordinal in 0..inventory.len() {
        let prefix = &inventory.tokens(ordinal)[..n - 1];
        by_prefix.entry(prefix).or_default().push(ordinal);
    }
    (0..inventory.len())
        .map(|ordinal| {
            if inventory.ends_with_boundary(ordinal) {
                return Vec::new();
            }
            let suffix = &inventory.tokens(ordinal)[1..];
            by_prefix.get(suffix).cloned().unwrap_or_default()
        })
        .collect()
}
