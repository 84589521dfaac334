//! The word-by-dimension semantic matrix: simulated from lexeme and
//! inflectional-feature vectors, or loaded from an embedding text file.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Where a semantic matrix came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Simulated {
        seed: u64,
        lexeme_column: String,
        feature_columns: Vec<String>,
    },
    Loaded {
        path: PathBuf,
    },
}

/// An elementary meaning unit owning one simulated vector: either a base
/// word (keyed by the lexeme column) or one (feature column, value) pair.
#[derive(Debug, Clone)]
pub struct Lexome {
    pub column: String,
    pub value: String,
    pub vector: Array1<f64>,
}

/// Parameters for simulating semantic vectors.
#[derive(Debug, Clone, Copy)]
pub struct SimulationParams {
    pub dims: usize,
    pub seed: u64,
    /// Mean of the elementary Gaussian draws.
    pub mean: f64,
    /// Standard deviation of the elementary Gaussian draws.
    pub sd: f64,
}

impl SimulationParams {
    pub fn new(dims: usize, seed: u64) -> Self {
        Self {
            dims,
            seed,
            mean: 0.0,
            sd: 1.0,
        }
    }
}

/// Dense word-by-dimension matrix. Row `i` corresponds to dataset row `i`.
#[derive(Debug, Clone)]
pub struct SemanticMatrix {
    pub matrix: Array2<f64>,
    provenance: Provenance,
    lexomes: Vec<Lexome>,
}

impl SemanticMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_simulated(&self) -> bool {
        matches!(self.provenance, Provenance::Simulated { .. })
    }

    /// All lexomes in draw order (base words first, then feature values
    /// column by column). Empty for loaded matrices.
    pub fn lexomes(&self) -> &[Lexome] {
        &self.lexomes
    }

    /// Looks up an elementary vector by name. A bare value name works when
    /// it is unambiguous; `"column:value"` always works.
    pub fn lexome_vector(&self, name: &str) -> Result<&Array1<f64>> {
        if !self.is_simulated() {
            return Err(Error::LoadedProvenance);
        }
        if let Some((column, value)) = name.split_once(':') {
            if let Some(lex) = self
                .lexomes
                .iter()
                .find(|l| l.column == column && l.value == value)
            {
                return Ok(&lex.vector);
            }
        }
        let mut matches = self.lexomes.iter().filter(|l| l.value == name);
        match (matches.next(), matches.next()) {
            (Some(lex), None) => Ok(&lex.vector),
            (Some(_), Some(_)) => Err(Error::AmbiguousLexome(name.to_string())),
            (None, _) => Err(Error::UnknownLexome(name.to_string())),
        }
    }

    /// Display name of a lexome: the bare value when globally unique,
    /// otherwise `"column:value"`.
    pub fn lexome_name(&self, lexome: &Lexome) -> String {
        let same_value = self
            .lexomes
            .iter()
            .filter(|l| l.value == lexome.value)
            .count();
        if same_value > 1 {
            format!("{}:{}", lexome.column, lexome.value)
        } else {
            lexome.value.clone()
        }
    }

    /// Writes rows in embedding text format: `<word> <v1> ... <vk>`.
    /// Values use the shortest representation that parses back exactly.
    pub fn write_embeddings(&self, forms: &[String], path: impl AsRef<Path>) -> Result<()> {
        if forms.len() != self.rows() {
            return Err(Error::ShapeMismatch {
                context: "embedding export",
                expected: format!("{} forms", self.rows()),
                found: format!("{} forms", forms.len()),
            });
        }
        let rows: Vec<Vec<f64>> = self.matrix.rows().into_iter().map(|r| r.to_vec()).collect();
        write_embedding_file(path, forms.iter().map(String::as_str), &rows)
    }

    /// Writes the elementary lexome vectors in embedding text format.
    pub fn write_lexomes(&self, path: impl AsRef<Path>) -> Result<()> {
        if !self.is_simulated() {
            return Err(Error::LoadedProvenance);
        }
        let names: Vec<String> = self.lexomes.iter().map(|l| self.lexome_name(l)).collect();
        let rows: Vec<Vec<f64>> = self.lexomes.iter().map(|l| l.vector.to_vec()).collect();
        write_embedding_file(path, names.iter().map(String::as_str), &rows)
    }
}

fn write_embedding_file<'a>(
    path: impl AsRef<Path>,
    names: impl Iterator<Item = &'a str>,
    rows: &[Vec<f64>],
) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    for (name, row) in names.zip(rows.iter()) {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::WhitespaceInForm {
                form: name.to_string(),
            });
        }
        write!(out, "{name}").map_err(io_err)?;
        for v in row {
            write!(out, " {v}").map_err(io_err)?;
        }
        writeln!(out).map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;
    Ok(())
}

/// Simulates the semantic matrix: one Gaussian vector per distinct lexeme
/// and per distinct (feature column, value) pair, drawn in first-occurrence
/// order from a generator seeded with `params.seed`; each word's row is the
/// sum of its lexeme vector and one vector per feature column.
pub fn simulate_semantics(
    dataset: &Dataset,
    lexeme_column: &str,
    feature_columns: &[String],
    params: SimulationParams,
) -> Result<SemanticMatrix> {
    if params.dims == 0 {
        return Err(Error::InvalidParameter(
            "semantic dimension must be >= 1".into(),
        ));
    }
    if !params.sd.is_finite() || params.sd <= 0.0 || !params.mean.is_finite() {
        return Err(Error::InvalidParameter(
            "simulation mean/sd must be finite with sd > 0".into(),
        ));
    }
    let lexeme_values = dataset.column(lexeme_column)?;
    if let Some(row) = lexeme_values.iter().position(|v| v.is_empty()) {
        return Err(Error::EmptyFeatureValue {
            column: lexeme_column.to_string(),
            row: row + 1,
        });
    }
    let mut feature_values: Vec<(&str, Vec<&str>)> = Vec::new();
    for col in feature_columns {
        let values = dataset.column(col)?;
        if let Some(row) = values.iter().position(|v| v.is_empty()) {
            return Err(Error::EmptyFeatureValue {
                column: col.clone(),
                row: row + 1,
            });
        }
        feature_values.push((col.as_str(), values));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut lexomes: Vec<Lexome> = Vec::new();
    for (column, values) in std::iter::once((lexeme_column, &lexeme_values))
        .chain(feature_values.iter().map(|(c, v)| (*c, v)))
    {
        for &value in values {
            if !lexomes
                .iter()
                .any(|l| l.column == column && l.value == value)
            {
                let vector = Array1::from_iter((0..params.dims).map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    params.mean + params.sd * z
                }));
                lexomes.push(Lexome {
                    column: column.to_string(),
                    value: value.to_string(),
                    vector,
                });
            }
        }
    }

    let find = |column: &str, value: &str| -> &Array1<f64> {
        &lexomes
            .iter()
            .find(|l| l.column == column && l.value == value)
            .expect("lexome registered above")
            .vector
    };
    let mut matrix = Array2::zeros((dataset.len(), params.dims));
    for i in 0..dataset.len() {
        let mut row = matrix.row_mut(i);
        row += find(lexeme_column, lexeme_values[i]);
        for (column, values) in &feature_values {
            row += find(column, values[i]);
        }
    }

    Ok(SemanticMatrix {
        matrix,
        provenance: Provenance::Simulated {
            seed: params.seed,
            lexeme_column: lexeme_column.to_string(),
            feature_columns: feature_columns.to_vec(),
        },
        lexomes,
    })
}

/// Loads an embedding text file whose lines are `<word> <v1> ... <vk>`.
/// Lines must cover `expected_forms` one-to-one, in order.
pub fn load_embeddings(
    path: impl AsRef<Path>,
    expected_forms: &[String],
) -> Result<SemanticMatrix> {
    let path = path.as_ref();
    let io_err = |source: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let reader = BufReader::new(File::open(path).map_err(io_err)?);
    let mut dims: Option<usize> = None;
    let mut values: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-empty line has a first field");
        let expected = expected_forms
            .get(count)
            .map(String::as_str)
            .unwrap_or_default();
        if word != expected {
            return Err(Error::EmbeddingOrderMismatch {
                line: lineno,
                expected: expected.to_string(),
                found: word.to_string(),
            });
        }
        let mut row_len = 0usize;
        for field in fields {
            let v: f64 = field.parse().map_err(|_| Error::NonNumericField {
                line: lineno,
                field: field.to_string(),
            })?;
            values.push(v);
            row_len += 1;
        }
        if let Some(k) = dims {
            if row_len != k {
                return Err(Error::RaggedEmbedding {
                    line: lineno,
                    expected: k,
                    found: row_len,
                });
            }
        } else {
            dims = Some(row_len);
        }
        count += 1;
    }
    if count != expected_forms.len() {
        return Err(Error::EmbeddingCountMismatch {
            expected: expected_forms.len(),
            found: count,
        });
    }
    let dims = dims.unwrap_or(0);
    let matrix = Array2::from_shape_vec((count, dims), values).expect("row-major layout");
    Ok(SemanticMatrix {
        matrix,
        provenance: Provenance::Loaded {
            path: path.to_path_buf(),
        },
        lexomes: Vec::new(),
    })
}
