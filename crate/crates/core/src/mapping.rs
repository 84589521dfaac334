//! Multivariate least-squares mappings between form and meaning spaces:
//! the comprehension map predicts semantic vectors from cue vectors, the
//! production map predicts cue support from semantic vectors.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::cues::CueMatrix;
use crate::error::{Error, Result};
use crate::linalg::solve_normal_equations;
use crate::semantics::SemanticMatrix;
use crate::sparse::SparseBinaryMatrix;

const BINARY_MAGIC: &[u8; 8] = b"LDLMAP01";

/// Anything usable as the predictor matrix of a least-squares fit.
pub trait DesignMatrix {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `X^T X`.
    fn gram(&self) -> Array2<f64>;
    /// `X^T y`.
    fn t_dot(&self, y: &Array2<f64>) -> Result<Array2<f64>>;
    /// `X b`.
    fn dot(&self, b: &Array2<f64>) -> Result<Array2<f64>>;
    fn all_finite(&self) -> bool;
}

impl DesignMatrix for Array2<f64> {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn gram(&self) -> Array2<f64> {
        self.t().dot(self)
    }

    fn t_dot(&self, y: &Array2<f64>) -> Result<Array2<f64>> {
        if y.nrows() != self.nrows() {
            return Err(Error::ShapeMismatch {
                context: "dense^T * dense",
                expected: format!("{} rows", self.nrows()),
                found: format!("{} rows", y.nrows()),
            });
        }
        Ok(self.t().dot(y))
    }

    fn dot(&self, b: &Array2<f64>) -> Result<Array2<f64>> {
        if b.nrows() != self.ncols() {
            return Err(Error::ShapeMismatch {
                context: "dense * coefficients",
                expected: format!("{} rows", self.ncols()),
                found: format!("{} rows", b.nrows()),
            });
        }
        Ok(self.dot(b))
    }

    fn all_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

impl DesignMatrix for SparseBinaryMatrix {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn gram(&self) -> Array2<f64> {
        self.gram()
    }

    fn t_dot(&self, y: &Array2<f64>) -> Result<Array2<f64>> {
        self.t_dot_dense(y)
    }

    fn dot(&self, b: &Array2<f64>) -> Result<Array2<f64>> {
        self.dot_dense(b)
    }

    fn all_finite(&self) -> bool {
        true
    }
}

/// A fitted linear transformation. Column `j` of `coefficients` is the
/// least-squares solution for output column `j` alone; with `ridge = 0` on
/// a rank-deficient design the minimum-norm solution is returned.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    /// `input-dims x output-dims` coefficient matrix.
    pub coefficients: Array2<f64>,
    pub ridge: f64,
    /// Frobenius norm of `X * B - Y` on the training data.
    pub fit_residual: f64,
}

impl LinearMap {
    pub fn input_dims(&self) -> usize {
        self.coefficients.nrows()
    }

    pub fn output_dims(&self) -> usize {
        self.coefficients.ncols()
    }

    /// One coefficient column as a vector.
    pub fn column(&self, j: usize) -> ndarray::ArrayView1<'_, f64> {
        self.coefficients.column(j)
    }

    /// Writes `rows cols ridge fit_residual` followed by one line per
    /// coefficient row; values round-trip exactly through parsing.
    pub fn write_text(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source: std::io::Error| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
        writeln!(
            out,
            "{} {} {} {}",
            self.input_dims(),
            self.output_dims(),
            self.ridge,
            self.fit_residual
        )
        .map_err(io_err)?;
        for row in self.coefficients.rows() {
            let mut first = true;
            for v in row {
                if first {
                    write!(out, "{v}").map_err(io_err)?;
                    first = false;
                } else {
                    write!(out, " {v}").map_err(io_err)?;
                }
            }
            writeln!(out).map_err(io_err)?;
        }
        out.flush().map_err(io_err)?;
        Ok(())
    }

    pub fn read_text(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let io_err = |source: std::io::Error| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let reader = BufReader::new(File::open(path).map_err(io_err)?);
        let mut lines = reader.lines();
        let header = lines
            .next()
            .transpose()
            .map_err(io_err)?
            .ok_or_else(|| Error::InvalidParameter("empty coefficient file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::InvalidParameter(format!(
                "bad coefficient header {header:?}"
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::NonNumericField {
                line: 1,
                field: s.to_string(),
            })
        };
        let rows = parse(fields[0])? as usize;
        let cols = parse(fields[1])? as usize;
        let ridge = parse(fields[2])?;
        let fit_residual = parse(fields[3])?;
        let mut values = Vec::with_capacity(rows * cols);
        for (i, line) in lines.enumerate() {
            let line = line.map_err(io_err)?;
            for field in line.split_whitespace() {
                values.push(field.parse().map_err(|_| Error::NonNumericField {
                    line: i + 2,
                    field: field.to_string(),
                })?);
            }
        }
        if values.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                context: "coefficient file",
                expected: format!("{} values", rows * cols),
                found: format!("{} values", values.len()),
            });
        }
        let coefficients = Array2::from_shape_vec((rows, cols), values).expect("checked length");
        Ok(LinearMap {
            coefficients,
            ridge,
            fit_residual,
        })
    }

    /// Binary format: magic, row/col counts as little-endian u64, ridge and
    /// residual as little-endian f64, then row-major coefficients.
    pub fn write_binary(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source: std::io::Error| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
        out.write_all(BINARY_MAGIC).map_err(io_err)?;
        out.write_all(&(self.input_dims() as u64).to_le_bytes())
            .map_err(io_err)?;
        out.write_all(&(self.output_dims() as u64).to_le_bytes())
            .map_err(io_err)?;
        out.write_all(&self.ridge.to_le_bytes()).map_err(io_err)?;
        out.write_all(&self.fit_residual.to_le_bytes())
            .map_err(io_err)?;
        for v in self.coefficients.iter() {
            out.write_all(&v.to_le_bytes()).map_err(io_err)?;
        }
        out.flush().map_err(io_err)?;
        Ok(())
    }

    pub fn read_binary(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let io_err = |source: std::io::Error| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut reader = BufReader::new(File::open(path).map_err(io_err)?);
        let mut magic = [0u8; 8];
        reader.read_exact(&mut magic).map_err(io_err)?;
        if &magic != BINARY_MAGIC {
            return Err(Error::InvalidParameter(
                "not a coefficient file (bad magic)".into(),
            ));
        }
        let mut u64_buf = [0u8; 8];
        let mut read_u64 = |reader: &mut BufReader<File>| -> Result<u64> {
            reader.read_exact(&mut u64_buf).map_err(io_err)?;
            Ok(u64::from_le_bytes(u64_buf))
        };
        let rows = read_u64(&mut reader)? as usize;
        let cols = read_u64(&mut reader)? as usize;
        let mut f64_buf = [0u8; 8];
        let mut read_f64 = |reader: &mut BufReader<File>| -> Result<f64> {
            reader.read_exact(&mut f64_buf).map_err(io_err)?;
            Ok(f64::from_le_bytes(f64_buf))
        };
        let ridge = read_f64(&mut reader)?;
        let fit_residual = read_f64(&mut reader)?;
        let mut values = vec![0.0f64; rows * cols];
        for v in values.iter_mut() {
            *v = read_f64(&mut reader)?;
        }
        let coefficients = Array2::from_shape_vec((rows, cols), values).expect("checked length");
        Ok(LinearMap {
            coefficients,
            ridge,
            fit_residual,
        })
    }
}

/// Fits `B` minimizing `||X B - Y||^2 + ridge * ||B||^2`; with `ridge = 0`
/// and a rank-deficient design the minimum-norm minimizer is returned.
///
/// ```
/// use ndarray::array;
/// let x = ndarray::Array2::<f64>::eye(3);
/// let y = array![[2.0], [0.5], [-1.0]];
/// let map = ldl_core::estimate_map(&x, &y, 0.0).unwrap();
/// assert!((map.coefficients[(0, 0)] - 2.0).abs() < 1e-12);
/// assert!(map.fit_residual < 1e-12);
/// ```
pub fn estimate_map<X: DesignMatrix + ?Sized>(
    x: &X,
    y: &Array2<f64>,
    ridge: f64,
) -> Result<LinearMap> {
    if x.nrows() != y.nrows() {
        return Err(Error::ShapeMismatch {
            context: "least squares",
            expected: format!("{} predictor rows", x.nrows()),
            found: format!("{} target rows", y.nrows()),
        });
    }
    if !ridge.is_finite() || ridge < 0.0 {
        return Err(Error::InvalidParameter(
            "ridge must be finite and >= 0".into(),
        ));
    }
    if !x.all_finite() || !y.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let gram = x.gram();
    let xty = x.t_dot(y)?;
    let coefficients = solve_normal_equations(&gram, &xty, ridge, Some(x.nrows()))?;
    let predicted = x.dot(&coefficients)?;
    let fit_residual = (&predicted - y).iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(LinearMap {
        coefficients,
        ridge,
        fit_residual,
    })
}

/// `X * B` for a fitted map.
pub fn apply_map<X: DesignMatrix + ?Sized>(x: &X, map: &LinearMap) -> Result<Array2<f64>> {
    if x.ncols() != map.input_dims() {
        return Err(Error::ShapeMismatch {
            context: "apply map",
            expected: format!("{} columns", map.input_dims()),
            found: format!("{} columns", x.ncols()),
        });
    }
    x.dot(&map.coefficients)
}

/// Comprehension network: cue presences to semantic dimensions.
pub fn comprehension_map(cues: &CueMatrix, s: &SemanticMatrix, ridge: f64) -> Result<LinearMap> {
    estimate_map(&cues.matrix, &s.matrix, ridge)
}

/// Production network: semantic dimensions to cue supports.
pub fn production_map(s: &SemanticMatrix, cues: &CueMatrix, ridge: f64) -> Result<LinearMap> {
    estimate_map(&s.matrix, &cues.matrix.to_dense(), ridge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
        Array2::from_shape_fn((rows, cols), |_| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn identity_design_reproduces_targets() {
        let x = Array2::<f64>::eye(3);
        let y = array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]];
        let map = estimate_map(&x, &y, 0.0).unwrap();
        assert_abs_diff_eq!(
            map.coefficients.as_slice().unwrap(),
            y.as_slice().unwrap(),
            epsilon = 1e-10
        );
        assert!(map.fit_residual < 1e-10);
    }

    #[test]
    fn matches_svd_pseudo_inverse_on_random_instance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = random_matrix(&mut rng, 20, 12);
        let y = random_matrix(&mut rng, 20, 7);
        let map = estimate_map(&x, &y, 0.0).unwrap();
        let x_na = crate::linalg::to_nalgebra(&x);
        let pinv = x_na.svd(true, true).pseudo_inverse(1e-10).unwrap();
        let oracle = crate::linalg::from_nalgebra(&pinv).dot(&y);
        let max_diff = (&map.coefficients - &oracle)
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(max_diff < 1e-8, "max diff {max_diff}");
    }

    #[test]
    fn duplicate_target_columns_get_identical_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_matrix(&mut rng, 15, 6);
        let col = random_matrix(&mut rng, 15, 1);
        let mut y = Array2::zeros((15, 2));
        y.column_mut(0).assign(&col.column(0));
        y.column_mut(1).assign(&col.column(0));
        let map = estimate_map(&x, &y, 0.0).unwrap();
        assert_eq!(map.coefficients.column(0), map.coefficients.column(1));
    }

    #[test]
    fn duplicate_design_columns_get_identical_rows() {
        // two identical predictors split their weight evenly
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let base = random_matrix(&mut rng, 12, 3);
        let mut x = Array2::zeros((12, 4));
        x.column_mut(0).assign(&base.column(0));
        x.column_mut(1).assign(&base.column(0));
        x.column_mut(2).assign(&base.column(1));
        x.column_mut(3).assign(&base.column(2));
        let y = random_matrix(&mut rng, 12, 2);
        let map = estimate_map(&x, &y, 0.0).unwrap();
        let diff = (&map.coefficients.row(0) - &map.coefficients.row(1))
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(diff < 1e-10, "rows differ by {diff}");
    }

    #[test]
    fn ridge_norm_is_non_increasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random_matrix(&mut rng, 25, 10);
        let y = random_matrix(&mut rng, 25, 4);
        let norms: Vec<f64> = [0.0, 0.1, 1.0]
            .iter()
            .map(|&ridge| {
                estimate_map(&x, &y, ridge)
                    .unwrap()
                    .coefficients
                    .iter()
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        assert!(norms[0] >= norms[1] && norms[1] >= norms[2]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = Array2::<f64>::zeros((3, 2));
        let y = Array2::<f64>::zeros((4, 2));
        assert!(matches!(
            estimate_map(&x, &y, 0.0),
            Err(Error::ShapeMismatch { .. })
        ));
        let y_bad = array![[f64::NAN], [0.0], [0.0]];
        assert!(matches!(
            estimate_map(&x, &y_bad, 0.0),
            Err(Error::NonFiniteInput)
        ));
        let y = Array2::<f64>::zeros((3, 1));
        assert!(estimate_map(&x, &y, -1.0).is_err());
    }

    #[test]
    fn apply_map_checks_shapes_and_handles_empty() {
        let map = LinearMap {
            coefficients: array![[1.0, 0.0], [0.0, 1.0]],
            ridge: 0.0,
            fit_residual: 0.0,
        };
        let empty = Array2::<f64>::zeros((0, 2));
        let out = apply_map(&empty, &map).unwrap();
        assert_eq!(out.shape(), &[0, 2]);
        let wrong = Array2::<f64>::zeros((1, 3));
        assert!(apply_map(&wrong, &map).is_err());
    }

    #[test]
    fn text_and_binary_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let map = LinearMap {
            coefficients: random_matrix(&mut rng, 4, 3),
            ridge: 0.25,
            fit_residual: 1.5e-9,
        };
        let dir = tempfile::tempdir().unwrap();
        let text = dir.path().join("map.txt");
        map.write_text(&text).unwrap();
        assert_eq!(LinearMap::read_text(&text).unwrap(), map);
        let bin = dir.path().join("map.bin");
        map.write_binary(&bin).unwrap();
        assert_eq!(LinearMap::read_binary(&bin).unwrap(), map);
    }
}
