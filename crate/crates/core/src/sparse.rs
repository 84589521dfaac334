//! Compressed sparse row storage for binary matrices.
//!
//! The form matrix is binary and very sparse (a handful of cues per word),
//! so products against it are computed by gathering rows instead of dense
//! multiplication.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Binary matrix in compressed row form. Column indices within a row are
/// strictly increasing; every stored entry is an implicit 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBinaryMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
}

impl SparseBinaryMatrix {
    /// Builds a matrix from per-row column sets. Duplicates within a row are
    /// collapsed; indices are sorted.
    pub fn from_rows(rows: Vec<Vec<usize>>, ncols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for mut cols in rows {
            cols.sort_unstable();
            cols.dedup();
            if let Some(&last) = cols.last() {
                if last >= ncols {
                    return Err(Error::IndexOutOfRange {
                        context: "sparse column",
                        index: last,
                        len: ncols,
                    });
                }
            }
            col_idx.extend_from_slice(&cols);
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Sorted column indices of row `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.row(i).binary_search(&j).is_ok()
    }

    /// Iterator over `(row, sorted column slice)` pairs.
    pub fn row_iter(&self) -> impl Iterator<Item = (usize, &[usize])> {
        (0..self.nrows).map(move |i| (i, self.row(i)))
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = Array2::zeros((self.nrows, self.ncols));
        for (i, cols) in self.row_iter() {
            for &j in cols {
                out[(i, j)] = 1.0;
            }
        }
        out
    }

    /// `self * rhs` where `rhs` is `ncols x k`. Row `i` of the result is the
    /// sum of the `rhs` rows selected by row `i`, accumulated in ascending
    /// column order.
    pub fn dot_dense(&self, rhs: &Array2<f64>) -> Result<Array2<f64>> {
        if rhs.nrows() != self.ncols {
            return Err(Error::ShapeMismatch {
                context: "sparse * dense",
                expected: format!("{} rows", self.ncols),
                found: format!("{} rows", rhs.nrows()),
            });
        }
        let k = rhs.ncols();
        let mut out = Array2::zeros((self.nrows, k));
        for (i, cols) in self.row_iter() {
            let mut acc = out.row_mut(i);
            for &j in cols {
                acc += &rhs.row(j);
            }
        }
        Ok(out)
    }

    /// `self^T * rhs` where `rhs` is `nrows x k`.
    pub fn t_dot_dense(&self, rhs: &Array2<f64>) -> Result<Array2<f64>> {
        if rhs.nrows() != self.nrows {
            return Err(Error::ShapeMismatch {
                context: "sparse^T * dense",
                expected: format!("{} rows", self.nrows),
                found: format!("{} rows", rhs.nrows()),
            });
        }
        let k = rhs.ncols();
        let mut out = Array2::zeros((self.ncols, k));
        for (i, cols) in self.row_iter() {
            let src = rhs.row(i);
            for &j in cols {
                let mut dst = out.row_mut(j);
                dst += &src;
            }
        }
        Ok(out)
    }

    /// Gram matrix `self^T * self`, exploiting that entries are 0/1: entry
    /// `(a, b)` counts the rows containing both columns.
    pub fn gram(&self) -> Array2<f64> {
        let mut out = Array2::zeros((self.ncols, self.ncols));
        for (_, cols) in self.row_iter() {
            for &a in cols {
                for &b in cols {
                    out[(a, b)] += 1.0;
                }
            }
        }
        out
    }

    /// Row sums as a dense vector (number of distinct cues per word).
    pub fn row_sums(&self) -> Array1<f64> {
        let mut out = Array1::zeros(self.nrows);
        for (i, cols) in self.row_iter() {
            out[i] = cols.len() as f64;
        }
        out
    }

    /// Reads a Matrix Market coordinate/pattern file with 1-based indices.
    pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let io_err = |source: std::io::Error| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let reader = BufReader::new(File::open(path).map_err(io_err)?);
        let mut lines = reader.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((_, line)) => {
                    let line = line.map_err(io_err)?;
                    let trimmed = line.trim().to_string();
                    if !trimmed.is_empty() && !trimmed.starts_with('%') {
                        break trimmed;
                    }
                }
                None => {
                    return Err(Error::InvalidParameter(
                        "matrix market file has no size line".into(),
                    ))
                }
            }
        };
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|f| {
                f.parse().map_err(|_| Error::NonNumericField {
                    line: 0,
                    field: f.to_string(),
                })
            })
            .collect::<Result<_>>()?;
        if dims.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "bad matrix market size line {header:?}"
            )));
        }
        let (nrows, ncols, nnz) = (dims[0], dims[1], dims[2]);
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); nrows];
        let mut seen = 0usize;
        for (idx, line) in lines {
            let line = line.map_err(io_err)?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let parse = |f: Option<&str>| -> Result<usize> {
                let f = f.ok_or_else(|| {
                    Error::InvalidParameter(format!("short entry at line {}", idx + 1))
                })?;
                f.parse().map_err(|_| Error::NonNumericField {
                    line: idx + 1,
                    field: f.to_string(),
                })
            };
            let i = parse(fields.next())?;
            let j = parse(fields.next())?;
            if i == 0 || j == 0 || i > nrows || j > ncols {
                return Err(Error::IndexOutOfRange {
                    context: "matrix market entry",
                    index: i.max(j),
                    len: nrows.max(ncols),
                });
            }
            rows[i - 1].push(j - 1);
            seen += 1;
        }
        if seen != nnz {
            return Err(Error::ShapeMismatch {
                context: "matrix market",
                expected: format!("{nnz} entries"),
                found: format!("{seen} entries"),
            });
        }
        Self::from_rows(rows, ncols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn from_rows_sorts_and_dedups() {
        let m = SparseBinaryMatrix::from_rows(vec![vec![2, 0, 2], vec![]], 3).unwrap();
        assert_eq!(m.row(0), &[0, 2]);
        assert_eq!(m.row(1), &[] as &[usize]);
        assert_eq!(m.nnz(), 2);
        assert!(m.get(0, 2));
        assert!(!m.get(0, 1));
    }

    #[test]
    fn rejects_out_of_range_column() {
        assert!(SparseBinaryMatrix::from_rows(vec![vec![3]], 3).is_err());
    }

    #[test]
    fn products_match_dense() {
        let m = SparseBinaryMatrix::from_rows(vec![vec![0, 1], vec![1, 2], vec![0]], 3).unwrap();
        let d = m.to_dense();
        let rhs = array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]];
        assert_eq!(m.dot_dense(&rhs).unwrap(), d.dot(&rhs));
        let rhs_t = array![[1.0], [2.0], [3.0]];
        assert_eq!(m.t_dot_dense(&rhs_t).unwrap(), d.t().dot(&rhs_t));
        assert_eq!(m.gram(), d.t().dot(&d));
        assert_eq!(m.row_sums(), array![2.0, 2.0, 1.0]);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let m = SparseBinaryMatrix::from_rows(vec![vec![0]], 2).unwrap();
        assert!(m.dot_dense(&Array2::zeros((3, 1))).is_err());
        assert!(m.t_dot_dense(&Array2::zeros((3, 1))).is_err());
    }
}
