//! Shared dense-matrix numerics: the normal-equation solver used by all
//! least-squares fits, and the symmetric eigendecomposition used for
//! pseudo-inverse fallback and principal components.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::Array2;

use crate::error::{Error, Result};

/// Relative conditioning gate for the Cholesky fast path: if the ratio of
/// extreme Cholesky pivots falls below this, the Gram matrix is treated as
/// rank-deficient and the solve falls back to the pseudo-inverse route.
/// Spurious pivots on an exactly singular matrix land near
/// `sqrt(n * epsilon)`, a couple of orders of magnitude below this floor.
const PIVOT_RATIO_FLOOR: f64 = 1e-5;

pub(crate) fn to_nalgebra(a: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

pub(crate) fn from_nalgebra(a: &DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((a.nrows(), a.ncols()), |(i, j)| a[(i, j)])
}

/// Solves `(gram + ridge * I) * b = rhs` for `b`.
///
/// `gram` must be symmetric positive semi-definite (an `X^T X` product of a
/// design with `design_rows` rows, when known). With `ridge > 0` the system
/// is definite and Cholesky applies directly. With `ridge = 0` a
/// well-conditioned Cholesky is attempted first; on failure, or when the
/// design has fewer rows than columns (which makes the Gram matrix
/// singular), the minimum-norm solution is computed from the
/// eigendecomposition of `gram`, zeroing the near-null spectrum, which
/// yields the Moore-Penrose solution of the underlying least-squares
/// problem.
pub(crate) fn solve_normal_equations(
    gram: &Array2<f64>,
    rhs: &Array2<f64>,
    ridge: f64,
    design_rows: Option<usize>,
) -> Result<Array2<f64>> {
    let n = gram.nrows();
    if gram.ncols() != n {
        return Err(Error::ShapeMismatch {
            context: "normal equations",
            expected: "square gram matrix".into(),
            found: format!("{}x{}", gram.nrows(), gram.ncols()),
        });
    }
    if rhs.nrows() != n {
        return Err(Error::ShapeMismatch {
            context: "normal equations",
            expected: format!("{n} rhs rows"),
            found: format!("{} rhs rows", rhs.nrows()),
        });
    }
    if n == 0 {
        return Ok(Array2::zeros((0, rhs.ncols())));
    }

    let mut regularized = to_nalgebra(gram);
    for i in 0..n {
        regularized[(i, i)] += ridge;
    }
    let rhs_na = to_nalgebra(rhs);

    let provably_singular = ridge == 0.0 && design_rows.is_some_and(|rows| rows < n);
    if !provably_singular {
        if let Some(chol) = regularized.clone().cholesky() {
            let pivots: Vec<f64> = (0..n).map(|i| chol.l_dirty()[(i, i)]).collect();
            let max_pivot = pivots.iter().cloned().fold(0.0_f64, f64::max);
            let min_pivot = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
            if ridge > 0.0 || min_pivot > PIVOT_RATIO_FLOOR * max_pivot {
                let solution = chol.solve(&rhs_na);
                return Ok(from_nalgebra(&solution));
            }
        }
    }

    let solution = pseudo_solve(regularized, &rhs_na)?;
    Ok(from_nalgebra(&solution))
}

/// Minimum-norm solve of a symmetric PSD system via eigendecomposition:
/// eigenvalues below a relative floor are treated as exact zeros.
fn pseudo_solve(sym: DMatrix<f64>, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = sym.nrows();
    let eig = SymmetricEigen::new(sym);
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(
            "eigendecomposition produced non-finite values".into(),
        ));
    }
    let max_ev = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let floor = max_ev * (n as f64) * f64::EPSILON * 8.0;
    let inv_ev: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&v| if v > floor { 1.0 / v } else { 0.0 })
        .collect();
    // Q * diag(inv) * Q^T * rhs, evaluated right-to-left.
    let qt_rhs = eig.eigenvectors.transpose() * rhs;
    let mut scaled = qt_rhs;
    for (i, &inv) in inv_ev.iter().enumerate() {
        scaled.row_mut(i).scale_mut(inv);
    }
    Ok(&eig.eigenvectors * scaled)
}

/// Eigendecomposition of a symmetric PSD matrix with eigenpairs sorted by
/// descending eigenvalue. Returns `(eigenvalues, eigenvectors)` with
/// eigenvectors in columns.
pub(crate) fn symmetric_eigen_descending(sym: &Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    let n = sym.nrows();
    let eig = SymmetricEigen::new(to_nalgebra(sym));
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(
            "eigendecomposition produced non-finite values".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("finite eigenvalues")
            .then(a.cmp(&b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = Array2::from_shape_fn((n, n), |(i, j)| eig.eigenvectors[(i, order[j])]);
    Ok((eigenvalues, eigenvectors))
}
