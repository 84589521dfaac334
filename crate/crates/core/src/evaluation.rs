//! Accuracy scoring: comprehension by nearest-correlation matching against
//! gold semantic vectors, production by exact match of decoded cue
//! sequences.

use std::fs::File;
use std::path::Path;

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::paths::Candidate;

/// Pearson correlation of two equal-length vectors.
pub fn pearson(u: ArrayView1<'_, f64>, v: ArrayView1<'_, f64>) -> Result<f64> {
    if u.len() != v.len() || u.is_empty() {
        return Err(Error::ShapeMismatch {
            context: "pearson",
            expected: format!("two non-empty vectors of length {}", u.len()),
            found: format!("lengths {} and {}", u.len(), v.len()),
        });
    }
    let n = u.len() as f64;
    let mean_u = u.sum() / n;
    let mean_v = v.sum() / n;
    let mut cov = 0.0;
    let mut var_u = 0.0;
    let mut var_v = 0.0;
    for (&a, &b) in u.iter().zip(v.iter()) {
        let da = a - mean_u;
        let db = b - mean_v;
        cov += da * db;
        var_u += da * da;
        var_v += db * db;
    }
    if var_u == 0.0 || var_v == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((cov / (var_u.sqrt() * var_v.sqrt())).clamp(-1.0, 1.0))
}

/// Comprehension accuracy plus the full correlation matrix.
#[derive(Debug, Clone)]
pub struct CorrelationResult {
    /// Fraction of words whose predicted vector correlates best with a gold
    /// vector carrying the same form string.
    pub accuracy: f64,
    /// `predicted-rows x gold-rows` Pearson correlations.
    pub correlations: Array2<f64>,
}

impl CorrelationResult {
    /// Writes the correlation matrix as csv with form-string headers.
    pub fn write_csv(&self, forms: &[String], path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut writer = csv::Writer::from_writer(file);
        let csv_err = |source: csv::Error| Error::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut header = vec![String::new()];
        header.extend_from_slice(forms);
        writer.write_record(&header).map_err(csv_err)?;
        for (i, row) in self.correlations.rows().into_iter().enumerate() {
            let mut record = vec![forms[i].clone()];
            record.extend(row.iter().map(|v| v.to_string()));
            writer.write_record(&record).map_err(csv_err)?;
        }
        writer.flush().map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(())
    }
}

/// Centers and L2-normalizes every row; errors on zero-variance rows.
fn standardize_rows(m: &Array2<f64>, label: &'static str) -> Result<Array2<f64>> {
    let n = m.ncols() as f64;
    let mut out = m.clone();
    for (i, mut row) in out.rows_mut().into_iter().enumerate() {
        let mean = row.sum() / n;
        row.mapv_inplace(|v| v - mean);
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVarianceRow {
                matrix: label,
                row: i,
            });
        }
        row.mapv_inplace(|v| v / norm);
    }
    Ok(out)
}

/// Scores predicted semantic vectors against gold ones: word `i` counts
/// correct iff the gold row with maximal correlation to its prediction
/// carries the same form string (so homophones may stand in for each
/// other). Ties resolve to the lowest gold row index.
pub fn evaluate_comprehension(
    predicted: &Array2<f64>,
    gold: &Array2<f64>,
    forms: &[String],
) -> Result<CorrelationResult> {
    if predicted.shape() != gold.shape() {
        return Err(Error::ShapeMismatch {
            context: "comprehension evaluation",
            expected: format!("{:?}", gold.shape()),
            found: format!("{:?}", predicted.shape()),
        });
    }
    if forms.len() != predicted.nrows() {
        return Err(Error::ShapeMismatch {
            context: "comprehension evaluation",
            expected: format!("{} forms", predicted.nrows()),
            found: format!("{} forms", forms.len()),
        });
    }
    let z_pred = standardize_rows(predicted, "predicted")?;
    let z_gold = standardize_rows(gold, "gold")?;
    let mut correlations = z_pred.dot(&z_gold.t());
    correlations.mapv_inplace(|v| v.clamp(-1.0, 1.0));

    let mut correct = 0usize;
    for (i, row) in correlations.rows().into_iter().enumerate() {
        let mut best = 0usize;
        for (j, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = j;
            }
        }
        if forms[best] == forms[i] {
            correct += 1;
        }
    }
    let accuracy = if forms.is_empty() {
        0.0
    } else {
        correct as f64 / forms.len() as f64
    };
    Ok(CorrelationResult {
        accuracy,
        correlations,
    })
}

/// Fraction of words whose top-ranked decoded candidate reproduces the gold
/// cue sequence exactly. Words with no candidates count as incorrect.
pub fn evaluate_production(decoded: &[Vec<Candidate>], gold: &[Vec<usize>]) -> f64 {
    if gold.is_empty() {
        return 0.0;
    }
    let correct = decoded
        .iter()
        .zip(gold.iter())
        .filter(|(cands, gold_seq)| {
            cands
                .first()
                .is_some_and(|best| &best.sequence == *gold_seq)
        })
        .count();
    correct as f64 / gold.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn pearson_reference_values() {
        let u = array![1.0, 2.0, 3.0];
        assert_abs_diff_eq!(pearson(u.view(), u.view()).unwrap(), 1.0, epsilon = 1e-15);
        let neg = array![-1.0, -2.0, -3.0];
        assert_abs_diff_eq!(
            pearson(u.view(), neg.view()).unwrap(),
            -1.0,
            epsilon = 1e-15
        );
        let v = array![1.0, 2.0, 4.0];
        // hand formula: cov = 3, var_u = 2, var_v = 14/3
        let expected = 3.0 / (2.0_f64 * 14.0 / 3.0).sqrt();
        assert_abs_diff_eq!(
            pearson(u.view(), v.view()).unwrap(),
            expected,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            pearson(u.view(), v.view()).unwrap(),
            0.9819805060619659,
            epsilon = 1e-12
        );
    }

    #[test]
    fn pearson_rejects_zero_variance_and_length_mismatch() {
        let c = array![2.0, 2.0, 2.0];
        let u = array![1.0, 2.0, 3.0];
        assert!(matches!(
            pearson(c.view(), u.view()),
            Err(Error::ZeroVariance)
        ));
        let short = array![1.0, 2.0];
        assert!(pearson(u.view(), short.view()).is_err());
    }

    #[test]
    fn perfect_prediction_scores_one() {
        let s = array![[1.0, 2.0, 0.5], [0.0, 1.0, 2.0], [3.0, 0.0, 1.0]];
        let forms = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let result = evaluate_comprehension(&s, &s, &forms).unwrap();
        assert_eq!(result.accuracy, 1.0);
        for i in 0..3 {
            assert_abs_diff_eq!(result.correlations[(i, i)], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn homophones_with_swapped_best_matches_both_count_correct() {
        // rows 0 and 1 share the form "mekeyo"; prediction 0 lands nearest
        // gold row 1 and vice versa. both count correct; row 2 is its own.
        let gold = array![
            [1.0, 0.0, 0.0, 2.0],
            [0.0, 1.0, 0.0, 2.0],
            [0.0, 0.0, 1.0, -1.0]
        ];
        let predicted = array![
            [0.0, 1.0, 0.1, 2.0],
            [1.0, 0.0, 0.1, 2.0],
            [0.1, 0.0, 1.0, -1.0]
        ];
        let forms = vec![
            "mekeyo".to_string(),
            "mekeyo".to_string(),
            "mannada".to_string(),
        ];
        // brute-force oracle over the 3x3 grid
        let mut oracle = Array2::zeros((3, 3));
        for i in 0..3 {
            for j in 0..3 {
                oracle[(i, j)] = pearson(predicted.row(i), gold.row(j)).unwrap();
            }
        }
        assert!(oracle[(0, 1)] > oracle[(0, 0)]);
        assert!(oracle[(1, 0)] > oracle[(1, 1)]);
        let result = evaluate_comprehension(&predicted, &gold, &forms).unwrap();
        assert_eq!(result.accuracy, 1.0);
        let max_diff = (&result.correlations - &oracle)
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(max_diff < 1e-12);
    }

    #[test]
    fn zero_variance_row_is_named() {
        let gold = array![[1.0, 2.0], [3.0, 4.0]];
        let predicted = array![[1.0, 2.0], [5.0, 5.0]];
        let forms = vec!["a".to_string(), "b".to_string()];
        let err = evaluate_comprehension(&predicted, &gold, &forms).unwrap_err();
        assert!(matches!(
            err,
            Error::ZeroVarianceRow {
                matrix: "predicted",
                row: 1
            }
        ));
    }

    #[test]
    fn production_counts_only_exact_top_matches() {
        let gold = vec![vec![0, 1, 2], vec![3, 4]];
        let decoded = vec![
            vec![
                Candidate {
                    sequence: vec![0, 1, 2],
                    score: 0.9,
                },
                Candidate {
                    sequence: vec![0, 1],
                    score: 0.2,
                },
            ],
            vec![Candidate {
                sequence: vec![3, 3],
                score: 0.5,
            }],
        ];
        assert_eq!(evaluate_production(&decoded, &gold), 0.5);
        let empty = vec![Vec::new(), Vec::new()];
        assert_eq!(evaluate_production(&empty, &gold), 0.0);
    }
}
