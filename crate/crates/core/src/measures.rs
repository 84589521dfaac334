//! Measures derived from the fitted networks: prime-to-target
//! approximation, distance travelled along production cue vectors, summed
//! gold-path support, functional-load correlations, and the 2-D principal
//! component projection of cue vectors.

use std::fs::File;
use std::path::Path;

use ndarray::{Array1, Array2, Axis};

use crate::cues::CueInventory;
use crate::error::{Error, Result};
use crate::evaluation::{pearson, CorrelationResult};
use crate::linalg::symmetric_eigen_descending;
use crate::mapping::LinearMap;
use crate::paths::GoldPathInfo;
use crate::semantics::SemanticMatrix;

/// Correlation between a prime's predicted semantic vector and a target's
/// gold vector, read off the comprehension correlation matrix.
pub fn prime_target_approximation(
    result: &CorrelationResult,
    prime: usize,
    target: usize,
) -> Result<f64> {
    let (rows, cols) = result.correlations.dim();
    if prime >= rows {
        return Err(Error::IndexOutOfRange {
            context: "prime",
            index: prime,
            len: rows,
        });
    }
    if target >= cols {
        return Err(Error::IndexOutOfRange {
            context: "target",
            index: target,
            len: cols,
        });
    }
    Ok(result.correlations[(prime, target)])
}

/// Total Euclidean distance walked along a word's successive production
/// cue vectors, starting from the origin: columns of the production map
/// indexed by the gold sequence, in full dimension.
pub fn distance_travelled(production: &LinearMap, sequence: &[usize]) -> Result<f64> {
    if sequence.is_empty() {
        return Err(Error::InvalidParameter(
            "distance travelled needs a non-empty cue sequence".into(),
        ));
    }
    let n_cues = production.output_dims();
    for &ordinal in sequence {
        if ordinal >= n_cues {
            return Err(Error::UnknownCueOrdinal(ordinal));
        }
    }
    let mut total = 0.0;
    let mut previous: Option<usize> = None;
    for &ordinal in sequence {
        let current = production.coefficients.column(ordinal);
        let leg = match previous {
            None => current.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Some(prev) => {
                let prev = production.coefficients.column(prev);
                current
                    .iter()
                    .zip(prev.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            }
        };
        total += leg;
        previous = Some(ordinal);
    }
    Ok(total)
}

/// Sum of a word's gold-path positional supports.
pub fn total_support(gpi: &GoldPathInfo, word: usize) -> Result<f64> {
    let supports = gpi.supports.get(word).ok_or(Error::IndexOutOfRange {
        context: "gold path info",
        index: word,
        len: gpi.supports.len(),
    })?;
    Ok(supports.iter().sum())
}

/// Pearson correlations of every production cue vector with every lexome
/// vector; `None` where the correlation is undefined (constant vectors).
#[derive(Debug, Clone)]
pub struct FunctionalLoad {
    pub cues: Vec<String>,
    pub lexomes: Vec<String>,
    /// `cues x lexomes`.
    pub correlations: Vec<Vec<Option<f64>>>,
}

impl FunctionalLoad {
    /// The lexome most correlated with a cue, if any correlation is defined.
    pub fn best_lexome(&self, cue: usize) -> Option<(&str, f64)> {
        self.correlations[cue]
            .iter()
            .enumerate()
            .filter_map(|(k, r)| r.map(|v| (k, v)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, v)| (self.lexomes[k].as_str(), v))
    }

    /// Writes `cue,lexome,correlation` rows; undefined correlations leave
    /// the value cell empty.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
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
        writer
            .write_record(["cue", "lexome", "correlation"])
            .map_err(csv_err)?;
        for (i, row) in self.correlations.iter().enumerate() {
            for (k, r) in row.iter().enumerate() {
                let value = r.map(|v| v.to_string()).unwrap_or_default();
                writer
                    .write_record([self.cues[i].as_str(), self.lexomes[k].as_str(), &value])
                    .map_err(csv_err)?;
            }
        }
        writer.flush().map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(())
    }
}

/// Correlates production cue vectors with the elementary lexome vectors of
/// a simulated semantic space.
pub fn functional_load(
    production: &LinearMap,
    inventory: &CueInventory,
    space: &SemanticMatrix,
) -> Result<FunctionalLoad> {
    if !space.is_simulated() {
        return Err(Error::LoadedProvenance);
    }
    if production.output_dims() != inventory.len() || production.input_dims() != space.dims() {
        return Err(Error::ShapeMismatch {
            context: "functional load",
            expected: format!("{}x{} production map", space.dims(), inventory.len()),
            found: format!("{}x{}", production.input_dims(), production.output_dims()),
        });
    }
    let lexome_names: Vec<String> = space
        .lexomes()
        .iter()
        .map(|l| space.lexome_name(l))
        .collect();
    let correlations = (0..inventory.len())
        .map(|j| {
            let cue_vector = production.coefficients.column(j);
            space
                .lexomes()
                .iter()
                .map(|l| pearson(cue_vector, l.vector.view()).ok())
                .collect()
        })
        .collect();
    Ok(FunctionalLoad {
        cues: inventory.cues().to_vec(),
        lexomes: lexome_names,
        correlations,
    })
}

/// Projects production cue vectors onto their first two principal axes.
///
/// Cue vectors are centered over cues, the axes come from the
/// eigendecomposition of the scatter matrix, and each axis is sign-fixed so
/// its largest-magnitude loading is positive. Returns `cues x 2`
/// coordinates. Distances in the projection never exceed full-space
/// distances.
pub fn pca_project(production: &LinearMap) -> Result<Array2<f64>> {
    let n_cues = production.output_dims();
    if n_cues < 2 {
        return Err(Error::TooFewCues(n_cues));
    }
    let dims = production.input_dims();
    // points = cue vectors as rows
    let mut points = production.coefficients.t().to_owned();
    let means = points.mean_axis(Axis(0)).expect("n_cues >= 2 rows");
    for mut row in points.rows_mut() {
        row -= &means;
    }
    let scatter = points.t().dot(&points);
    let (_, eigenvectors) = symmetric_eigen_descending(&scatter)?;
    let mut coordinates = Array2::zeros((n_cues, 2));
    for component in 0..2.min(dims) {
        let mut axis: Array1<f64> = eigenvectors.column(component).to_owned();
        let mut top = 0usize;
        for (k, v) in axis.iter().enumerate() {
            if v.abs() > axis[top].abs() {
                top = k;
            }
        }
        if axis[top] < 0.0 {
            axis.mapv_inplace(|v| -v);
        }
        let coords = points.dot(&axis);
        coordinates.column_mut(component).assign(&coords);
    }
    Ok(coordinates)
}

/// Writes `cue,pc1,pc2` rows for a computed projection.
pub fn write_projection_csv(
    cues: &[String],
    coordinates: &Array2<f64>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    if coordinates.nrows() != cues.len() || coordinates.ncols() != 2 {
        return Err(Error::ShapeMismatch {
            context: "projection export",
            expected: format!("{}x2 coordinates", cues.len()),
            found: format!("{}x{}", coordinates.nrows(), coordinates.ncols()),
        });
    }
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(file);
    let csv_err = |source: csv::Error| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    writer
        .write_record(["cue", "pc1", "pc2"])
        .map_err(csv_err)?;
    for (i, cue) in cues.iter().enumerate() {
        writer
            .write_record([
                cue.as_str(),
                &coordinates[(i, 0)].to_string(),
                &coordinates[(i, 1)].to_string(),
            ])
            .map_err(csv_err)?;
    }
    writer.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}
