//! Production decoding: per-position cue support models, breadth-first
//! assembly of overlap-consistent cue sequences, and candidate ranking by
//! mapping each candidate form back into semantic space and correlating it
//! with the targeted meaning.

use std::fs::File;
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::cues::{adjacency, CueInventory, CueMatrix};
use crate::error::{Error, Result};
use crate::mapping::{apply_map, estimate_map, LinearMap};
use crate::semantics::SemanticMatrix;

/// Per-position linear maps from semantic dimensions to cue support.
/// The model for position `p` is fit only on words whose cue sequence is at
/// least `p + 1` cues long, against one-hot indicators of the cue occupying
/// that position.
#[derive(Debug, Clone)]
pub struct PositionalModel {
    maps: Vec<LinearMap>,
}

impl PositionalModel {
    /// Number of positions covered (the longest training sequence).
    pub fn max_positions(&self) -> usize {
        self.maps.len()
    }

    pub fn map(&self, position: usize) -> &LinearMap {
        &self.maps[position]
    }

    /// Predicted support of every cue at every position for every word:
    /// one `words x cues` matrix per position.
    pub fn predict_supports(&self, s: &SemanticMatrix) -> Result<Vec<Array2<f64>>> {
        self.maps.iter().map(|m| apply_map(&s.matrix, m)).collect()
    }
}

/// Fits one support model per cue position.
pub fn fit_positional(s: &SemanticMatrix, cues: &CueMatrix, ridge: f64) -> Result<PositionalModel> {
    let n_words = cues.matrix.nrows();
    if n_words == 0 {
        return Err(Error::EmptyDataset);
    }
    if s.rows() != n_words {
        return Err(Error::ShapeMismatch {
            context: "positional fit",
            expected: format!("{n_words} semantic rows"),
            found: format!("{} semantic rows", s.rows()),
        });
    }
    let n_cues = cues.matrix.ncols();
    let max_positions = cues.max_sequence_len();
    let mut maps = Vec::with_capacity(max_positions);
    for p in 0..max_positions {
        let rows: Vec<usize> = (0..n_words)
            .filter(|&i| cues.sequences[i].len() > p)
            .collect();
        let x = s.matrix.select(Axis(0), &rows);
        let mut y = Array2::zeros((rows.len(), n_cues));
        for (k, &i) in rows.iter().enumerate() {
            y[(k, cues.sequences[i][p])] = 1.0;
        }
        maps.push(estimate_map(&x, &y, ridge)?);
    }
    Ok(PositionalModel { maps })
}

/// Decoding knobs. `beam` bounds how many cues survive per position after
/// thresholding; `max_length` bounds candidate sequence length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeParams {
    /// Minimum predicted support for a cue to stay available at a position.
    pub threshold: f64,
    /// Longest candidate sequence considered.
    pub max_length: usize,
    /// At each position, keep at most this many cues (highest support
    /// first; ties go to the lower ordinal).
    pub beam: usize,
}

pub const DEFAULT_THRESHOLD: f64 = 0.1;
pub const DEFAULT_BEAM: usize = 10;

impl DecodeParams {
    /// Default settings for a cue matrix: threshold 0.1, beam 10, and the
    /// longest training sequence plus one as the length bound.
    pub fn for_cues(cues: &CueMatrix) -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            max_length: cues.max_sequence_len() + 1,
            beam: DEFAULT_BEAM,
        }
    }
}

/// One decoded form: an overlap-consistent cue sequence and its synthesis
/// score `r(F . c, s_target)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub sequence: Vec<usize>,
    pub score: f64,
}

/// Ranked candidate lists, one per word, in dataset order.
#[derive(Debug, Clone)]
pub struct PathResult {
    pub candidates: Vec<Vec<Candidate>>,
}

impl PathResult {
    /// Writes `word,rank,candidate,score` rows, ranks starting at 1.
    pub fn write_csv(
        &self,
        forms: &[String],
        inventory: &CueInventory,
        path: impl AsRef<Path>,
    ) -> Result<()> {
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
            .write_record(["word", "rank", "candidate", "score"])
            .map_err(csv_err)?;
        for (i, cands) in self.candidates.iter().enumerate() {
            for (rank, cand) in cands.iter().enumerate() {
                writer
                    .write_record([
                        forms[i].as_str(),
                        &(rank + 1).to_string(),
                        &inventory.sequence_to_form(&cand.sequence)?,
                        &cand.score.to_string(),
                    ])
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

/// Predicted support of every word's gold cue at each of its positions.
#[derive(Debug, Clone)]
pub struct GoldPathInfo {
    /// Entry `i` has one support value per cue of word `i`'s gold sequence.
    pub supports: Vec<Vec<f64>>,
}

impl GoldPathInfo {
    /// Writes `word,position,support` rows, positions starting at 1.
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
        writer
            .write_record(["word", "position", "support"])
            .map_err(csv_err)?;
        for (i, supports) in self.supports.iter().enumerate() {
            for (p, support) in supports.iter().enumerate() {
                writer
                    .write_record([
                        forms[i].as_str(),
                        &(p + 1).to_string(),
                        &support.to_string(),
                    ])
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

/// Binary presence vector over the inventory for a cue sequence.
pub fn candidate_form_vector(sequence: &[usize], inventory: &CueInventory) -> Result<Array1<f64>> {
    let mut v = Array1::zeros(inventory.len());
    for &ordinal in sequence {
        if ordinal >= inventory.len() {
            return Err(Error::UnknownCueOrdinal(ordinal));
        }
        v[ordinal] = 1.0;
    }
    Ok(v)
}

/// Maps a candidate's presence vector through the comprehension network by
/// summing coefficient rows of its distinct cues (ascending ordinal, the
/// same accumulation order the sparse matrix product uses), then correlates
/// with the target meaning. Undefined correlations rank below everything.
fn synthesis_score(
    sequence: &[usize],
    comprehension: &LinearMap,
    target: ArrayView1<'_, f64>,
) -> f64 {
    let mut ordinals: Vec<usize> = sequence.to_vec();
    ordinals.sort_unstable();
    ordinals.dedup();
    let mut predicted = Array1::<f64>::zeros(comprehension.output_dims());
    for &j in &ordinals {
        predicted += &comprehension.coefficients.row(j);
    }
    crate::evaluation::pearson(predicted.view(), target).unwrap_or(f64::NEG_INFINITY)
}

/// Decodes every word: keeps cues whose predicted support clears the
/// threshold (at most `beam` per position), grows all overlap-consistent
/// sequences from boundary-initial to boundary-final cues, ranks them by
/// synthesis score, and reports the gold sequence's positional supports.
pub fn learn_paths(
    inventory: &CueInventory,
    cues: &CueMatrix,
    s: &SemanticMatrix,
    comprehension: &LinearMap,
    positional: &PositionalModel,
    params: &DecodeParams,
) -> Result<(PathResult, GoldPathInfo)> {
    let n_words = cues.matrix.nrows();
    let n_cues = cues.matrix.ncols();
    if !params.threshold.is_finite() || params.threshold <= 0.0 {
        return Err(Error::InvalidParameter("threshold must be > 0".into()));
    }
    if params.beam == 0 {
        return Err(Error::InvalidParameter("beam must be >= 1".into()));
    }
    if params.max_length < cues.max_sequence_len() {
        return Err(Error::InvalidParameter(format!(
            "max_length {} is shorter than the longest gold sequence {}",
            params.max_length,
            cues.max_sequence_len()
        )));
    }
    if s.rows() != n_words {
        return Err(Error::ShapeMismatch {
            context: "path decoding",
            expected: format!("{n_words} semantic rows"),
            found: format!("{} semantic rows", s.rows()),
        });
    }
    if inventory.len() != n_cues
        || comprehension.input_dims() != n_cues
        || comprehension.output_dims() != s.dims()
        || positional.max_positions() < cues.max_sequence_len()
        || positional.maps.iter().any(|m| m.output_dims() != n_cues)
    {
        return Err(Error::ShapeMismatch {
            context: "path decoding",
            expected: "consistent inventory, comprehension map, and positional model".into(),
            found: format!(
                "{} cues, {}x{} comprehension, {} positions",
                n_cues,
                comprehension.input_dims(),
                comprehension.output_dims(),
                positional.max_positions()
            ),
        });
    }

    let supports = positional.predict_supports(s)?;
    let successors = adjacency(inventory);
    let positions = supports.len().min(params.max_length);

    let mut all_candidates = Vec::with_capacity(n_words);
    let mut gold_supports = Vec::with_capacity(n_words);
    for i in 0..n_words {
        // surviving cues per position: support >= threshold, top `beam`
        let mut allowed: Vec<Vec<usize>> = Vec::with_capacity(positions);
        for support in supports.iter().take(positions) {
            let row = support.row(i);
            let mut picked: Vec<(f64, usize)> = row
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v >= params.threshold)
                .map(|(j, &v)| (v, j))
                .collect();
            picked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            picked.truncate(params.beam);
            let mut ordinals: Vec<usize> = picked.into_iter().map(|(_, j)| j).collect();
            ordinals.sort_unstable();
            allowed.push(ordinals);
        }

        let mut complete: Vec<Vec<usize>> = Vec::new();
        let mut frontier: Vec<Vec<usize>> = Vec::new();
        if let Some(first) = allowed.first() {
            for &j in first {
                if inventory.starts_with_boundary(j) {
                    if inventory.ends_with_boundary(j) {
                        complete.push(vec![j]);
                    } else {
                        frontier.push(vec![j]);
                    }
                }
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for seq in frontier {
                let p = seq.len();
                if p >= params.max_length || p >= allowed.len() {
                    continue;
                }
                let last = *seq.last().expect("frontier sequences are non-empty");
                for &succ in &successors[last] {
                    if allowed[p].binary_search(&succ).is_ok() {
                        let mut ext = seq.clone();
                        ext.push(succ);
                        if inventory.ends_with_boundary(succ) {
                            complete.push(ext);
                        } else {
                            next.push(ext);
                        }
                    }
                }
            }
            frontier = next;
        }

        let target = s.matrix.row(i);
        let mut candidates: Vec<Candidate> = complete
            .into_iter()
            .map(|sequence| {
                let score = synthesis_score(&sequence, comprehension, target);
                Candidate { sequence, score }
            })
            .collect();
        candidates.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then(a.sequence.cmp(&b.sequence))
        });
        all_candidates.push(candidates);

        let gold_seq = &cues.sequences[i];
        gold_supports.push(
            gold_seq
                .iter()
                .enumerate()
                .map(|(p, &j)| supports[p][(i, j)])
                .collect(),
        );
    }

    Ok((
        PathResult {
            candidates: all_candidates,
        },
        GoldPathInfo {
            supports: gold_supports,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cues::{build_cue_matrix, Tokenization};
    use crate::dataset::Dataset;
    use crate::evaluation::pearson;
    use crate::mapping::comprehension_map;
    use crate::semantics::{simulate_semantics, SimulationParams};

    fn toy() -> (Dataset, CueInventory, CueMatrix, SemanticMatrix) {
        let ds = Dataset::from_rows(
            vec!["Word".into(), "Lexeme".into(), "Number".into()],
            "Word",
            vec![
                vec!["tri".into(), "TREE".into(), "SG".into()],
                vec!["bi".into(), "BEE".into(), "SG".into()],
                vec!["triz".into(), "TREE".into(), "PL".into()],
                vec!["biz".into(), "BEE".into(), "PL".into()],
            ],
        )
        .unwrap();
        let (inv, cm) = build_cue_matrix(&ds, 2, Tokenization::Characters).unwrap();
        let s = simulate_semantics(
            &ds,
            "Lexeme",
            &["Number".into()],
            SimulationParams::new(8, 1),
        )
        .unwrap();
        (ds, inv, cm, s)
    }

    /// All overlap-legal boundary-to-boundary sequences over the full
    /// inventory, up to `max_len` cues. Used as the enumeration oracle.
    fn enumerate_all_paths(inventory: &CueInventory, max_len: usize) -> Vec<Vec<usize>> {
        let succ = adjacency(inventory);
        let mut complete = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..inventory.len())
            .filter(|&j| inventory.starts_with_boundary(j))
            .map(|j| vec![j])
            .collect();
        while let Some(seq) = stack.pop() {
            let last = *seq.last().unwrap();
            if inventory.ends_with_boundary(last) {
                complete.push(seq);
                continue;
            }
            if seq.len() >= max_len {
                continue;
            }
            for &next in &succ[last] {
                let mut ext = seq.clone();
                ext.push(next);
                stack.push(ext);
            }
        }
        complete
    }

    #[test]
    fn positional_fit_prefers_the_right_initial_cue() {
        let (_, inv, cm, s) = toy();
        let model = fit_positional(&s, &cm, 0.0).unwrap();
        let supports = model.predict_supports(&s).unwrap();
        let t0 = inv.ordinal("#t").unwrap();
        let b0 = inv.ordinal("#b").unwrap();
        // row 2 is "trees"
        assert!(supports[0][(2, t0)] > supports[0][(2, b0)]);
        // row 3 is "bees"
        assert!(supports[0][(3, b0)] > supports[0][(3, t0)]);
    }

    #[test]
    fn identical_single_words_get_unit_support() {
        let ds = Dataset::from_rows(
            vec!["Word".into(), "Lexeme".into()],
            "Word",
            vec![vec!["a".into(), "A".into()]; 3],
        )
        .unwrap();
        let (_, cm) = build_cue_matrix(&ds, 2, Tokenization::Characters).unwrap();
        let s = simulate_semantics(&ds, "Lexeme", &[], SimulationParams::new(4, 0)).unwrap();
        let model = fit_positional(&s, &cm, 0.0).unwrap();
        let supports = model.predict_supports(&s).unwrap();
        for (p, support) in supports.iter().enumerate() {
            let j = cm.sequences[0][p];
            assert!((support[(0, j)] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn empty_dataset_is_rejected() {
        let ds = Dataset::from_rows(vec!["Word".into(), "Lexeme".into()], "Word", vec![]).unwrap();
        let (_, cm) = build_cue_matrix(&ds, 2, Tokenization::Characters).unwrap();
        let s = simulate_semantics(&ds, "Lexeme", &[], SimulationParams::new(4, 0)).unwrap();
        assert!(matches!(
            fit_positional(&s, &cm, 0.0),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn toy_decoding_recovers_every_gold_sequence() {
        let (_, inv, cm, s) = toy();
        let f = comprehension_map(&cm, &s, 0.0).unwrap();
        let model = fit_positional(&s, &cm, 0.0).unwrap();
        let params = DecodeParams {
            threshold: 0.1,
            max_length: 6,
            beam: inv.len(),
        };
        let (paths, gpi) = learn_paths(&inv, &cm, &s, &f, &model, &params).unwrap();
        for i in 0..4 {
            let top = &paths.candidates[i][0];
            assert_eq!(top.sequence, cm.sequences[i], "word {i}");
            assert_eq!(gpi.supports[i].len(), cm.sequences[i].len());
        }
        // against the exhaustive enumeration: gold must outscore every legal
        // path of length <= 6 under the same scoring function
        let all = enumerate_all_paths(&inv, 6);
        for i in 0..4 {
            let gold = &cm.sequences[i];
            let gold_score = synthesis_score(gold, &f, s.matrix.row(i));
            for path in &all {
                if path != gold {
                    assert!(
                        synthesis_score(path, &f, s.matrix.row(i)) <= gold_score,
                        "word {i} lost to {path:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn emitted_candidates_respect_boundary_and_overlap() {
        let (_, inv, cm, s) = toy();
        let f = comprehension_map(&cm, &s, 0.0).unwrap();
        let model = fit_positional(&s, &cm, 0.0).unwrap();
        let params = DecodeParams {
            threshold: 0.05,
            max_length: 6,
            beam: inv.len(),
        };
        let (paths, _) = learn_paths(&inv, &cm, &s, &f, &model, &params).unwrap();
        for cands in &paths.candidates {
            for cand in cands {
                let seq = &cand.sequence;
                assert!(inv.starts_with_boundary(seq[0]));
                assert!(inv.ends_with_boundary(*seq.last().unwrap()));
                assert!(seq.len() <= params.max_length);
                for pair in seq.windows(2) {
                    assert_eq!(inv.tokens(pair[0])[1..], inv.tokens(pair[1])[..1]);
                }
            }
            // ranking is by descending score
            for pair in cands.windows(2) {
                assert!(pair[0].score >= pair[1].score);
            }
        }
    }

    #[test]
    fn synthesis_score_of_gold_matches_comprehension_correlation() {
        let (_, inv, cm, s) = toy();
        let f = comprehension_map(&cm, &s, 0.0).unwrap();
        let s_hat = crate::mapping::apply_map(&cm.matrix, &f).unwrap();
        for i in 0..4 {
            let via_decoder = synthesis_score(&cm.sequences[i], &f, s.matrix.row(i));
            let via_eval = pearson(s_hat.row(i), s.matrix.row(i)).unwrap();
            assert!((via_decoder - via_eval).abs() < 1e-12);
            let _ = inv;
        }
    }

    #[test]
    fn lowering_threshold_never_removes_candidates() {
        let (_, inv, cm, s) = toy();
        let f = comprehension_map(&cm, &s, 0.0).unwrap();
        let model = fit_positional(&s, &cm, 0.0).unwrap();
        let mut previous: Option<Vec<Vec<Vec<usize>>>> = None;
        for threshold in [0.2, 0.1, 0.05] {
            let params = DecodeParams {
                threshold,
                max_length: 6,
                beam: inv.len(),
            };
            let (paths, _) = learn_paths(&inv, &cm, &s, &f, &model, &params).unwrap();
            let sets: Vec<Vec<Vec<usize>>> = paths
                .candidates
                .iter()
                .map(|cands| cands.iter().map(|c| c.sequence.clone()).collect())
                .collect();
            if let Some(prev) = &previous {
                for (tight, loose) in prev.iter().zip(sets.iter()) {
                    for seq in tight {
                        assert!(loose.contains(seq));
                    }
                }
            }
            previous = Some(sets);
        }
    }

    #[test]
    fn form_vector_marks_distinct_cues_once() {
        let (_, inv, cm, _) = toy();
        let gold = candidate_form_vector(&cm.sequences[0], &inv).unwrap();
        let dense = cm.matrix.to_dense();
        assert_eq!(gold, dense.row(0).to_owned());
        let repeated = candidate_form_vector(&[0, 0, 1], &inv).unwrap();
        assert_eq!(repeated.iter().filter(|&&v| v == 1.0).count(), 2);
        assert!(candidate_form_vector(&[inv.len()], &inv).is_err());
    }

    #[test]
    fn novel_recombination_builds_its_own_vector() {
        // without "bees" in the data, #b, bi, iz, z# is overlap-legal but
        // corresponds to no dataset row
        let ds = Dataset::from_rows(
            vec!["Word".into(), "Lexeme".into(), "Number".into()],
            "Word",
            vec![
                vec!["tri".into(), "TREE".into(), "SG".into()],
                vec!["bi".into(), "BEE".into(), "SG".into()],
                vec!["triz".into(), "TREE".into(), "PL".into()],
            ],
        )
        .unwrap();
        let (inv, cm) = build_cue_matrix(&ds, 2, Tokenization::Characters).unwrap();
        let seq: Vec<usize> = ["#b", "bi", "iz", "z#"]
            .iter()
            .map(|c| inv.ordinal(c).unwrap())
            .collect();
        let succ = adjacency(&inv);
        for pair in seq.windows(2) {
            assert!(succ[pair[0]].contains(&pair[1]));
        }
        let v = candidate_form_vector(&seq, &inv).unwrap();
        assert_eq!(v.sum(), 4.0);
        assert!(!cm.sequences.contains(&seq));
        assert_eq!(inv.sequence_to_form(&seq).unwrap(), "biz");
    }

    #[test]
    fn decode_rejects_bad_params() {
        let (_, inv, cm, s) = toy();
        let f = comprehension_map(&cm, &s, 0.0).unwrap();
        let model = fit_positional(&s, &cm, 0.0).unwrap();
        let bad_threshold = DecodeParams {
            threshold: 0.0,
            max_length: 6,
            beam: 5,
        };
        assert!(learn_paths(&inv, &cm, &s, &f, &model, &bad_threshold).is_err());
        let bad_length = DecodeParams {
            threshold: 0.1,
            max_length: 3,
            beam: 5,
        };
        assert!(learn_paths(&inv, &cm, &s, &f, &model, &bad_length).is_err());
    }
}
