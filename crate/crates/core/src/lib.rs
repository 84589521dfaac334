//! Linear discriminative learning for the mental lexicon.
//!
//! Words get two numeric representations: a sparse binary vector of
//! boundary-marked n-gram cues (the form) and a dense real vector (the
//! meaning, simulated from lexeme and feature vectors or loaded from an
//! embedding file). Regularized multivariate least squares maps each space
//! onto the other: the comprehension network predicts meanings from forms,
//! the production network predicts cue support from meanings. Produced
//! forms are decoded by ordering cues position by position and re-checking
//! candidates through the comprehension network; several processing
//! measures are then read off the fitted networks.

pub mod cues;
pub mod dataset;
pub mod error;
pub mod evaluation;
mod linalg;
pub mod mapping;
pub mod measures;
pub mod paths;
pub mod semantics;
pub mod sparse;
pub mod synth;

pub use cues::{adjacency, build_cue_matrix, tokenize_form, CueInventory, CueMatrix, Tokenization};
pub use dataset::{Dataset, WordRecord};
pub use error::{Error, Result};
pub use evaluation::{evaluate_comprehension, evaluate_production, pearson, CorrelationResult};
pub use mapping::{
    apply_map, comprehension_map, estimate_map, production_map, DesignMatrix, LinearMap,
};
pub use measures::{
    distance_travelled, functional_load, pca_project, prime_target_approximation, total_support,
    FunctionalLoad,
};
pub use paths::{
    candidate_form_vector, fit_positional, learn_paths, Candidate, DecodeParams, GoldPathInfo,
    PathResult, PositionalModel,
};
pub use semantics::{
    load_embeddings, simulate_semantics, Lexome, Provenance, SemanticMatrix, SimulationParams,
};
pub use sparse::SparseBinaryMatrix;
