//! Shared fixtures for the pipeline benchmarks.

use ldl_core::*;

pub struct Fixture {
    pub dataset: Dataset,
    pub inventory: CueInventory,
    pub cues: CueMatrix,
    pub semantics: SemanticMatrix,
}

/// A mid-sized synthetic paradigm: `n_lexemes * 59` words.
pub fn paradigm_fixture(n_lexemes: usize) -> Fixture {
    let dataset = synth::agglutinative_paradigm(n_lexemes);
    let (inventory, cues) =
        build_cue_matrix(&dataset, 2, Tokenization::separated("_")).expect("well-formed forms");
    let semantics = simulate_semantics(
        &dataset,
        "Lexeme",
        &[
            "Honorifics".into(),
            "Tense".into(),
            "SpeechLevel".into(),
            "Force".into(),
        ],
        SimulationParams::new(inventory.len(), 1),
    )
    .expect("well-formed columns");
    Fixture {
        dataset,
        inventory,
        cues,
        semantics,
    }
}
