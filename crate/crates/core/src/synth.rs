//! Synthetic datasets for tests, benchmarks, and demos: a templatic
//! agglutinative verb paradigm, prime-target quadruples for priming
//! simulations, and small random lexicons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;

const STEM_CONSONANTS: [&str; 5] = ["b", "d", "g", "m", "n"];
const WIDE_CONSONANTS: [&str; 15] = [
    "b", "c", "d", "f", "g", "h", "j", "l", "m", "n", "q", "v", "w", "x", "z",
];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];

const HONORIFICS: [(&str, &str); 2] = [("plain", ""), ("hon", "si")];
const TENSES: [(&str, &str); 3] = [("pres", ""), ("past", "ta"), ("fut", "ke")];
const SPEECH_LEVELS: [(&str, &str); 4] =
    [("for", "pa"), ("pol", "po"), ("int", "pe"), ("pln", "pu")];
const FORCES: [(&str, &str); 4] = [("dec", "ra"), ("inq", "ri"), ("imp", "ro"), ("pro", "ru")];

fn stem_syllable(i: usize) -> String {
    format!(
        "{}{}",
        STEM_CONSONANTS[(i / VOWELS.len()) % STEM_CONSONANTS.len()],
        VOWELS[i % VOWELS.len()]
    )
}

fn wide_syllable(i: usize) -> String {
    format!(
        "{}{}",
        WIDE_CONSONANTS[(i / VOWELS.len()) % WIDE_CONSONANTS.len()],
        VOWELS[i % VOWELS.len()]
    )
}

/// Feature bundles of the paradigm: the full honorific x tense x speech
/// level x force grid minus tense/force combinations treated as impossible,
/// truncated to 59 bundles per lexeme.
fn paradigm_bundles() -> Vec<[usize; 4]> {
    let mut bundles = Vec::new();
    for h in 0..HONORIFICS.len() {
        for (t, (tense, _)) in TENSES.iter().enumerate() {
            for s in 0..SPEECH_LEVELS.len() {
                for (f, (force, _)) in FORCES.iter().enumerate() {
                    let impossible = (*tense == "past" || *tense == "fut")
                        && (*force == "imp" || *force == "pro");
                    if !impossible {
                        bundles.push([h, t, s, f]);
                    }
                }
            }
        }
    }
    bundles.truncate(59);
    bundles
}

/// A fully regular agglutinative verb paradigm: `n_lexemes` two-syllable
/// stems, each inflected for 59 feature bundles realized by concatenated
/// suffix syllables. Syllables are underscore-separated; suffix syllables
/// never collide with stem syllables. 40 lexemes give 2360 word forms.
///
/// Columns: `Word`, `Lexeme`, `Honorifics`, `Tense`, `SpeechLevel`, `Force`.
pub fn agglutinative_paradigm(n_lexemes: usize) -> Dataset {
    let n_syllables = STEM_CONSONANTS.len() * VOWELS.len();
    let mut stems = Vec::with_capacity(n_lexemes);
    'outer: for d in 1..n_syllables {
        for i in 0..n_syllables {
            stems.push((stem_syllable(i), stem_syllable((i + d) % n_syllables)));
            if stems.len() == n_lexemes {
                break 'outer;
            }
        }
    }
    assert_eq!(stems.len(), n_lexemes, "not enough distinct stems");

    let bundles = paradigm_bundles();
    let mut rows = Vec::with_capacity(n_lexemes * bundles.len());
    for (s1, s2) in &stems {
        let lexeme = format!("{s1}{s2}");
        for &[h, t, s, f] in &bundles {
            let mut syllables = vec![s1.as_str(), s2.as_str()];
            for suffix in [
                HONORIFICS[h].1,
                TENSES[t].1,
                SPEECH_LEVELS[s].1,
                FORCES[f].1,
            ] {
                if !suffix.is_empty() {
                    syllables.push(suffix);
                }
            }
            rows.push(vec![
                syllables.join("_"),
                lexeme.clone(),
                HONORIFICS[h].0.to_string(),
                TENSES[t].0.to_string(),
                SPEECH_LEVELS[s].0.to_string(),
                FORCES[f].0.to_string(),
            ]);
        }
    }
    Dataset::from_rows(
        vec![
            "Word".into(),
            "Lexeme".into(),
            "Honorifics".into(),
            "Tense".into(),
            "SpeechLevel".into(),
            "Force".into(),
        ],
        "Word",
        rows,
    )
    .expect("generated rows are well-formed")
}

/// Row indices of one prime-target quadruple in a priming lexicon.
#[derive(Debug, Clone, Copy)]
pub struct PrimingQuadruple {
    pub target: usize,
    /// Shares the target's stem form and its lexeme.
    pub morph_sem: usize,
    /// Shares the target's stem form under an unrelated lexeme.
    pub morph_only: usize,
    /// Shares only the stem-initial syllable.
    pub phon: usize,
    /// Shares no content syllable.
    pub control: usize,
}

/// A lexicon of prime-target quadruples: for each target, a
/// morphologically-and-semantically related prime (same stem, same
/// lexeme), a form-only related prime (same stem surface under an opaque
/// lexeme), a partially overlapping prime (stem-initial syllable only),
/// and an unrelated control. At most 15 quadruples are available.
///
/// The lexicon is deliberately overloaded so the comprehension map cannot
/// interpolate it: every stem carries a 12-bundle tense-by-force paradigm,
/// the shared stem `A_B` splits its bundles between the transparent and
/// the opaque lexeme (a homograph, as with opaque particle verbs), and
/// every word carries a unique `Idio` feature value that gives its meaning
/// a non-compositional component, as corpus-derived embeddings have. With
/// fewer effective cue dimensions than words, predicted meanings blend
/// over shared cues and priming gradients emerge.
///
/// Columns: `Word`, `Lexeme`, `Tense`, `Force`, `Idio`.
pub fn priming_quadruples(n_quadruples: usize) -> (Dataset, Vec<PrimingQuadruple>) {
    assert!(
        n_quadruples <= WIDE_CONSONANTS.len() * VOWELS.len() / 5,
        "not enough disjoint syllables"
    );
    // 12 bundles in tense-major order: (tense, force)
    let bundles: Vec<(usize, usize)> = (0..TENSES.len())
        .flat_map(|t| (0..FORCES.len()).map(move |f| (t, f)))
        .collect();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut quadruples = Vec::with_capacity(n_quadruples);
    for k in 0..n_quadruples {
        let syl: Vec<String> = (0..5).map(|o| wide_syllable(k * 5 + o)).collect();
        let (a, b, c, d, e) = (&syl[0], &syl[1], &syl[2], &syl[3], &syl[4]);
        let push =
            |stem: (&str, &str), bundle: usize, lexeme: String, rows: &mut Vec<Vec<String>>| {
                let (t, f) = bundles[bundle];
                let mut syllables = vec![stem.0, stem.1];
                if !TENSES[t].1.is_empty() {
                    syllables.push(TENSES[t].1);
                }
                syllables.push(FORCES[f].1);
                let idio = format!("id{}", rows.len());
                rows.push(vec![
                    syllables.join("_"),
                    lexeme,
                    TENSES[t].0.to_string(),
                    FORCES[f].0.to_string(),
                    idio,
                ]);
            };
        let base = rows.len();
        // homograph stem A_B: even bundles belong to the transparent
        // lexeme, odd bundles to the opaque one, so the halves cannot be
        // told apart from tense junctions alone
        for bundle in 0..bundles.len() {
            let lexeme = if bundle % 2 == 0 {
                format!("lex{k}")
            } else {
                format!("opq{k}")
            };
            push((a, b), bundle, lexeme, &mut rows);
        }
        // stem A_C: shares only the initial syllable with the target
        for bundle in 0..bundles.len() {
            push((a, c), bundle, format!("pho{k}"), &mut rows);
        }
        // stem D_E: no overlap
        for bundle in 0..bundles.len() {
            push((d, e), bundle, format!("ctl{k}"), &mut rows);
        }
        // the morph+sem prime shares the target's lexeme and force; the
        // form-only, partial, and control primes carry one identical
        // inflection profile disjoint from the target's, so only stem
        // overlap differentiates them
        quadruples.push(PrimingQuadruple {
            target: base,          // (A_B, pres+ra)  lex
            morph_sem: base + 4,   // (A_B, ta+ra)    lex
            morph_only: base + 11, // (A_B, ke+ru)    opq
            phon: base + 23,       // (A_C, ke+ru)    pho
            control: base + 35,    // (D_E, ke+ru)    ctl
        });
    }
    let dataset = Dataset::from_rows(
        vec![
            "Word".into(),
            "Lexeme".into(),
            "Tense".into(),
            "Force".into(),
            "Idio".into(),
        ],
        "Word",
        rows,
    )
    .expect("generated rows are well-formed");
    (dataset, quadruples)
}

/// A small random lexicon for fuzz-style checks: 3-8 words of 1-5
/// characters over a four-letter alphabet, each word its own lexeme.
///
/// Columns: `Word`, `Lexeme`.
pub fn random_lexicon(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_words = rng.random_range(3..=8);
    let mut rows = Vec::with_capacity(n_words);
    for i in 0..n_words {
        let len = rng.random_range(1..=5);
        let form: String = (0..len)
            .map(|_| ['a', 'b', 'c', 'd'][rng.random_range(0..4)])
            .collect();
        rows.push(vec![form, format!("w{i}")]);
    }
    Dataset::from_rows(vec!["Word".into(), "Lexeme".into()], "Word", rows)
        .expect("generated rows are well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paradigm_has_expected_size() {
        let ds = agglutinative_paradigm(40);
        assert_eq!(ds.len(), 40 * 59);
        // forms are unique: stems are distinct pairs and each bundle has a
        // distinct suffix string
        let mut forms = ds.forms();
        forms.sort();
        forms.dedup();
        assert_eq!(forms.len(), ds.len());
    }

    #[test]
    fn quadruples_share_the_intended_material() {
        let (ds, quads) = priming_quadruples(3);
        assert_eq!(ds.len(), 3 * 36);
        for q in &quads {
            let stem = |i: usize| {
                let f = ds.form(i);
                let parts: Vec<&str> = f.split('_').collect();
                (parts[0].to_string(), parts[1].to_string())
            };
            let (ta, tb) = stem(q.target);
            assert_eq!(stem(q.morph_sem), (ta.clone(), tb.clone()));
            assert_eq!(stem(q.morph_only), (ta.clone(), tb.clone()));
            let (pa, pb) = stem(q.phon);
            assert_eq!(pa, ta);
            assert_ne!(pb, tb);
            let (ca, cb) = stem(q.control);
            assert!(ca != ta && cb != tb);
            // ms shares the lexeme, m does not
            let lex = |i: usize| ds.record(i).attribute("Lexeme").unwrap().to_string();
            assert_eq!(lex(q.target), lex(q.morph_sem));
            assert_ne!(lex(q.target), lex(q.morph_only));
        }
    }

    #[test]
    fn random_lexicons_are_deterministic_per_seed() {
        assert_eq!(random_lexicon(9), random_lexicon(9));
        assert_ne!(random_lexicon(9), random_lexicon(10));
    }
}
