//! The end-to-end pipeline behind each subcommand: ingest, cue building,
//! semantics, map fitting, evaluation, decoding, measures, export.

use std::fs;
use std::path::{Path, PathBuf};

use ldl_core::{
    apply_map, build_cue_matrix, comprehension_map, evaluate_comprehension, evaluate_production,
    fit_positional, learn_paths, load_embeddings, pca_project, prime_target_approximation,
    production_map, simulate_semantics, CueInventory, CueMatrix, Dataset, DecodeParams, LinearMap,
    SemanticMatrix, SimulationParams, SparseBinaryMatrix,
};

use crate::config::{ConfigError, RunConfig, SemanticsSource};
use crate::manifest::Manifest;

/// Pipeline failure with an exit code: 2 config, 3 data, 4 numerical.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(ldl_core::Error),
    Io(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<ldl_core::Error> for CliError {
    fn from(e: ldl_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_numerical() => 4,
            CliError::Core(_) | CliError::Io(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

/// Everything the pipeline derives before any map is fit.
struct Built {
    dataset: Dataset,
    forms: Vec<String>,
    inventory: CueInventory,
    cues: CueMatrix,
    semantics: SemanticMatrix,
}

fn build(config: &RunConfig) -> CliResult<Built> {
    let dataset = Dataset::load(&config.dataset, &config.form_column)?;
    if dataset.is_empty() {
        return Err(ldl_core::Error::EmptyDataset.into());
    }
    let (inventory, cues) = build_cue_matrix(&dataset, config.grams, config.tokenization())?;
    let forms = dataset.forms();
    let semantics = match &config.semantics {
        SemanticsSource::Simulated {
            lexeme_column,
            feature_columns,
        } => {
            let dims = config.dims.unwrap_or_else(|| inventory.len());
            simulate_semantics(
                &dataset,
                lexeme_column,
                feature_columns,
                SimulationParams::new(dims, config.seed),
            )?
        }
        SemanticsSource::Loaded { path } => {
            let s = load_embeddings(path, &forms)?;
            if let Some(dims) = config.dims {
                if dims != s.dims() {
                    return Err(CliError::Config(format!(
                        "dims {} does not match the {}-dimensional embedding file",
                        dims,
                        s.dims()
                    )));
                }
            }
            s
        }
    };
    Ok(Built {
        dataset,
        forms,
        inventory,
        cues,
        semantics,
    })
}

fn decode_params(config: &RunConfig, cues: &CueMatrix) -> DecodeParams {
    DecodeParams {
        threshold: config.threshold,
        max_length: config.max_length.unwrap_or(cues.max_sequence_len() + 1),
        beam: config.beam,
    }
}

fn record_config(manifest: &mut Manifest, config: &RunConfig, built: &Built) {
    manifest.set("dataset", config.dataset.display());
    manifest.set("form_column", &config.form_column);
    match &config.semantics {
        SemanticsSource::Simulated {
            lexeme_column,
            feature_columns,
        } => {
            manifest.set("semantics", "simulated");
            manifest.set("lexeme_column", lexeme_column);
            manifest.set("feature_columns", feature_columns.join(","));
            manifest.set("seed", config.seed);
        }
        SemanticsSource::Loaded { path } => {
            manifest.set("semantics", "loaded");
            manifest.set("embeddings", path.display());
        }
    }
    manifest.set("grams", config.grams);
    manifest.set("tokenized", config.tokenized);
    if config.tokenized {
        manifest.set("separator", &config.separator);
    }
    manifest.set("dims", built.semantics.dims());
    manifest.set("ridge", config.ridge);
    manifest.set("words", built.dataset.len());
    manifest.set("cues", built.inventory.len());
}

/// Fits maps, evaluates both directions, and writes all artifacts plus the
/// manifest. With `skip_production` only the comprehension side runs.
pub fn run_fit(config: &RunConfig, skip_production: bool) -> CliResult<()> {
    let built = build(config)?;
    let f = comprehension_map(&built.cues, &built.semantics, config.ridge)?;
    let s_hat = apply_map(&built.cues.matrix, &f)?;
    let comprehension = evaluate_comprehension(&s_hat, &built.semantics.matrix, &built.forms)?;
    let g = production_map(&built.semantics, &built.cues, config.ridge)?;

    let mut manifest = Manifest::new();
    record_config(&mut manifest, config, &built);
    manifest.set("comprehension_accuracy", comprehension.accuracy);
    manifest.set("f_residual", f.fit_residual);
    manifest.set("g_residual", g.fit_residual);

    let production = if skip_production {
        None
    } else {
        let positional = fit_positional(&built.semantics, &built.cues, config.ridge)?;
        let params = decode_params(config, &built.cues);
        let (paths, gpi) = learn_paths(
            &built.inventory,
            &built.cues,
            &built.semantics,
            &f,
            &positional,
            &params,
        )?;
        let accuracy = evaluate_production(&paths.candidates, &built.cues.sequences);
        manifest.set("production_accuracy", accuracy);
        manifest.set("threshold", params.threshold);
        manifest.set("max_length", params.max_length);
        manifest.set("beam", params.beam);
        manifest.set("max_positions", positional.max_positions());
        Some((paths, gpi, accuracy))
    };

    let out = &config.out;
    fs::create_dir_all(out).map_err(io_err(out))?;
    built.inventory.write(out.join("inventory.txt"))?;
    built.cues.write_matrix_market(out.join("C.mtx"))?;
    built
        .semantics
        .write_embeddings(&built.forms, out.join("S.txt"))?;
    if built.semantics.is_simulated() {
        built.semantics.write_lexomes(out.join("lexomes.txt"))?;
    }
    f.write_binary(out.join("F.bin"))?;
    f.write_text(out.join("F.txt"))?;
    g.write_binary(out.join("G.bin"))?;
    g.write_text(out.join("G.txt"))?;
    if let Some((paths, gpi, _)) = &production {
        paths.write_csv(&built.forms, &built.inventory, out.join("paths.csv"))?;
        gpi.write_csv(&built.forms, out.join("gold_supports.csv"))?;
    }
    let manifest_path = out.join("manifest.txt");
    manifest
        .write(&manifest_path)
        .map_err(io_err(&manifest_path))?;

    println!("words={}", built.dataset.len());
    println!("cues={}", built.inventory.len());
    println!("comprehension_accuracy={}", comprehension.accuracy);
    if let Some((_, _, accuracy)) = &production {
        println!("production_accuracy={accuracy}");
    }
    Ok(())
}

/// Recomputes comprehension accuracy from the stored artifacts.
pub fn run_evaluate(config: &RunConfig, correlations_out: Option<&PathBuf>) -> CliResult<()> {
    let dataset = Dataset::load(&config.dataset, &config.form_column)?;
    let forms = dataset.forms();
    let out = &config.out;
    let c = SparseBinaryMatrix::read_matrix_market(out.join("C.mtx"))?;
    let s = load_embeddings(out.join("S.txt"), &forms)?;
    let f = LinearMap::read_binary(out.join("F.bin"))?;
    let s_hat = apply_map(&c, &f)?;
    let result = evaluate_comprehension(&s_hat, &s.matrix, &forms)?;
    println!("comprehension_accuracy={}", result.accuracy);
    if let Ok(manifest) = Manifest::read(out.join("manifest.txt")) {
        if let Some(stored) = manifest.get("comprehension_accuracy") {
            println!(
                "matches_manifest={}",
                stored == &result.accuracy.to_string()
            );
        }
    }
    if let Some(path) = correlations_out {
        result.write_csv(&forms, path)?;
    }
    Ok(())
}

/// Decodes every word against the stored comprehension map and writes the
/// candidate and gold-support tables.
pub fn run_produce(config: &RunConfig) -> CliResult<()> {
    let built = build(config)?;
    let out = &config.out;
    let f = LinearMap::read_binary(out.join("F.bin"))?;
    if f.input_dims() != built.inventory.len() {
        return Err(CliError::Core(ldl_core::Error::ShapeMismatch {
            context: "stored artifacts",
            expected: format!("{} cues", built.inventory.len()),
            found: format!("{} map inputs", f.input_dims()),
        }));
    }
    let positional = fit_positional(&built.semantics, &built.cues, config.ridge)?;
    let params = decode_params(config, &built.cues);
    let (paths, gpi) = learn_paths(
        &built.inventory,
        &built.cues,
        &built.semantics,
        &f,
        &positional,
        &params,
    )?;
    let accuracy = evaluate_production(&paths.candidates, &built.cues.sequences);
    paths.write_csv(&built.forms, &built.inventory, out.join("paths.csv"))?;
    gpi.write_csv(&built.forms, out.join("gold_supports.csv"))?;
    println!("production_accuracy={accuracy}");
    println!("threshold={}", params.threshold);
    println!("max_length={}", params.max_length);
    println!("beam={}", params.beam);
    Ok(())
}

fn first_index_of(forms: &[String], form: &str) -> Option<usize> {
    forms.iter().position(|f| f == form)
}

/// Writes per-word distance and support measures, the cue projection,
/// per-pair approximations when a pair list is given, and functional-load
/// correlations when the semantics are simulated.
pub fn run_measures(config: &RunConfig, pairs: Option<&PathBuf>) -> CliResult<()> {
    let built = build(config)?;
    let out = &config.out;
    let f = LinearMap::read_binary(out.join("F.bin"))?;
    let g = LinearMap::read_binary(out.join("G.bin"))?;
    if g.output_dims() != built.inventory.len() || f.input_dims() != built.inventory.len() {
        return Err(CliError::Core(ldl_core::Error::ShapeMismatch {
            context: "stored artifacts",
            expected: format!("{} cues", built.inventory.len()),
            found: format!("{}x{} maps", f.input_dims(), g.output_dims()),
        }));
    }

    let positional = fit_positional(&built.semantics, &built.cues, config.ridge)?;
    let supports = positional.predict_supports(&built.semantics)?;
    let gpi = ldl_core::GoldPathInfo {
        supports: built
            .cues
            .sequences
            .iter()
            .enumerate()
            .map(|(i, seq)| {
                seq.iter()
                    .enumerate()
                    .map(|(p, &j)| supports[p][(i, j)])
                    .collect()
            })
            .collect(),
    };

    let measures_path = out.join("measures.csv");
    let file = fs::File::create(&measures_path).map_err(io_err(&measures_path))?;
    let mut writer = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| CliError::Io(format!("{}: {e}", measures_path.display()));
    writer
        .write_record(["word", "measure", "value"])
        .map_err(csv_err)?;
    for i in 0..built.dataset.len() {
        let distance = ldl_core::distance_travelled(&g, &built.cues.sequences[i])?;
        writer
            .write_record([&built.forms[i], "distance_travelled", &distance.to_string()])
            .map_err(csv_err)?;
        let support = ldl_core::total_support(&gpi, i)?;
        writer
            .write_record([&built.forms[i], "total_support", &support.to_string()])
            .map_err(csv_err)?;
    }
    writer
        .flush()
        .map_err(|e| CliError::Io(format!("{}: {e}", measures_path.display())))?;

    let coords = pca_project(&g)?;
    ldl_core::measures::write_projection_csv(
        built.inventory.cues(),
        &coords,
        out.join("projection.csv"),
    )?;

    if built.semantics.is_simulated() {
        let fl = ldl_core::functional_load(&g, &built.inventory, &built.semantics)?;
        fl.write_csv(out.join("functional_load.csv"))?;
    }

    if let Some(pairs_path) = pairs {
        let s_hat = apply_map(&built.cues.matrix, &f)?;
        let result = evaluate_comprehension(&s_hat, &built.semantics.matrix, &built.forms)?;
        let file = fs::File::open(pairs_path).map_err(io_err(pairs_path))?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(file);
        let pta_path = out.join("pta.csv");
        let out_file = fs::File::create(&pta_path).map_err(io_err(&pta_path))?;
        let mut writer = csv::Writer::from_writer(out_file);
        let csv_err = |e: csv::Error| CliError::Io(format!("{}: {e}", pta_path.display()));
        writer
            .write_record(["prime", "target", "pta"])
            .map_err(csv_err)?;
        for record in reader.records() {
            let record =
                record.map_err(|e| CliError::Io(format!("{}: {e}", pairs_path.display())))?;
            let (prime, target) = match (record.get(0), record.get(1)) {
                (Some(p), Some(t)) => (p.to_string(), t.to_string()),
                _ => {
                    return Err(CliError::Io(format!(
                        "{}: each pair row needs prime and target",
                        pairs_path.display()
                    )))
                }
            };
            let prime_idx = first_index_of(&built.forms, &prime)
                .ok_or_else(|| CliError::Core(ldl_core::Error::UnknownLexome(prime.clone())))?;
            let target_idx = first_index_of(&built.forms, &target)
                .ok_or_else(|| CliError::Core(ldl_core::Error::UnknownLexome(target.clone())))?;
            let pta = prime_target_approximation(&result, prime_idx, target_idx)?;
            writer
                .write_record([&prime, &target, &pta.to_string()])
                .map_err(csv_err)?;
        }
        writer
            .flush()
            .map_err(|e| CliError::Io(format!("{}: {e}", pta_path.display())))?;
    }
    println!("measures={}", measures_path.display());
    Ok(())
}

/// Projects the stored production map's cue vectors onto two principal
/// components.
pub fn run_project(config: &RunConfig) -> CliResult<()> {
    let out = &config.out;
    let g = LinearMap::read_binary(out.join("G.bin"))?;
    let inventory_path = out.join("inventory.txt");
    let names: Vec<String> = fs::read_to_string(&inventory_path)
        .map_err(io_err(&inventory_path))?
        .lines()
        .map(str::to_string)
        .collect();
    if names.len() != g.output_dims() {
        return Err(CliError::Core(ldl_core::Error::ShapeMismatch {
            context: "stored artifacts",
            expected: format!("{} cues", g.output_dims()),
            found: format!("{} inventory lines", names.len()),
        }));
    }
    let coords = pca_project(&g)?;
    let path = out.join("projection.csv");
    ldl_core::measures::write_projection_csv(&names, &coords, &path)?;
    println!("projection={}", path.display());
    Ok(())
}

/// Simulates semantic vectors and writes them (plus the lexome vectors)
/// without fitting any maps.
pub fn run_simulate(config: &RunConfig) -> CliResult<()> {
    let (lexeme_column, feature_columns) = match &config.semantics {
        SemanticsSource::Simulated {
            lexeme_column,
            feature_columns,
        } => (lexeme_column.clone(), feature_columns.clone()),
        SemanticsSource::Loaded { .. } => {
            return Err(CliError::Config(
                "simulate-semantics needs lexeme-column, not embeddings".into(),
            ))
        }
    };
    let dims = config.dims.ok_or_else(|| {
        CliError::Config("simulate-semantics needs an explicit dims value".into())
    })?;
    let dataset = Dataset::load(&config.dataset, &config.form_column)?;
    if dataset.is_empty() {
        return Err(ldl_core::Error::EmptyDataset.into());
    }
    let s = simulate_semantics(
        &dataset,
        &lexeme_column,
        &feature_columns,
        SimulationParams::new(dims, config.seed),
    )?;
    let out = &config.out;
    fs::create_dir_all(out).map_err(io_err(out))?;
    s.write_embeddings(&dataset.forms(), out.join("S.txt"))?;
    s.write_lexomes(out.join("lexomes.txt"))?;
    println!("dims={dims}");
    println!("lexomes={}", s.lexomes().len());
    Ok(())
}
