//! Command-line entry point: `preprocess`, `generate`, `distinguish`, `score`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::{Deserialize, Serialize};

use crate::chat_norm::{extract_utterances, write_jsonl, ExtractOptions, Source};
use crate::degrade::{FilterConfig, Generator, RuleConfig, SyntheticPair};
use crate::distinguish::distinguish;
use crate::error::{Error, Result};
use crate::evalkit::{read_embeddings, score_chrf, score_cosine, ChrFParams, ScoreReport};
use crate::textmorph::IrregularLexicon;
use crate::ud_parse::{parse_conllu, ParseMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// Every tunable of the pipeline. Missing JSON fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub rules: RuleConfig,
    pub filters: FilterConfig,
    pub chrf: ChrFParams,
    pub nb_alpha: f64,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            rules: RuleConfig::default(),
            filters: FilterConfig::default(),
            chrf: ChrFParams::default(),
            nb_alpha: 1.0,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let file = open(path)?;
        let cfg: PipelineConfig = serde_json::from_reader(BufReader::new(file)).map_err(|e| {
            Error::InvalidInput(format!("config {}: {e}", path.display()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.rules.validate()?;
        self.filters.validate()?;
        self.chrf.validate()?;
        if !(self.nb_alpha > 0.0 && self.nb_alpha.is_finite()) {
            return Err(Error::InvalidInput("nb_alpha must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "aphasim", version, about = "Transcript cleaning, synthetic telegraphic sentences, and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Clean transcript tiers into JSONL utterances
    Preprocess(PreprocessArgs),
    /// Generate original/synthetic pairs from a CoNLL-U corpus
    Generate(GenerateArgs),
    /// Naive Bayes separability of two sentence sets
    Distinguish(DistinguishArgs),
    /// ChrF (and optionally embedding cosine) of completions against references
    Score(ScoreArgs),
}

#[derive(Debug, Args)]
struct PreprocessArgs {
    /// Input format
    #[arg(long, default_value = "chat", value_parser = ["chat"])]
    format: String,
    /// Corpus the transcript comes from
    #[arg(long, value_parser = ["aphasic", "control", "sbcsae"])]
    source: String,
    /// Transcript file
    #[arg(long)]
    input: PathBuf,
    /// Output JSONL file, or - for standard output
    #[arg(long)]
    output: PathBuf,
    /// Keep only these speaker codes (comma-separated, e.g. PAR)
    #[arg(long, value_delimiter = ',')]
    speakers: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// CoNLL-U corpus
    #[arg(long)]
    input: PathBuf,
    /// JSON pipeline configuration; flags below override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Output JSONL of pairs, or - for standard output
    #[arg(long)]
    output: PathBuf,
    /// Write the generation report (JSON) here
    #[arg(long)]
    report: Option<PathBuf>,
    /// Skip malformed sentences instead of failing
    #[arg(long)]
    lenient: bool,
    /// Extra singular/plural pairs (two-column TSV)
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[command(flatten)]
    rules: RuleFlags,
    #[command(flatten)]
    filters: FilterFlags,
}

#[derive(Debug, Args)]
struct RuleFlags {
    /// Probability of flipping a noun's number [default: 0.3]
    #[arg(long)]
    p_noun_number: Option<f64>,
    /// Probability of dropping an adjective, adverb or verb [default: 0.5]
    #[arg(long)]
    p_content_discard: Option<f64>,
    /// Probability of swapping a possessive/demonstrative pronoun [default: 0.4]
    #[arg(long)]
    p_pronoun_swap: Option<f64>,
    /// Probability of dropping a determiner, adposition or particle [default: 0.7]
    #[arg(long)]
    p_function_discard: Option<f64>,
    /// Probability of replacing a surviving verb/auxiliary by its lemma [default: 0.5]
    #[arg(long)]
    p_verb_lemma: Option<f64>,
}

#[derive(Debug, Args)]
struct FilterFlags {
    /// Longest accepted source sentence, in words [default: 15]
    #[arg(long)]
    max_words: Option<usize>,
    /// Highest accepted noun-phrase/verb-phrase ratio [default: 2]
    #[arg(long)]
    max_np_vp_ratio: Option<f64>,
    /// Fewest words in a synthetic sentence [default: 3]
    #[arg(long)]
    min_synth_words: Option<usize>,
    /// Lower bound of the synthetic/original word ratio [default: 0.25]
    #[arg(long)]
    band_low: Option<f64>,
    /// Upper bound of the synthetic/original word ratio [default: 0.75]
    #[arg(long)]
    band_high: Option<f64>,
}

#[derive(Debug, Args)]
struct DistinguishArgs {
    /// First sentence set (JSONL), label 0
    #[arg(long)]
    a: PathBuf,
    /// Second sentence set (JSONL), label 1
    #[arg(long)]
    b: PathBuf,
    /// JSON field holding the sentence in --a
    #[arg(long, default_value = "text")]
    a_field: String,
    /// JSON field holding the sentence in --b
    #[arg(long, default_value = "text")]
    b_field: String,
    /// Split seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Fraction of the balanced data used for training
    #[arg(long, default_value_t = 0.8)]
    ratio: f64,
    /// Additive smoothing constant [default: 1]
    #[arg(long)]
    alpha: Option<f64>,
    /// JSON pipeline configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report file, or - for standard output
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    /// Completions, one per line
    #[arg(long)]
    hyp: PathBuf,
    /// References, line-aligned with --hyp
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Embeddings of the completions, one vector per line
    #[arg(long, requires = "emb_ref")]
    emb_hyp: Option<PathBuf>,
    /// Embeddings of the references, one vector per line
    #[arg(long, requires = "emb_hyp")]
    emb_ref: Option<PathBuf>,
    /// Highest character n-gram order [default: 6]
    #[arg(long)]
    chrf_order: Option<usize>,
    /// Recall weight [default: 2]
    #[arg(long)]
    chrf_beta: Option<f64>,
    /// JSON pipeline configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scores file, or - for standard output
    #[arg(long)]
    output: PathBuf,
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Open {
        path: path.to_path_buf(),
        source,
    })
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::load(p),
        None => Ok(PipelineConfig::default()),
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place. `-` writes to standard output.
fn write_output(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    if path == Path::new("-") {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        body(&mut lock)?;
        lock.flush()?;
        return Ok(());
    }
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|source| Error::Open {
        path: dir.to_path_buf(),
        source,
    })?;
    {
        let mut w = io::BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Open {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_output(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")?;
        Ok(())
    })
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let reader = BufReader::new(open(path)?);
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map_err(|source| Error::Read { line: i + 1, source }))
        .collect()
}

/// Pulls `field` out of every JSONL record.
pub fn read_jsonl_field(path: &Path, field: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (i, line) in read_lines(path)?.into_iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| Error::Data {
            line: i + 1,
            message: format!("{}: {e}", path.display()),
        })?;
        let text = value.get(field).and_then(|v| v.as_str()).ok_or_else(|| Error::Data {
            line: i + 1,
            message: format!("{}: no string field {field:?}", path.display()),
        })?;
        out.push(text.to_string());
    }
    Ok(out)
}

fn preprocess(args: PreprocessArgs) -> Result<()> {
    let source: Source = args.source.parse()?;
    let reader = BufReader::new(open(&args.input)?);
    let name = args
        .input
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let opts = ExtractOptions {
        speakers: args.speakers,
    };
    let utterances = extract_utterances(reader, source, &name, &opts)?;
    info!("{}: {} utterances", args.input.display(), utterances.len());
    write_output(&args.output, |w| write_jsonl(w, &utterances))
}

fn apply_overrides(cfg: &mut PipelineConfig, rules: &RuleFlags, filters: &FilterFlags) {
    let r = &mut cfg.rules;
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut r.p_noun_number, rules.p_noun_number);
    set(&mut r.p_content_discard, rules.p_content_discard);
    set(&mut r.p_pronoun_swap, rules.p_pronoun_swap);
    set(&mut r.p_function_discard, rules.p_function_discard);
    set(&mut r.p_verb_lemma, rules.p_verb_lemma);
    let f = &mut cfg.filters;
    if let Some(v) = filters.max_words {
        f.max_words = v;
    }
    if let Some(v) = filters.min_synth_words {
        f.min_synth_words = v;
    }
    set(&mut f.max_np_vp_ratio, filters.max_np_vp_ratio);
    set(&mut f.ratio_band.0, filters.band_low);
    set(&mut f.ratio_band.1, filters.band_high);
}

fn generate(args: GenerateArgs) -> Result<()> {
    let mut cfg = load_config(args.config.as_deref())?;
    apply_overrides(&mut cfg, &args.rules, &args.filters);
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;

    let mode = if args.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    };
    let corpus = parse_conllu(BufReader::new(open(&args.input)?), mode)?;
    for e in &corpus.errors {
        log::warn!("{}: skipped sentence: {e}", args.input.display());
    }
    let mut generator = Generator::new(cfg.rules, cfg.filters.clone())?;
    if let Some(path) = &args.lexicon {
        generator.morphology.lexicon = IrregularLexicon::load_tsv(path)?;
    }
    let (pairs, report) = generator.generate(&corpus.sentences, cfg.seed);
    info!(
        "{} sentences in, {} pairs out",
        report.input_sentences, report.emitted
    );
    write_output(&args.output, |w| write_pairs(w, &pairs))?;
    if let Some(path) = &args.report {
        let mut json = report.to_json();
        json["skipped_malformed"] = corpus.errors.len().into();
        json["seed"] = cfg.seed.into();
        write_json(path, &json)?;
    }
    Ok(())
}

pub fn write_pairs(w: &mut dyn Write, pairs: &[SyntheticPair]) -> Result<()> {
    for p in pairs {
        serde_json::to_writer(&mut *w, p)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

fn run_distinguish(args: DistinguishArgs) -> Result<()> {
    let cfg = load_config(args.config.as_deref())?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let alpha = args.alpha.unwrap_or(cfg.nb_alpha);
    let a = read_jsonl_field(&args.a, &args.a_field)?;
    let b = read_jsonl_field(&args.b, &args.b_field)?;
    let report = distinguish(&a, &b, args.ratio, alpha, seed)?;
    info!("accuracy {:.4} on {} held-out documents", report.accuracy, report.n_test);
    write_json(&args.output, &report)
}

#[derive(Debug, Serialize)]
struct Scores {
    chrf: ScoreReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    cosine: Option<ScoreReport>,
}

fn score(args: ScoreArgs) -> Result<()> {
    let cfg = load_config(args.config.as_deref())?;
    let mut params = cfg.chrf;
    if let Some(order) = args.chrf_order {
        params.max_ngram_order = order;
    }
    if let Some(beta) = args.chrf_beta {
        params.beta = beta;
    }
    let hyps = read_lines(&args.hyp)?;
    let refs = read_lines(&args.reference)?;
    let chrf = score_chrf(&hyps, &refs, &params)?;
    let cosine = match (&args.emb_hyp, &args.emb_ref) {
        (Some(eh), Some(er)) => {
            let eh = read_embeddings(BufReader::new(open(eh)?))?;
            let er = read_embeddings(BufReader::new(open(er)?))?;
            if eh.len() != hyps.len() {
                return Err(Error::InvalidInput(format!(
                    "{} embeddings for {} sentences",
                    eh.len(),
                    hyps.len()
                )));
            }
            Some(score_cosine(&eh, &er)?)
        }
        _ => None,
    };
    info!("ChrF {:.2} ± {:.2} (n = {})", chrf.mean, chrf.standard_error, chrf.n);
    write_json(&args.output, &Scores { chrf, cosine })
}

/// Parses `argv` (including the program name) and runs the selected
/// subcommand. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Preprocess(a) => preprocess(a),
        Command::Generate(a) => generate(a),
        Command::Distinguish(a) => run_distinguish(a),
        Command::Score(a) => score(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

/// Help text of one subcommand, as printed by `--help`.
pub fn subcommand_help(name: &str) -> Option<String> {
    use clap::CommandFactory;
    let mut cmd = Cli::command();
    cmd.build();
    cmd.find_subcommand_mut(name)
        .map(|sub| sub.render_long_help().to_string())
}
