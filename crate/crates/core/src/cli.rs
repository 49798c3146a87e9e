//! Command-line pipeline: synth, extract, profiles, records, train,
//! predict, choose, evaluate, curve.
//!
//! Every flag can be predefined in a `key=value` config file passed with
//! `--config`; command-line values win. Exit codes: 0 success, 1 usage or
//! validation failure, 2 i/o failure.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};

use crate::corpus::synth::{load_synth_spec, save_planted_rules, synth_corpus};
use crate::corpus::{load_corpus_with, AbbrevSet, CorpusFormat};
use crate::error::{LexError, Result};
use crate::evaluator::{evaluate, learning_curve};
use crate::extractor::{load_tuples, save_tuples, Extractor, Gazetteer};
use crate::indicators::{load_records, make_records, save_records, DEFAULT_WINDOW};
use crate::learner::{
    load_ruleset, predict, save_ruleset, train, train_noise_free, LearnerParams,
};
use crate::profiles::{build_profiles, ddpe_histogram, load_profiles, save_profiles};
use crate::taxonomy::{SynsetId, TagMode, Taxonomy};

#[derive(Parser)]
#[command(name = "lexchoice", version, about = "Learns and applies description-choice rules")]
struct Cli {
    /// key=value file predefining any flag of any subcommand
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus with planted rules
    Synth(SynthArgs),
    /// Extract entity-description tuples from a corpus
    Extract(ExtractArgs),
    /// Aggregate tuples into per-entity profiles
    Profiles(ProfilesArgs),
    /// Build feature records from tuples
    Records(RecordsArgs),
    /// Learn a rule set from records
    Train(TrainArgs),
    /// Apply a rule set to records
    Predict(PredictArgs),
    /// Choose a description from a profile under constraints
    Choose(ChooseArgs),
    /// Score a rule set against labeled records
    Evaluate(EvaluateArgs),
    /// Learning curve over training-set sizes
    Curve(CurveArgs),
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let config = match Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Synth(a) => a.run(&config),
        Command::Extract(a) => a.run(&config),
        Command::Profiles(a) => a.run(&config),
        Command::Records(a) => a.run(&config),
        Command::Train(a) => a.run(&config),
        Command::Predict(a) => a.run(&config),
        Command::Choose(a) => a.run(&config),
        Command::Evaluate(a) => a.run(&config),
        Command::Curve(a) => a.run(&config),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// key=value defaults, keyed by long flag name.
struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Config> {
        let mut map = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| LexError::Parse {
                    line: lineno + 1,
                    msg: format!("expected key=value, got {line:?}"),
                })?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Config(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| {
                LexError::Param(format!("config {key}={raw:?}: {e}"))
            }),
        }
    }

    fn flag(&self, key: &str) -> bool {
        matches!(self.0.get(key).map(String::as_str), Some("true") | Some("1"))
    }
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| LexError::Param(format!("missing required flag {flag}")))
}

fn resolve<T: FromStr>(cli: Option<T>, config: &Config, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match cli {
        Some(v) => Ok(Some(v)),
        None => config.get(key),
    }
}

fn load_taxonomy_flag(path: &Option<PathBuf>, config: &Config) -> Result<Taxonomy> {
    match resolve(path.clone(), config, "taxonomy")? {
        Some(p) => Taxonomy::load(p),
        None => Ok(Taxonomy::builtin()),
    }
}

fn load_abbrevs_flag(path: &Option<PathBuf>, config: &Config) -> Result<AbbrevSet> {
    match resolve(path.clone(), config, "abbrev")? {
        Some(p) => AbbrevSet::load(p),
        None => Ok(AbbrevSet::default()),
    }
}

fn parse_offsets(raw: &str) -> Result<BTreeSet<SynsetId>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<SynsetId>()
                .map_err(|e| LexError::Param(format!("bad offset in constraints: {e}")))
        })
        .collect()
}

fn parse_sizes(raw: &str) -> Result<Vec<usize>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| LexError::Param(format!("bad size {s:?}")))
        })
        .collect()
}

#[derive(clap::Args)]
struct SynthArgs {
    /// Synth spec (TOML)
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (corpus/, taxonomy.txt, truth.tsv)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SynthArgs {
    fn run(self, config: &Config) -> Result<()> {
        let spec_path = need(resolve(self.spec, config, "spec")?, "--spec")?;
        let seed = need(resolve(self.seed, config, "seed")?, "--seed")?;
        let out = need(resolve(self.out, config, "out")?, "--out")?;
        let spec = load_synth_spec(&spec_path)?;
        let (corpus, truth) = synth_corpus(&spec, seed)?;
        let corpus_dir = out.join("corpus");
        std::fs::create_dir_all(&corpus_dir).map_err(|e| LexError::io(&corpus_dir, e))?;
        for doc in &corpus.documents {
            let path = corpus_dir.join(format!("{}.txt", doc.id));
            std::fs::write(&path, &doc.raw).map_err(|e| LexError::io(&path, e))?;
        }
        spec.taxonomy()?.save(out.join("taxonomy.txt"))?;
        save_planted_rules(&truth, out.join("truth.tsv"))?;
        println!(
            "wrote {} documents, taxonomy, and {} planted rules to {}",
            corpus.documents.len(),
            truth.len(),
            out.display()
        );
        Ok(())
    }
}

#[derive(clap::Args)]
struct ExtractArgs {
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// plain-dir | jsonl
    #[arg(long)]
    format: Option<CorpusFormat>,
    /// Entity names to pin, one per line
    #[arg(long)]
    gazetteer: Option<PathBuf>,
    /// Abbreviation list for sentence segmentation
    #[arg(long)]
    abbrev: Option<PathBuf>,
    /// Tuple TSV output
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExtractArgs {
    fn run(self, config: &Config) -> Result<()> {
        let corpus_path = need(resolve(self.corpus, config, "corpus")?, "--corpus")?;
        let format = resolve(self.format, config, "format")?.unwrap_or(CorpusFormat::PlainDir);
        let out = need(resolve(self.out, config, "out")?, "--out")?;
        let abbrevs = load_abbrevs_flag(&self.abbrev, config)?;
        let corpus = load_corpus_with(&corpus_path, format, &abbrevs)?;
        let mut extractor = Extractor::default();
        if let Some(g) = resolve(self.gazetteer, config, "gazetteer")? {
            extractor = extractor.with_gazetteer(Gazetteer::load(g)?);
        }
        let tuples = extractor.extract_corpus(&corpus);
        save_tuples(&out, &tuples)?;
        println!("extracted {} tuples from {} documents", tuples.len(), corpus.documents.len());
        Ok(())
    }
}

#[derive(clap::Args)]
struct ProfilesArgs {
    #[arg(long)]
    tuples: Option<PathBuf>,
    #[arg(long)]
    taxonomy: Option<PathBuf>,
    /// word | word+parent
    #[arg(long)]
    mode: Option<TagMode>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the distinct-descriptions-per-entity histogram
    #[arg(long)]
    stats: bool,
}

impl ProfilesArgs {
    fn run(self, config: &Config) -> Result<()> {
        let tuples_path = need(resolve(self.tuples, config, "tuples")?, "--tuples")?;
        let mode = need(resolve(self.mode, config, "mode")?, "--mode")?;
        let out = need(resolve(self.out, config, "out")?, "--out")?;
        let taxonomy = load_taxonomy_flag(&self.taxonomy, config)?;
        let tuples = load_tuples(&tuples_path)?;
        let profiles = build_profiles(&tuples, &taxonomy, mode);
        save_profiles(&profiles, &out)?;
        println!("built {} profiles from {} tuples", profiles.len(), tuples.len());
        if self.stats || config.flag("stats") {
            let stats = ddpe_histogram(&profiles);
            println!("ddpe\tentities");
            for (ddpe, count) in &stats.histogram {
                println!("{ddpe}\t{count}");
            }
            println!("mean ddpe: {:.2}", stats.mean);
        }
        Ok(())
    }
}

#[derive(clap::Args)]
struct RecordsArgs {
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    format: Option<CorpusFormat>,
    #[arg(long)]
    tuples: Option<PathBuf>,
    #[arg(long)]
    profiles: Option<PathBuf>,
    #[arg(long)]
    taxonomy: Option<PathBuf>,
    #[arg(long)]
    mode: Option<TagMode>,
    /// Context window size per side
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    abbrev: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RecordsArgs {
    fn run(self, config: &Config) -> Result<()> {
        let corpus_path = need(resolve(self.corpus, config, "corpus")?, "--corpus")?;
        let format = resolve(self.format, config, "format")?.unwrap_or(CorpusFormat::PlainDir);
        let tuples_path = need(resolve(self.tuples, config, "tuples")?, "--tuples")?;
        let profiles_path = need(resolve(self.profiles, config, "profiles")?, "--profiles")?;
        let mode = need(resolve(self.mode, config, "mode")?, "--mode")?;
        let window = resolve(self.window, config, "window")?.unwrap_or(DEFAULT_WINDOW);
        let out = need(resolve(self.out, config, "out")?, "--out")?;
        let abbrevs = load_abbrevs_flag(&self.abbrev, config)?;
        let taxonomy = load_taxonomy_flag(&self.taxonomy, config)?;
        let corpus = load_corpus_with(&corpus_path, format, &abbrevs)?;
        let tuples = load_tuples(&tuples_path)?;
        let profiles = load_profiles(&profiles_path)?;
        let records = make_records(&tuples, &corpus, &profiles, &taxonomy, mode, window)?;
        save_records(&records, &out)?;
        let flagged = records.iter().filter(|r| r.label_missing()).count();
        println!("built {} records ({} with empty labels)", records.len(), flagged);
        Ok(())
    }
}

#[derive(clap::Args)]
struct TrainArgs {
    #[arg(long)]
    records: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grow mutually exclusive rules to zero training error
    #[arg(long)]
    noise_free: bool,
    #[arg(long)]
    min_support: Option<usize>,
    #[arg(long)]
    prune_fraction: Option<f64>,
    #[arg(long)]
    min_precision: Option<f64>,
}

impl TrainArgs {
    fn run(self, config: &Config) -> Result<()> {
        let records_path = need(resolve(self.records, config, "records")?, "--records")?;
        let out = need(resolve(self.out, config, "out")?, "--out")?;
        let mut params = LearnerParams::default();
        if let Some(v) = resolve(self.min_support, config, "min-support")? {
            params.min_support = v;
        }
        if let Some(v) = resolve(self.prune_fraction, config, "prune-fraction")? {
            params.prune_fraction = v;
        }
        if let Some(v) = resolve(self.min_precision, config, "min-precision")? {
            params.min_rule_precision = v;
        }
        let records = load_records(&records_path)?;
        let rs = if self.noise_free || config.flag("noise-free") {
            train_noise_free(&records, &params)?
        } else {
            train(&records, &params)?
        };
        save_ruleset(&rs, &out)?;
        println!("learned {} rules from {} records", rs.rules.len(), records.len());
        Ok(())
    }
}

#[derive(clap::Args)]
struct PredictArgs {
    #[arg(long)]
    ruleset: Option<PathBuf>,
    #[arg(long)]
    records: Option<PathBuf>,
    /// Predicted offsets, one line per record
    #[arg(long)]
    out: Option<PathBuf>,
}

impl PredictArgs {
    fn run(self, config: &Config) -> Result<()> {
        let ruleset_path = need(resolve(self.ruleset, config, "ruleset")?, "--ruleset")?;
        let records_path = need(resolve(self.records, config, "records")?, "--records")?;
        let rs = load_ruleset(&ruleset_path)?;
        let records = load_records(&records_path)?;
        let mut out_text = String::new();
        for r in &records {
            let offsets: Vec<String> = predict(&rs, r).iter().map(|s| s.to_string()).collect();
            out_text.push_str(&offsets.join(" "));
            out_text.push('\n');
        }
        match resolve(self.out, config, "out")? {
            Some(path) => {
                std::fs::write(&path, out_text).map_err(|e| LexError::io(&path, e))?
            }
            None => print!("{out_text}"),
        }
        Ok(())
    }
}

#[derive(clap::Args)]
struct ChooseArgs {
    #[arg(long)]
    profiles: Option<PathBuf>,
    #[arg(long)]
    entity: Option<String>,
    /// Comma-separated synset offsets
    #[arg(long)]
    constraints: Option<String>,
    #[arg(long)]
    json: bool,
}

impl ChooseArgs {
    fn run(self, config: &Config) -> Result<()> {
        let profiles_path = need(resolve(self.profiles, config, "profiles")?, "--profiles")?;
        let entity = need(resolve(self.entity, config, "entity")?, "--entity")?;
        let constraints =
            parse_offsets(&resolve(self.constraints, config, "constraints")?.unwrap_or_default())?;
        let profiles = load_profiles(&profiles_path)?;
        let profile = profiles
            .get(&entity)
            .ok_or_else(|| LexError::Lookup(format!("no profile for entity {entity:?}")))?;
        let ranked = crate::chooser::rank_descriptions(profile, &constraints)?;
        let (entry, score) = ranked[0];
        if self.json || config.flag("json") {
            println!(
                "{}",
                serde_json::json!({
                    "entity": entity,
                    "description": entry.description.join(" "),
                    "score": score,
                })
            );
        } else {
            println!("{}", entry.description.join(" "));
            println!("overlap {score}");
        }
        Ok(())
    }
}

#[derive(clap::Args)]
struct EvaluateArgs {
    #[arg(long)]
    ruleset: Option<PathBuf>,
    #[arg(long)]
    records: Option<PathBuf>,
    /// Write the summary (or JSON report) here as well
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

impl EvaluateArgs {
    fn run(self, config: &Config) -> Result<()> {
        let ruleset_path = need(resolve(self.ruleset, config, "ruleset")?, "--ruleset")?;
        let records_path = need(resolve(self.records, config, "records")?, "--records")?;
        let rs = load_ruleset(&ruleset_path)?;
        let records = load_records(&records_path)?;
        let report = evaluate(&rs, &records);
        let rendered = if self.json || config.flag("json") {
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        } else {
            format!(
                "records\t{}\nempty_predictions\t{}\nmean_precision\t{:.6}\nmean_recall\t{:.6}\n",
                report.records,
                report.empty_predictions,
                report.mean_precision,
                report.mean_recall
            )
        };
        print!("{rendered}");
        if let Some(path) = resolve(self.out, config, "out")? {
            std::fs::write(&path, rendered).map_err(|e| LexError::io(&path, e))?;
        }
        Ok(())
    }
}

#[derive(clap::Args)]
struct CurveArgs {
    /// Records built in word-only mode
    #[arg(long)]
    records_word: Option<PathBuf>,
    /// Records built in word+parent mode
    #[arg(long)]
    records_parent: Option<PathBuf>,
    /// Comma-separated training-set sizes
    #[arg(long)]
    sizes: Option<String>,
    /// Entity fraction sent to train
    #[arg(long)]
    fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// TSV output: size, mode, precision, recall
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    min_support: Option<usize>,
}

impl CurveArgs {
    fn run(self, config: &Config) -> Result<()> {
        let sizes = parse_sizes(&need(resolve(self.sizes, config, "sizes")?, "--sizes")?)?;
        let fraction = resolve(self.fraction, config, "fraction")?.unwrap_or(0.9);
        let seed = need(resolve(self.seed, config, "seed")?, "--seed")?;
        let mut by_mode = Vec::new();
        if let Some(path) = resolve(self.records_word, config, "records-word")? {
            by_mode.push((TagMode::WordOnly, load_records(path)?));
        }
        if let Some(path) = resolve(self.records_parent, config, "records-parent")? {
            by_mode.push((TagMode::WordParent, load_records(path)?));
        }
        if by_mode.is_empty() {
            return Err(LexError::Param(
                "need --records-word and/or --records-parent".to_string(),
            ));
        }
        let mut params = LearnerParams::default();
        if let Some(v) = resolve(self.min_support, config, "min-support")? {
            params.min_support = v;
        }
        let rows = learning_curve(&by_mode, &sizes, &params, fraction, seed)?;
        let rendered = if self.json || config.flag("json") {
            serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
        } else {
            let mut text = String::from("size\tmode\tprecision\trecall\n");
            for row in &rows {
                text.push_str(&format!(
                    "{}\t{}\t{:.6}\t{:.6}\n",
                    row.size, row.mode, row.precision, row.recall
                ));
            }
            text
        };
        print!("{rendered}");
        if let Some(path) = resolve(self.out, config, "out")? {
            std::fs::write(&path, rendered).map_err(|e| LexError::io(&path, e))?;
        }
        Ok(())
    }
}
