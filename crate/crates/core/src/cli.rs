//! The `gasa` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 runtime error.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Overrides;
use crate::corpus::{load_corpus, tokenize, Corpus, Label};
use crate::error::Error;
use crate::evaluator::{Polarity, Semantics};
use crate::experiments::{
    generate_synthetic_corpus, run_holdout_accuracy, run_instance_cv, run_polarity_value_cv, run_sent_vs_amp_cv,
    ExperimentReport, PlantedLexicon, SynthSpec,
};
use crate::lexicon::{
    dictionary_from_records, export_lexicon, load_sentiment_dictionary, parse_lexicon, seed_amplifier_dictionary,
    Dictionary, Kind, SeedLexicon, SentimentSource,
};
use crate::model::{Algorithm, Model};

#[derive(Parser, Debug)]
#[command(name = "gasa", version, about = "Evolve sentiment lexicons and classify text polarity")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Root seed for every random draw.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Amplifier semantics: literal or prose.
    #[arg(long, global = true)]
    semantics: Option<Semantics>,
    /// `key=value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    pop: Option<usize>,
    #[arg(long, global = true)]
    tournament: Option<usize>,
    #[arg(long, global = true)]
    generations: Option<usize>,
    #[arg(long = "crossover-rate", global = true)]
    crossover_rate: Option<f64>,
    #[arg(long = "mutation-rate", global = true)]
    mutation_rate: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct DictArgs {
    /// Positive word list (one word per line).
    #[arg(long = "positive-words", requires = "negative_words")]
    positive_words: Option<PathBuf>,
    /// Negative word list (one word per line).
    #[arg(long = "negative-words", requires = "positive_words")]
    negative_words: Option<PathBuf>,
    /// Sentiment dictionary as `word<TAB>positive|negative` lines.
    #[arg(long = "sentiment-dict", conflicts_with = "positive_words")]
    sentiment_dict: Option<PathBuf>,
    /// Amplifier dictionary in lexicon format. Defaults to not/never = -1.
    #[arg(long = "amplifier-dict")]
    amplifier_dict: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Labeled corpus (`label<TAB>text`). Repeat to concatenate.
    #[arg(long, required = true)]
    corpus: Vec<PathBuf>,
    #[command(flatten)]
    dicts: DictArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve a model and write it out.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        algo: Option<Algorithm>,
        #[arg(long = "model-out")]
        model_out: PathBuf,
        /// Also write the learned lexicon here.
        #[arg(long = "export-lexicon")]
        export_lexicon: Option<PathBuf>,
    },
    /// Label text with a trained model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// A single text to classify.
        #[arg(long, conflicts_with_all = ["input", "corpus"])]
        text: Option<String>,
        /// File with one raw text per line.
        #[arg(long, conflicts_with = "corpus")]
        input: Option<PathBuf>,
        /// Labeled corpus; accuracy is reported on stderr.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Label printed for a zero score.
        #[arg(long = "tie-as")]
        tie_as: Option<Label>,
        /// Add a column marking tied scores.
        #[arg(long = "show-ties")]
        show_ties: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 70/30 stratified holdout accuracy.
    Holdout {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        algo: Option<Algorithm>,
        #[arg(long = "report-out")]
        report_out: Option<PathBuf>,
    },
    /// Cross-validated sentiment-vs-amplifier prediction of dictionary words.
    CvSentamp(WordCvArgs),
    /// Cross-validated polarity prediction of dictionary words.
    CvPolarity(WordCvArgs),
    /// GASA and CA-GASA under the same instance folds.
    CvCompare {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long = "report-out")]
        report_out: Option<PathBuf>,
    },
    /// Generate a synthetic corpus from a random planted lexicon.
    Synth {
        #[arg(long)]
        out: PathBuf,
        /// Ground-truth lexicon of the planted and filler words.
        #[arg(long = "lexicon-out")]
        lexicon_out: Option<PathBuf>,
        /// Planted sentiment words as a labeled sentiment dictionary.
        #[arg(long = "dict-out")]
        dict_out: Option<PathBuf>,
        #[arg(long, default_value_t = 500)]
        instances: usize,
        #[arg(long = "sentiment-words", default_value_t = 30)]
        sentiment_words: usize,
        #[arg(long = "amplifier-words", default_value_t = 0)]
        amplifier_words: usize,
        #[arg(long, default_value_t = 10)]
        fillers: usize,
        #[arg(long = "min-len", default_value_t = 4)]
        min_len: usize,
        #[arg(long = "max-len", default_value_t = 10)]
        max_len: usize,
        /// Zipf exponent for word sampling (0 = uniform).
        #[arg(long, default_value_t = 0.0)]
        zipf: f64,
    },
    /// Write a model's learned lexicon.
    ExportLexicon {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct WordCvArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Keep dictionary words occurring at least this many times.
    #[arg(long, default_value_t = 0)]
    threshold: usize,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long = "report-out")]
    report_out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn require_file(path: &Path) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("cannot read `{}`", path.display())))
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    require_file(path)?;
    Ok(BufReader::new(File::open(path)?))
}

fn provenance(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn settings(global: &GlobalArgs) -> CliResult<Overrides> {
    let flags = Overrides {
        pop: global.pop,
        tournament: global.tournament,
        generations: global.generations,
        crossover_rate: global.crossover_rate,
        mutation_rate: global.mutation_rate,
        seed: global.seed,
        semantics: global.semantics,
        algo: None,
        tie_as: None,
    };
    let file = match &global.config {
        Some(path) => Overrides::parse(open(path)?).map_err(|e| Failure::Usage(e.to_string()))?,
        None => Overrides::default(),
    };
    Ok(flags.over(file))
}

fn load_lexicon(args: &DictArgs) -> CliResult<SeedLexicon> {
    for p in [&args.positive_words, &args.negative_words, &args.sentiment_dict, &args.amplifier_dict]
        .into_iter()
        .flatten()
    {
        require_file(p)?;
    }
    let sentiment = match (&args.positive_words, &args.negative_words, &args.sentiment_dict) {
        (Some(pos), Some(neg), _) => load_sentiment_dictionary(SentimentSource::PolarityLists {
            positive: open(pos)?,
            negative: open(neg)?,
        })?,
        (_, _, Some(path)) => load_sentiment_dictionary(SentimentSource::Labeled(open(path)?))?,
        _ => Dictionary::new(Kind::Sentiment),
    };
    let amplifier = match &args.amplifier_dict {
        Some(path) => dictionary_from_records(Kind::Amplifier, &parse_lexicon(open(path)?)?)?,
        None => seed_amplifier_dictionary(),
    };
    Ok(SeedLexicon::new(sentiment, amplifier)?)
}

fn load_data(args: &DataArgs) -> CliResult<(Corpus, SeedLexicon)> {
    for p in &args.corpus {
        require_file(p)?;
    }
    let lexicon = load_lexicon(&args.dicts)?;
    let mut parts = Vec::new();
    for p in &args.corpus {
        let (corpus, report) = load_corpus(open(p)?, &provenance(p))?;
        if report.skipped_empty > 0 {
            eprintln!(
                "warning: {}: skipped {} records with no tokens",
                p.display(),
                report.skipped_empty
            );
        }
        parts.push(corpus);
    }
    Ok((Corpus::concat(parts), lexicon))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| Failure::Runtime(Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))))
}

fn emit_reports(reports: &[ExperimentReport], report_out: Option<&Path>) -> CliResult<()> {
    let mut tsv = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            println!();
            tsv.push(b'\n');
        }
        print!("{}", r.table());
        r.write_tsv(&mut tsv)?;
    }
    if let Some(path) = report_out {
        write_file(path, &tsv)?;
    }
    Ok(())
}

fn execute(cli: Cli) -> CliResult<()> {
    let settings = settings(&cli.global)?;
    let semantics = settings.semantics.unwrap_or_default();
    match cli.command {
        Command::Train {
            data,
            algo,
            model_out,
            export_lexicon: lexicon_out,
        } => {
            let config = settings.ga_config()?;
            let (corpus, lexicon) = load_data(&data)?;
            let algorithm = algo.or(settings.algo).unwrap_or_default();
            let (model, stats) = Model::train(&corpus, &lexicon, &config, semantics, algorithm)?;

            let mut buf = Vec::new();
            model.write(&mut buf)?;
            write_file(&model_out, &buf)?;
            if let Some(path) = lexicon_out {
                let mut buf = Vec::new();
                model.write_lexicon(&mut buf)?;
                write_file(&path, &buf)?;
            }

            let total = corpus.len().max(1);
            println!(
                "{} instances, {} unknown words, {} generations{}",
                corpus.len(),
                model.index.len(),
                stats.generations_executed,
                if stats.terminated_early { " (all instances correct)" } else { "" }
            );
            let history = &stats.best_fitness_per_generation;
            let step = (history.len() / 10).max(1);
            for (g, f) in history.iter().enumerate() {
                if g % step == 0 || g + 1 == history.len() {
                    println!("generation {g:>5}  best fitness {f:>6}  ({:.2}%)", 100.0 * *f as f64 / total as f64);
                }
            }
            Ok(())
        }
        Command::Predict {
            model,
            text,
            input,
            corpus,
            tie_as,
            show_ties,
            out,
        } => {
            let model = Model::read(open(&model)?)?;
            let tie_label = tie_as.or(settings.tie_as).unwrap_or(Label::Negative);
            let mut texts: Vec<(Vec<String>, Option<Label>)> = Vec::new();
            if let Some(t) = text {
                texts.push((tokenize(&t), None));
            } else if let Some(path) = input {
                for line in open(&path)?.lines() {
                    texts.push((tokenize(&line?), None));
                }
            } else if let Some(path) = corpus {
                let (c, _) = load_corpus(open(&path)?, &provenance(&path))?;
                texts.extend(c.instances.into_iter().map(|i| (i.tokens, Some(i.label))));
            } else {
                return Err(Failure::Usage("one of --text, --input or --corpus is required".into()));
            }

            let mut output = Vec::new();
            let (mut oov, mut correct, mut labelled) = (0usize, 0usize, 0usize);
            for (tokens, truth) in &texts {
                oov += tokens
                    .iter()
                    .filter(|t| !model.lexicon.contains(t) && model.index.position_of(t).is_none())
                    .count();
                let polarity = model.predict_tokens(tokens);
                let label = match polarity {
                    Polarity::Positive => Label::Positive,
                    Polarity::Negative => Label::Negative,
                    Polarity::Tie => tie_label,
                };
                if let Some(t) = truth {
                    labelled += 1;
                    correct += usize::from(polarity.matches(*t));
                }
                if show_ties {
                    let mark = if polarity == Polarity::Tie { "tie" } else { "-" };
                    writeln!(output, "{label}\t{mark}")?;
                } else {
                    writeln!(output, "{label}")?;
                }
            }
            if oov > 0 {
                eprintln!("warning: {oov} tokens are not in the model vocabulary; scored as neutral");
            }
            if labelled > 0 {
                eprintln!(
                    "accuracy {:.2}% ({correct}/{labelled}, ties count as errors)",
                    100.0 * correct as f64 / labelled as f64
                );
            }
            match out {
                Some(path) => write_file(&path, &output)?,
                None => io::stdout().write_all(&output)?,
            }
            Ok(())
        }
        Command::Holdout { data, algo, report_out } => {
            let config = settings.ga_config()?;
            let (corpus, lexicon) = load_data(&data)?;
            let algorithm = algo.or(settings.algo).unwrap_or_default();
            let report = run_holdout_accuracy(&corpus, &lexicon, &config, semantics, algorithm)?;
            emit_reports(&[report], report_out.as_deref())
        }
        Command::CvSentamp(args) => {
            let config = settings.ga_config()?;
            let (corpus, lexicon) = load_data(&args.data)?;
            let report = run_sent_vs_amp_cv(&corpus, &lexicon, args.threshold, args.folds, &config, semantics)?;
            emit_reports(&[report], args.report_out.as_deref())
        }
        Command::CvPolarity(args) => {
            let config = settings.ga_config()?;
            let (corpus, lexicon) = load_data(&args.data)?;
            let report = run_polarity_value_cv(&corpus, &lexicon, args.threshold, args.folds, &config, semantics)?;
            emit_reports(&[report], args.report_out.as_deref())
        }
        Command::CvCompare {
            data,
            folds,
            report_out,
        } => {
            let config = settings.ga_config()?;
            let (corpus, lexicon) = load_data(&data)?;
            let reports = [Algorithm::Gasa, Algorithm::Cagasa]
                .into_iter()
                .map(|a| run_instance_cv(&corpus, &lexicon, folds, &config, semantics, a))
                .collect::<Result<Vec<_>, _>>()?;
            emit_reports(&reports, report_out.as_deref())
        }
        Command::Synth {
            out,
            lexicon_out,
            dict_out,
            instances,
            sentiment_words,
            amplifier_words,
            fillers,
            min_len,
            max_len,
            zipf,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(settings.seed.unwrap_or(0));
            let planted = PlantedLexicon::random(sentiment_words, amplifier_words, fillers, &mut rng)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let spec = SynthSpec {
                instances,
                min_len,
                max_len,
                zipf_exponent: zipf,
            };
            let corpus = generate_synthetic_corpus(&planted, &spec, semantics, &mut rng)?;

            let mut buf = Vec::new();
            for inst in &corpus.instances {
                writeln!(buf, "{}\t{}", inst.label, inst.tokens.join(" "))?;
            }
            write_file(&out, &buf)?;
            if let Some(path) = lexicon_out {
                let mut words: Vec<&str> = planted.entries.iter().map(|(w, _)| w.as_str()).collect();
                let mut classes: Vec<_> = planted.entries.iter().map(|&(_, c)| c).collect();
                for f in &planted.fillers {
                    words.push(f);
                    classes.push(crate::lexicon::WordClass::NEUTRAL);
                }
                let mut buf = Vec::new();
                export_lexicon(&words, &classes, &mut buf)?;
                write_file(&path, &buf)?;
            }
            if let Some(path) = dict_out {
                let mut buf = Vec::new();
                for (w, c) in planted.sentiment_dictionary().iter() {
                    let label = if c.value > 0.0 { "positive" } else { "negative" };
                    writeln!(buf, "{w}\t{label}")?;
                }
                write_file(&path, &buf)?;
            }
            println!(
                "{} instances ({} positive) over {} planted and {} filler words",
                corpus.len(),
                corpus.count(Label::Positive),
                planted.entries.len(),
                planted.fillers.len()
            );
            Ok(())
        }
        Command::ExportLexicon { model, out } => {
            let model = Model::read(open(&model)?)?;
            let mut buf = Vec::new();
            model.write_lexicon(&mut buf)?;
            match out {
                Some(path) => write_file(&path, &buf)?,
                None => io::stdout().write_all(&buf)?,
            }
            Ok(())
        }
    }
}
