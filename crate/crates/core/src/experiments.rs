//! Experiment protocols and the synthetic planted-lexicon generator.
//!
//! The dictionary-word protocols cross-validate over *words*: each fold's
//! test words are removed from the seed dictionary, the GA learns them as
//! ordinary unknown words by maximizing instance accuracy, and the learned
//! genes are then compared against the dictionary.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::io::Write;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::corpus::{build_unknown_index, make_folds, split_holdout, word_frequencies, Corpus, Instance, Label};
use crate::error::{Error, Result};
use crate::evaluator::{classify_score, evaluate, Polarity, Semantics};
use crate::ga::{run_ga, GaConfig};
use crate::gasa::{extract_classifications, GasaProblem};
use crate::lexicon::{Dictionary, Kind, SeedLexicon, WordClass, AMPLIFIER_VALUES};
use crate::model::{Algorithm, Model};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    SentVsAmp,
    PolarityValue,
    HoldoutAccuracy,
    GasaVsCagasa,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::SentVsAmp => "sent-vs-amp",
            Protocol::PolarityValue => "polarity-value",
            Protocol::HoldoutAccuracy => "holdout-accuracy",
            Protocol::GasaVsCagasa => "gasa-vs-cagasa",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Test-set outcomes by true label. Ties count as errors in accuracy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub positive_as_positive: usize,
    pub positive_as_negative: usize,
    pub positive_as_tie: usize,
    pub negative_as_positive: usize,
    pub negative_as_negative: usize,
    pub negative_as_tie: usize,
}

impl Confusion {
    pub fn record(&mut self, truth: Label, predicted: Polarity) {
        let slot = match (truth, predicted) {
            (Label::Positive, Polarity::Positive) => &mut self.positive_as_positive,
            (Label::Positive, Polarity::Negative) => &mut self.positive_as_negative,
            (Label::Positive, Polarity::Tie) => &mut self.positive_as_tie,
            (Label::Negative, Polarity::Positive) => &mut self.negative_as_positive,
            (Label::Negative, Polarity::Negative) => &mut self.negative_as_negative,
            (Label::Negative, Polarity::Tie) => &mut self.negative_as_tie,
        };
        *slot += 1;
    }

    pub fn add(&mut self, other: &Confusion) {
        self.positive_as_positive += other.positive_as_positive;
        self.positive_as_negative += other.positive_as_negative;
        self.positive_as_tie += other.positive_as_tie;
        self.negative_as_positive += other.negative_as_positive;
        self.negative_as_negative += other.negative_as_negative;
        self.negative_as_tie += other.negative_as_tie;
    }

    pub fn total(&self) -> usize {
        self.correct()
            + self.positive_as_negative
            + self.positive_as_tie
            + self.negative_as_positive
            + self.negative_as_tie
    }

    pub fn correct(&self) -> usize {
        self.positive_as_positive + self.negative_as_negative
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.correct(), self.total())
    }

    fn fields(&self) -> [(&'static str, usize); 6] {
        [
            ("positive-as-positive", self.positive_as_positive),
            ("positive-as-negative", self.positive_as_negative),
            ("positive-as-tie", self.positive_as_tie),
            ("negative-as-positive", self.negative_as_positive),
            ("negative-as-negative", self.negative_as_negative),
            ("negative-as-tie", self.negative_as_tie),
        ]
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub protocol: Protocol,
    pub algorithm: Algorithm,
    pub semantics: Semantics,
    pub config: GaConfig,
    pub corpus: String,
    pub instances: usize,
    pub freq_threshold: Option<usize>,
    pub words_considered: Option<usize>,
    /// Seed-dictionary size handed to the GA in each fold.
    pub fold_train_words: Vec<usize>,
    pub fold_test_sizes: Vec<usize>,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub confusion: Option<Confusion>,
}

impl ExperimentReport {
    fn new(protocol: Protocol, algorithm: Algorithm, semantics: Semantics, config: &GaConfig, corpus: &Corpus) -> Self {
        ExperimentReport {
            protocol,
            algorithm,
            semantics,
            config: config.clone(),
            corpus: corpus.provenance.clone(),
            instances: corpus.len(),
            freq_threshold: None,
            words_considered: None,
            fold_train_words: Vec::new(),
            fold_test_sizes: Vec::new(),
            fold_accuracies: Vec::new(),
            mean_accuracy: 0.0,
            confusion: None,
        }
    }

    fn finish(mut self) -> Self {
        self.mean_accuracy = mean(&self.fold_accuracies);
        self
    }

    pub fn mean_train_words(&self) -> f64 {
        mean(&self.fold_train_words.iter().map(|&n| n as f64).collect::<Vec<_>>())
    }

    fn rows(&self) -> Vec<(String, String)> {
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let c = &self.config;
        let mut rows = vec![
            ("protocol".to_string(), self.protocol.to_string()),
            ("algorithm".into(), self.algorithm.to_string()),
            ("semantics".into(), self.semantics.to_string()),
            ("corpus".into(), self.corpus.clone()),
            ("instances".into(), self.instances.to_string()),
            ("pop".into(), c.population_size.to_string()),
            ("tournament".into(), c.tournament_size.to_string()),
            ("generations".into(), c.max_generations.to_string()),
            ("crossover-rate".into(), c.crossover_rate.to_string()),
            ("mutation-rate".into(), c.mutation_rate.to_string()),
            ("seed".into(), c.seed.to_string()),
            ("folds".into(), self.fold_accuracies.len().to_string()),
        ];
        if let Some(t) = self.freq_threshold {
            rows.push(("freq-threshold".into(), t.to_string()));
        }
        if let Some(n) = self.words_considered {
            rows.push(("words-considered".into(), n.to_string()));
        }
        if !self.fold_train_words.is_empty() {
            rows.push(("fold-train-words".into(), list(&self.fold_train_words)));
            rows.push(("mean-train-words".into(), format!("{:.2}", self.mean_train_words())));
        }
        rows.push(("fold-test-sizes".into(), list(&self.fold_test_sizes)));
        rows.push((
            "fold-accuracies".into(),
            self.fold_accuracies
                .iter()
                .map(|a| format!("{a:.6}"))
                .collect::<Vec<_>>()
                .join(","),
        ));
        rows.push(("mean-accuracy".into(), format!("{:.6}", self.mean_accuracy)));
        if let Some(conf) = &self.confusion {
            for (k, v) in conf.fields() {
                rows.push((k.into(), v.to_string()));
            }
        }
        rows
    }

    /// Machine-readable `field<TAB>value` lines.
    pub fn write_tsv<W: Write>(&self, sink: &mut W) -> Result<()> {
        for (k, v) in self.rows() {
            writeln!(sink, "{k}\t{v}")?;
        }
        Ok(())
    }

    /// Aligned human-readable summary with one row per fold.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let rows = self.rows();
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows.iter().filter(|(k, _)| !k.starts_with("fold-")) {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>4}  {:>11}  {:>10}  {:>9}", "fold", "train-words", "test-size", "accuracy");
        for (i, acc) in self.fold_accuracies.iter().enumerate() {
            let train = self
                .fold_train_words
                .get(i)
                .map_or_else(|| "-".to_string(), usize::to_string);
            let test = self.fold_test_sizes.get(i).copied().unwrap_or(0);
            let _ = writeln!(out, "{:>4}  {train:>11}  {test:>10}  {:>8.2}%", i + 1, acc * 100.0);
        }
        let _ = writeln!(out, "{:>4}  {:>11}  {:>10}  {:>8.2}%", "mean", "", "", self.mean_accuracy * 100.0);
        out
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

/// Per-fold seed: root seed plus fold index.
fn fold_seed(config: &GaConfig, fold: usize) -> GaConfig {
    config.with_seed(config.seed.wrapping_add(fold as u64))
}

/// Dictionary words occurring at least `threshold` times in `corpus` (and
/// at least once), in dictionary order.
pub fn frequent_dictionary_words(corpus: &Corpus, dictionary: &Dictionary, threshold: usize) -> Vec<String> {
    let freqs = word_frequencies(corpus);
    let min = threshold.max(1);
    dictionary
        .words()
        .filter(|w| freqs.get(*w).copied().unwrap_or(0) >= min)
        .map(str::to_string)
        .collect()
}

/// Outcome of one dictionary-word fold.
#[derive(Clone, Debug, PartialEq)]
pub struct WordFold {
    pub seed_words: usize,
    pub test_words: Vec<String>,
    pub learned: Vec<WordClass>,
}

/// Runs the word-level cross-validation and returns each fold's learned
/// classes for its held-out words.
pub fn dictionary_word_folds(
    corpus: &Corpus,
    lexicon: &SeedLexicon,
    freq_threshold: usize,
    k: usize,
    config: &GaConfig,
    semantics: Semantics,
) -> Result<(Vec<String>, Vec<WordFold>)> {
    config.validate()?;
    let considered = frequent_dictionary_words(corpus, lexicon.sentiment(), freq_threshold);
    if considered.is_empty() {
        return Err(Error::contract(format!(
            "no dictionary word occurs at least {} times in the corpus",
            freq_threshold.max(1)
        )));
    }
    let folds = make_folds(&considered, k, config.seed)?;

    let results = (0..k)
        .into_par_iter()
        .map(|f| {
            let test: HashSet<&str> = folds[f].iter().map(String::as_str).collect();
            let train: HashSet<&str> = folds
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .flat_map(|(_, words)| words.iter().map(String::as_str))
                .collect();
            let seeds = lexicon.sentiment().filtered(|w| train.contains(w));
            if seeds.words().any(|w| test.contains(w)) {
                return Err(Error::contract("held-out word leaked into the seed dictionary"));
            }
            let fold_lexicon = SeedLexicon::new(seeds, lexicon.amplifier().clone())?;
            let index = build_unknown_index(corpus, &fold_lexicon);
            let problem = GasaProblem::new(corpus, &fold_lexicon, &index, semantics);
            let (best, _) = run_ga(&problem, &fold_seed(config, f))?;
            let learned = extract_classifications(&best.genome, &folds[f], &index)?;
            Ok(WordFold {
                seed_words: fold_lexicon.sentiment().len(),
                test_words: folds[f].clone(),
                learned,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((considered, results))
}

fn word_cv_report(
    protocol: Protocol,
    corpus: &Corpus,
    lexicon: &SeedLexicon,
    freq_threshold: usize,
    k: usize,
    config: &GaConfig,
    semantics: Semantics,
    correct: impl Fn(WordClass, WordClass) -> bool,
) -> Result<ExperimentReport> {
    let (considered, folds) = dictionary_word_folds(corpus, lexicon, freq_threshold, k, config, semantics)?;
    let mut report = ExperimentReport::new(protocol, Algorithm::Gasa, semantics, config, corpus);
    report.freq_threshold = Some(freq_threshold);
    report.words_considered = Some(considered.len());
    for fold in &folds {
        let hits = fold
            .test_words
            .iter()
            .zip(&fold.learned)
            .filter(|(w, &learned)| {
                let truth = lexicon.sentiment().get(w).expect("considered words come from the dictionary");
                correct(learned, truth)
            })
            .count();
        report.fold_train_words.push(fold.seed_words);
        report.fold_test_sizes.push(fold.test_words.len());
        report.fold_accuracies.push(ratio(hits, fold.test_words.len()));
    }
    Ok(report.finish())
}

/// Fraction of held-out dictionary words the GA learned as sentiment words.
pub fn run_sent_vs_amp_cv(
    corpus: &Corpus,
    lexicon: &SeedLexicon,
    freq_threshold: usize,
    k: usize,
    config: &GaConfig,
    semantics: Semantics,
) -> Result<ExperimentReport> {
    word_cv_report(
        Protocol::SentVsAmp,
        corpus,
        lexicon,
        freq_threshold,
        k,
        config,
        semantics,
        |learned, _| learned.kind == Kind::Sentiment,
    )
}

/// A held-out word is correct when it was learned as a sentiment word
/// whose sign matches the dictionary. Zero values and amplifiers are wrong.
pub fn polarity_matches(learned: WordClass, truth: WordClass) -> bool {
    learned.kind == Kind::Sentiment && learned.value != 0.0 && learned.value.signum() == truth.value.signum()
}

pub fn run_polarity_value_cv(
    corpus: &Corpus,
    lexicon: &SeedLexicon,
    freq_threshold: usize,
    k: usize,
    config: &GaConfig,
    semantics: Semantics,
) -> Result<ExperimentReport> {
    word_cv_report(
        Protocol::PolarityValue,
        corpus,
        lexicon,
        freq_threshold,
        k,
        config,
        semantics,
        polarity_matches,
    )
}

fn test_model(model: &Model, test: &Corpus) -> Confusion {
    let mut confusion = Confusion::default();
    for inst in &test.instances {
        confusion.record(inst.label, model.predict_tokens(&inst.tokens));
    }
    confusion
}

pub const HOLDOUT_TRAIN_FRACTION: f64 = 0.7;

/// Stratified 70/30 split; train on 70, report accuracy on 30.
pub fn run_holdout_accuracy(
    corpus: &Corpus,
    lexicon: &SeedLexicon,
    config: &GaConfig,
    semantics: Semantics,
    algorithm: Algorithm,
) -> Result<ExperimentReport> {
    let (train, test) = split_holdout(corpus, HOLDOUT_TRAIN_FRACTION, config.seed)?;
    let (model, _) = Model::train(&train, lexicon, config, semantics, algorithm)?;
    let confusion = test_model(&model, &test);
    let mut report = ExperimentReport::new(Protocol::HoldoutAccuracy, algorithm, semantics, config, corpus);
    report.fold_test_sizes.push(test.len());
    report.fold_accuracies.push(confusion.accuracy());
    report.confusion = Some(confusion);
    Ok(report.finish())
}

/// k-fold cross-validation over instances for one algorithm. Running it
/// for both algorithms with the same config uses identical folds.
pub fn run_instance_cv(
    corpus: &Corpus,
    lexicon: &SeedLexicon,
    k: usize,
    config: &GaConfig,
    semantics: Semantics,
    algorithm: Algorithm,
) -> Result<ExperimentReport> {
    config.validate()?;
    let order: Vec<usize> = (0..corpus.len()).collect();
    let folds = make_folds(&order, k, config.seed)?;
    let confusions = (0..k)
        .into_par_iter()
        .map(|f| {
            let held: HashSet<usize> = folds[f].iter().copied().collect();
            let mut train = Corpus::new(Vec::new(), &corpus.provenance);
            let mut test = Corpus::new(Vec::new(), &corpus.provenance);
            for (i, inst) in corpus.instances.iter().enumerate() {
                if held.contains(&i) {
                    test.instances.push(inst.clone());
                } else {
                    train.instances.push(inst.clone());
                }
            }
            let (model, _) = Model::train(&train, lexicon, &fold_seed(config, f), semantics, algorithm)?;
            Ok(test_model(&model, &test))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = ExperimentReport::new(Protocol::GasaVsCagasa, algorithm, semantics, config, corpus);
    let mut total = Confusion::default();
    for c in &confusions {
        report.fold_test_sizes.push(c.total());
        report.fold_accuracies.push(c.accuracy());
        total.add(c);
    }
    report.confusion = Some(total);
    Ok(report.finish())
}

/// Ground-truth word classes used to generate labelled text.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantedLexicon {
    pub entries: Vec<(String, WordClass)>,
    /// Words that carry no sentiment.
    pub fillers: Vec<String>,
}

impl PlantedLexicon {
    pub fn new(entries: Vec<(String, WordClass)>, fillers: Vec<String>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::contract("planted lexicon needs at least one word"));
        }
        let mut seen = HashSet::new();
        for w in entries.iter().map(|(w, _)| w).chain(&fillers) {
            if !seen.insert(w.as_str()) {
                return Err(Error::contract(format!("planted word `{w}` listed twice")));
            }
        }
        Ok(PlantedLexicon { entries, fillers })
    }

    /// `sentiment` words alternating +1/-1, `amplifiers` with random
    /// evolvable amplifier values, and `fillers` neutral words. Names are
    /// `s000`, `a000` and `f000` style.
    pub fn random<R: Rng + ?Sized>(sentiment: usize, amplifiers: usize, fillers: usize, rng: &mut R) -> Result<Self> {
        let mut entries: Vec<(String, WordClass)> = (0..sentiment)
            .map(|i| {
                let v = if i % 2 == 0 { 1.0 } else { -1.0 };
                (format!("s{i:03}"), WordClass::sentiment(v))
            })
            .collect();
        for i in 0..amplifiers {
            let v = AMPLIFIER_VALUES[rng.gen_range(0..AMPLIFIER_VALUES.len())];
            entries.push((format!("a{i:03}"), WordClass::amplifier(v)));
        }
        PlantedLexicon::new(entries, (0..fillers).map(|i| format!("f{i:03}")).collect())
    }

    pub fn class_of(&self, word: &str) -> Option<WordClass> {
        self.entries
            .iter()
            .find(|(w, _)| w == word)
            .map(|&(_, c)| c)
            .or_else(|| self.fillers.iter().any(|f| f == word).then_some(WordClass::NEUTRAL))
    }

    /// Planted sentiment words with non-zero value, as a sentiment dictionary.
    pub fn sentiment_dictionary(&self) -> Dictionary {
        let mut d = Dictionary::new(Kind::Sentiment);
        for (w, c) in &self.entries {
            if c.kind == Kind::Sentiment && c.value != 0.0 {
                d.insert(w, c.value).expect("distinct planted words");
            }
        }
        d
    }

    pub fn is_disjoint_from(&self, lexicon: &SeedLexicon) -> bool {
        self.entries.iter().map(|(w, _)| w).chain(&self.fillers).all(|w| !lexicon.contains(w))
    }

    fn vocabulary(&self) -> Vec<(&str, WordClass)> {
        self.entries
            .iter()
            .map(|(w, c)| (w.as_str(), *c))
            .chain(self.fillers.iter().map(|f| (f.as_str(), WordClass::NEUTRAL)))
            .collect()
    }
}

/// Shape of a synthetic corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub instances: usize,
    pub min_len: usize,
    pub max_len: usize,
    /// Word sampling follows a Zipf law with this exponent over a random
    /// ranking of the vocabulary; 0 samples uniformly.
    pub zipf_exponent: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            instances: 500,
            min_len: 4,
            max_len: 10,
            zipf_exponent: 0.0,
        }
    }
}

/// Samples sentences from the planted vocabulary and labels them with the
/// evaluator under the ground truth. Tied sentences are redrawn, and
/// sentences whose label quota is full are dropped until the corpus has
/// `ceil(n/2)` positive and `floor(n/2)` negative instances. At most `10 * n`
/// sentences are drawn.
pub fn generate_synthetic_corpus<R: Rng + ?Sized>(
    lexicon: &PlantedLexicon,
    spec: &SynthSpec,
    semantics: Semantics,
    rng: &mut R,
) -> Result<Corpus> {
    if lexicon.entries.is_empty() {
        return Err(Error::contract("planted lexicon is empty"));
    }
    if spec.min_len == 0 || spec.min_len > spec.max_len {
        return Err(Error::contract(format!(
            "bad sentence length range {}..={}",
            spec.min_len, spec.max_len
        )));
    }
    let mut vocab = lexicon.vocabulary();
    vocab.shuffle(rng);
    let weights: Vec<f64> = (0..vocab.len())
        .map(|r| (r as f64 + 1.0).powf(-spec.zipf_exponent))
        .collect();
    let sampler = WeightedIndex::new(&weights).map_err(|e| Error::Generation(e.to_string()))?;

    let mut quota = [spec.instances - spec.instances / 2, spec.instances / 2];
    let mut instances = Vec::with_capacity(spec.instances);
    let budget = 10 * spec.instances;
    let mut draws = 0;
    while instances.len() < spec.instances {
        if draws == budget {
            return Err(Error::Generation(format!(
                "only {} of {} balanced, non-tied sentences after {budget} draws",
                instances.len(),
                spec.instances
            )));
        }
        draws += 1;
        let len = rng.gen_range(spec.min_len..=spec.max_len);
        let picks: Vec<usize> = (0..len).map(|_| sampler.sample(rng)).collect();
        let label = match classify_score(evaluate(picks.iter().map(|&i| vocab[i].1), semantics)) {
            Polarity::Positive => Label::Positive,
            Polarity::Negative => Label::Negative,
            Polarity::Tie => continue,
        };
        let slot = &mut quota[usize::from(label == Label::Negative)];
        if *slot == 0 {
            continue;
        }
        *slot -= 1;
        instances.push(Instance::new(picks.iter().map(|&i| vocab[i].0.to_string()).collect(), label));
    }
    Ok(Corpus::new(instances, "synthetic"))
}
