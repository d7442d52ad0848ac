//! Labeled text, tokenization and data splitting.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lexicon::SeedLexicon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" => Ok(Label::Positive),
            "negative" => Ok(Label::Negative),
            _ => Err(format!("unknown label `{}`", s.trim())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub tokens: Vec<String>,
    pub label: Label,
}

impl Instance {
    pub fn new(tokens: Vec<String>, label: Label) -> Self {
        Instance { tokens, label }
    }

    /// Tokenizes `text`.
    pub fn from_text(text: &str, label: Label) -> Self {
        Instance::new(tokenize(text), label)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Corpus {
    pub instances: Vec<Instance>,
    pub provenance: String,
}

impl Corpus {
    pub fn new(instances: Vec<Instance>, provenance: impl Into<String>) -> Self {
        Corpus {
            instances,
            provenance: provenance.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.instances.iter().filter(|i| i.label == label).count()
    }

    /// Concatenates corpora in order.
    pub fn concat(parts: impl IntoIterator<Item = Corpus>) -> Corpus {
        let mut out = Corpus::default();
        let mut tags = Vec::new();
        for part in parts {
            tags.push(part.provenance);
            out.instances.extend(part.instances);
        }
        out.provenance = tags.join("+");
        out
    }
}

/// Lowercases and splits on every run of characters that are not letters,
/// digits or apostrophes.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    /// Records whose text produced no tokens.
    pub skipped_empty: usize,
}

/// Reads `label<TAB>text` records. Blank lines are ignored.
pub fn load_corpus<R: BufRead>(reader: R, provenance: &str) -> Result<(Corpus, LoadReport)> {
    let mut corpus = Corpus::new(Vec::new(), provenance);
    let mut report = LoadReport::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let (label, text) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(provenance, i + 1, "expected `label<TAB>text`"))?;
        let label: Label = label.parse().map_err(|m| Error::parse(provenance, i + 1, m))?;
        let tokens = tokenize(text);
        if tokens.is_empty() {
            report.skipped_empty += 1;
            continue;
        }
        corpus.instances.push(Instance::new(tokens, label));
    }
    Ok((corpus, report))
}

/// The frozen word → gene position mapping.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UnknownWordIndex {
    words: Vec<String>,
    positions: HashMap<String, usize>,
}

impl UnknownWordIndex {
    /// Builds an index from already-distinct words, keeping their order.
    pub fn from_words(words: Vec<String>) -> Result<Self> {
        let mut positions = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if positions.insert(w.clone(), i).is_some() {
                return Err(Error::contract(format!("word `{w}` listed twice in index")));
            }
        }
        Ok(UnknownWordIndex { words, positions })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn position_of(&self, word: &str) -> Option<usize> {
        self.positions.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Corpus words absent from both dictionaries, in first-occurrence order.
pub fn build_unknown_index(corpus: &Corpus, lexicon: &SeedLexicon) -> UnknownWordIndex {
    let mut index = UnknownWordIndex::default();
    for token in corpus.instances.iter().flat_map(|i| &i.tokens) {
        if !index.positions.contains_key(token) && !lexicon.contains(token) {
            index.positions.insert(token.clone(), index.words.len());
            index.words.push(token.clone());
        }
    }
    index
}

/// Token occurrence counts across all instances.
pub fn word_frequencies(corpus: &Corpus) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for token in corpus.instances.iter().flat_map(|i| &i.tokens) {
        *counts.entry(token.clone()).or_insert(0) += 1;
    }
    counts
}

/// Shuffles with `seed` and deals `items` into `k` folds whose sizes differ
/// by at most one. Earlier folds take the remainder.
pub fn make_folds<T: Clone>(items: &[T], k: usize, seed: u64) -> Result<Vec<Vec<T>>> {
    if k < 2 {
        return Err(Error::contract(format!("need at least 2 folds, got {k}")));
    }
    if items.len() < k {
        return Err(Error::contract(format!(
            "cannot split {} items into {k} folds",
            items.len()
        )));
    }
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let base = items.len() / k;
    let extra = items.len() % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        folds.push(order[start..start + size].iter().map(|&i| items[i].clone()).collect());
        start += size;
    }
    Ok(folds)
}

/// Label-stratified train/test split.
///
/// The overall train size is `round(n * train_fraction)`. Each class gets
/// `floor(n_c * train_fraction)` and leftover slots go to the classes with
/// the largest fractional remainder (positive first on ties). Both halves
/// keep the input order.
pub fn split_holdout(corpus: &Corpus, train_fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::contract(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let classes = [Label::Positive, Label::Negative];
    let members: Vec<Vec<usize>> = classes
        .iter()
        .map(|&l| {
            (0..corpus.len())
                .filter(|&i| corpus.instances[i].label == l)
                .collect()
        })
        .collect();
    for (label, m) in classes.iter().zip(&members) {
        if m.is_empty() {
            return Err(Error::contract(format!("no {label} instances to stratify")));
        }
    }

    let total_train = (corpus.len() as f64 * train_fraction).round() as usize;
    let exact: Vec<f64> = members.iter().map(|m| m.len() as f64 * train_fraction).collect();
    let mut quota: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut by_remainder: Vec<usize> = (0..classes.len()).collect();
    by_remainder.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    let mut missing = total_train.saturating_sub(quota.iter().sum());
    for &c in by_remainder.iter().cycle() {
        if missing == 0 {
            break;
        }
        if quota[c] < members[c].len() {
            quota[c] += 1;
            missing -= 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = vec![false; corpus.len()];
    for (c, m) in members.iter().enumerate() {
        let mut shuffled = m.clone();
        shuffled.shuffle(&mut rng);
        for &i in &shuffled[..quota[c]] {
            in_train[i] = true;
        }
    }

    let mut train = Corpus::new(Vec::new(), format!("{}/train", corpus.provenance));
    let mut test = Corpus::new(Vec::new(), format!("{}/test", corpus.provenance));
    for (inst, &t) in corpus.instances.iter().zip(&in_train) {
        if t {
            train.instances.push(inst.clone());
        } else {
            test.instances.push(inst.clone());
        }
    }
    Ok((train, test))
}
