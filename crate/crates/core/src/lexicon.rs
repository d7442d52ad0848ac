//! Word classifications and the seed dictionaries.
//!
//! Every word the evaluator sees is either a *sentiment* word, which adds its
//! value to the sentence score, or an *amplifier*, which scales the sentiment
//! words that follow it. Known words come from two fixed dictionaries; the
//! rest are learned.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Values a learned sentiment gene may take.
pub const SENTIMENT_VALUES: [f64; 3] = [-1.0, 0.0, 1.0];
/// Values a learned amplifier gene may take.
pub const AMPLIFIER_VALUES: [f64; 3] = [0.5, 1.0, 1.5];

/// All six classifications reachable by evolution, sentiment first.
pub const EVOLVABLE: [WordClass; 6] = [
    WordClass::sentiment(-1.0),
    WordClass::sentiment(0.0),
    WordClass::sentiment(1.0),
    WordClass::amplifier(0.5),
    WordClass::amplifier(1.0),
    WordClass::amplifier(1.5),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Sentiment,
    Amplifier,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Sentiment => "sentiment",
            Kind::Amplifier => "amplifier",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sentiment" => Ok(Kind::Sentiment),
            "amplifier" => Ok(Kind::Amplifier),
            other => Err(format!("unknown kind `{other}`")),
        }
    }
}

/// A word's classification-value pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WordClass {
    pub kind: Kind,
    pub value: f64,
}

impl WordClass {
    pub const fn sentiment(value: f64) -> Self {
        WordClass {
            kind: Kind::Sentiment,
            value,
        }
    }

    pub const fn amplifier(value: f64) -> Self {
        WordClass {
            kind: Kind::Amplifier,
            value,
        }
    }

    /// The class given to words nobody has an opinion about.
    pub const NEUTRAL: WordClass = WordClass::sentiment(0.0);

    pub fn is_amplifier(&self) -> bool {
        self.kind == Kind::Amplifier
    }

    /// Whether evolution could have produced this pair.
    pub fn is_evolvable(&self) -> bool {
        let set = match self.kind {
            Kind::Sentiment => &SENTIMENT_VALUES,
            Kind::Amplifier => &AMPLIFIER_VALUES,
        };
        set.contains(&self.value)
    }

    /// Position in [`EVOLVABLE`], if any.
    pub fn evolvable_index(&self) -> Option<usize> {
        EVOLVABLE.iter().position(|c| c == self)
    }
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{:.1}", self.kind, self.value)
    }
}

/// Fixed word table whose entries all share one kind.
#[derive(Clone, Debug, PartialEq)]
pub struct Dictionary {
    kind: Kind,
    entries: BTreeMap<String, f64>,
}

impl Dictionary {
    pub fn new(kind: Kind) -> Self {
        Dictionary {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Adds a word. Re-adding a word with the same value is a no-op; a
    /// different value is a conflict.
    pub fn insert(&mut self, word: &str, value: f64) -> Result<()> {
        let word = normalize(word);
        if word.is_empty() {
            return Err(Error::contract("dictionary words must be non-empty"));
        }
        match self.entries.get(&word) {
            Some(&existing) if existing != value => Err(Error::Conflict(word)),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(word, value);
                Ok(())
            }
        }
    }

    pub fn get(&self, word: &str) -> Option<WordClass> {
        self.entries.get(word).map(|&value| WordClass {
            kind: self.kind,
            value,
        })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in lexicographic word order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, WordClass)> + '_ {
        self.entries.iter().map(move |(w, &value)| {
            (
                w.as_str(),
                WordClass {
                    kind: self.kind,
                    value,
                },
            )
        })
    }

    pub fn words(&self) -> impl Iterator<Item = &str> + '_ {
        self.entries.keys().map(String::as_str)
    }

    /// Copy restricted to the words accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&str) -> bool) -> Dictionary {
        Dictionary {
            kind: self.kind,
            entries: self
                .entries
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, &v)| (w.clone(), v))
                .collect(),
        }
    }
}

/// The sentiment and amplifier dictionaries used together for resolution.
///
/// A word may not appear in both.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedLexicon {
    sentiment: Dictionary,
    amplifier: Dictionary,
}

impl SeedLexicon {
    pub fn new(sentiment: Dictionary, amplifier: Dictionary) -> Result<Self> {
        if sentiment.kind() != Kind::Sentiment || amplifier.kind() != Kind::Amplifier {
            return Err(Error::contract("dictionary kinds are swapped"));
        }
        if let Some(word) = sentiment.words().find(|w| amplifier.contains(w)) {
            return Err(Error::Overlap(word.to_string()));
        }
        Ok(SeedLexicon {
            sentiment,
            amplifier,
        })
    }

    pub fn sentiment(&self) -> &Dictionary {
        &self.sentiment
    }

    pub fn amplifier(&self) -> &Dictionary {
        &self.amplifier
    }

    pub fn lookup(&self, word: &str) -> Option<WordClass> {
        lookup(word, &self.sentiment, &self.amplifier)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.sentiment.contains(word) || self.amplifier.contains(word)
    }
}

/// Sentiment dictionary first, then amplifier dictionary.
pub fn lookup(word: &str, sentiment: &Dictionary, amplifier: &Dictionary) -> Option<WordClass> {
    sentiment.get(word).or_else(|| amplifier.get(word))
}

/// The negators `not` and `never`, both amplifiers of value -1.
pub fn seed_amplifier_dictionary() -> Dictionary {
    let mut dict = Dictionary::new(Kind::Amplifier);
    for word in ["not", "never"] {
        dict.insert(word, -1.0).expect("seed words are distinct");
    }
    dict
}

/// Lowercases and trims. No stemming.
pub fn normalize(word: &str) -> String {
    word.trim().to_lowercase()
}

/// Where a sentiment dictionary comes from.
pub enum SentimentSource<R> {
    /// One word per line in a positive file and a negative file.
    PolarityLists { positive: R, negative: R },
    /// One `word<TAB>positive|negative` record per line.
    Labeled(R),
}

pub fn load_sentiment_dictionary<R: BufRead>(source: SentimentSource<R>) -> Result<Dictionary> {
    let mut dict = Dictionary::new(Kind::Sentiment);
    match source {
        SentimentSource::PolarityLists { positive, negative } => {
            for (reader, value, name) in [(positive, 1.0, "positive list"), (negative, -1.0, "negative list")] {
                for (line_no, word) in polarity_list_words(reader, name)? {
                    insert_checked(&mut dict, &word, value, name, line_no)?;
                }
            }
        }
        SentimentSource::Labeled(reader) => {
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                let line_no = i + 1;
                if is_skippable(&line) {
                    continue;
                }
                let mut fields = line.trim_end_matches('\r').split('\t');
                let (word, label) = match (fields.next(), fields.next(), fields.next()) {
                    (Some(w), Some(l), None) => (w, l.trim()),
                    _ => return Err(Error::parse("labeled dictionary", line_no, "expected `word<TAB>label`")),
                };
                let value = match label {
                    "positive" => 1.0,
                    "negative" => -1.0,
                    other => {
                        return Err(Error::parse(
                            "labeled dictionary",
                            line_no,
                            format!("unknown label `{other}`"),
                        ))
                    }
                };
                if normalize(word).is_empty() || word.trim().contains(char::is_whitespace) {
                    return Err(Error::parse("labeled dictionary", line_no, "malformed word"));
                }
                insert_checked(&mut dict, word, value, "labeled dictionary", line_no)?;
            }
        }
    }
    Ok(dict)
}

fn insert_checked(dict: &mut Dictionary, word: &str, value: f64, name: &str, line: usize) -> Result<()> {
    dict.insert(word, value).map_err(|e| match e {
        Error::Contract(m) => Error::parse(name, line, m),
        other => other,
    })
}

// `#` comments and blank lines are skipped; `;` too, which is what the
// widely distributed opinion-lexicon files use for their preamble.
fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#') || t.starts_with(';')
}

fn polarity_list_words<R: BufRead>(reader: R, name: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let word = line.trim();
        if word.contains(char::is_whitespace) {
            return Err(Error::parse(name, i + 1, format!("expected one word, got `{word}`")));
        }
        out.push((i + 1, word.to_string()));
    }
    Ok(out)
}

/// Writes `word<TAB>kind<TAB>value` records in the given order.
pub fn export_lexicon<S: AsRef<str>, W: Write>(words: &[S], classes: &[WordClass], sink: &mut W) -> Result<()> {
    if words.len() != classes.len() {
        return Err(Error::contract(format!(
            "{} words but {} classifications",
            words.len(),
            classes.len()
        )));
    }
    for (word, class) in words.iter().zip(classes) {
        writeln!(sink, "{}\t{}", word.as_ref(), class)?;
    }
    Ok(())
}

/// Parses one lexicon record.
pub fn parse_lexicon_record(line: &str) -> std::result::Result<(String, WordClass), String> {
    let fields: Vec<&str> = line.trim_end_matches('\r').split('\t').collect();
    if fields.len() != 3 {
        return Err(format!("expected 3 tab-separated fields, got {}", fields.len()));
    }
    let word = normalize(fields[0]);
    if word.is_empty() {
        return Err("empty word".into());
    }
    let kind: Kind = fields[1].parse()?;
    let value: f64 = fields[2]
        .parse()
        .map_err(|_| format!("bad value `{}`", fields[2]))?;
    if !value.is_finite() {
        return Err(format!("non-finite value `{}`", fields[2]));
    }
    Ok((word, WordClass { kind, value }))
}

/// Reads lexicon records back, preserving file order. Blank lines are skipped.
pub fn parse_lexicon<R: BufRead>(reader: R) -> Result<Vec<(String, WordClass)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_lexicon_record(&line).map_err(|m| Error::parse("lexicon", i + 1, m))?);
    }
    Ok(out)
}

/// Builds a dictionary of one kind from lexicon records.
pub fn dictionary_from_records(kind: Kind, records: &[(String, WordClass)]) -> Result<Dictionary> {
    let mut dict = Dictionary::new(kind);
    for (word, class) in records {
        if class.kind != kind {
            return Err(Error::contract(format!("`{word}` is a {} word, expected {kind}", class.kind)));
        }
        dict.insert(word, class.value)?;
    }
    Ok(dict)
}
