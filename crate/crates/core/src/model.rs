//! Trained models and their on-disk format.
//!
//! A model file is UTF-8 text. Header lines are `#key<TAB>value`. Sections
//! start with an `@name` line and hold one tab-separated record per line
//! (tabs shown as spaces below):
//!
//! ```text
//! #gasa-model 1
//! #algorithm gasa
//! #semantics literal
//! ...
//! @sentiment-dictionary
//! good sentiment 1.0
//! @amplifier-dictionary
//! not amplifier -1.0
//! @learned
//! zorp sentiment -1.0
//! ```
//!
//! GASA `@learned` records use the lexicon format and follow gene order.
//! CA-GASA records are
//! `word next_size previous_size list_next list_previous number_ahead
//! number_behind context_kind context_value free_kind free_value`, with the
//! two lists comma-joined (empty when the list is empty).
//!
//! The dictionaries are embedded so prediction resolves words exactly as
//! training did.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::cagasa::{predict_cagasa, score_cagasa, CagasaChromosome, CagasaGene, CagasaProblem, ContextRule};
use crate::corpus::{build_unknown_index, tokenize, Corpus, UnknownWordIndex};
use crate::error::{Error, Result};
use crate::evaluator::{classify_score, Polarity, Semantics};
use crate::ga::{run_ga, GaConfig, RunStats};
use crate::gasa::{self, GasaChromosome, GasaProblem};
use crate::lexicon::{
    dictionary_from_records, export_lexicon, parse_lexicon_record, Kind, SeedLexicon, WordClass,
};

const FORMAT_TAG: &str = "gasa-model";
const FORMAT_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    #[default]
    Gasa,
    Cagasa,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Gasa => "gasa",
            Algorithm::Cagasa => "cagasa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "gasa" => Ok(Algorithm::Gasa),
            "cagasa" => Ok(Algorithm::Cagasa),
            other => Err(format!("unknown algorithm `{other}` (expected gasa|cagasa)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Learned {
    Gasa(GasaChromosome),
    Cagasa(CagasaChromosome),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub semantics: Semantics,
    pub config: GaConfig,
    pub best_fitness: usize,
    pub training_instances: usize,
    pub lexicon: SeedLexicon,
    pub index: UnknownWordIndex,
    pub learned: Learned,
}

impl Model {
    /// Evolves a model on `corpus`.
    pub fn train(
        corpus: &Corpus,
        lexicon: &SeedLexicon,
        config: &GaConfig,
        semantics: Semantics,
        algorithm: Algorithm,
    ) -> Result<(Model, RunStats)> {
        let index = build_unknown_index(corpus, lexicon);
        let (learned, fitness, stats) = match algorithm {
            Algorithm::Gasa => {
                let problem = GasaProblem::new(corpus, lexicon, &index, semantics);
                let (best, stats) = run_ga(&problem, config)?;
                (Learned::Gasa(best.genome), best.fitness, stats)
            }
            Algorithm::Cagasa => {
                let problem = CagasaProblem::new(corpus, lexicon, &index, semantics);
                let (best, stats) = run_ga(&problem, config)?;
                (Learned::Cagasa(best.genome), best.fitness, stats)
            }
        };
        let model = Model {
            semantics,
            config: config.clone(),
            best_fitness: fitness,
            training_instances: corpus.len(),
            lexicon: lexicon.clone(),
            index,
            learned,
        };
        Ok((model, stats))
    }

    pub fn algorithm(&self) -> Algorithm {
        match self.learned {
            Learned::Gasa(_) => Algorithm::Gasa,
            Learned::Cagasa(_) => Algorithm::Cagasa,
        }
    }

    pub fn score_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> f64 {
        match &self.learned {
            Learned::Gasa(c) => gasa::score(c, tokens, &self.index, &self.lexicon, self.semantics),
            Learned::Cagasa(c) => score_cagasa(c, tokens, &self.index, &self.lexicon, self.semantics),
        }
    }

    pub fn predict_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Polarity {
        match &self.learned {
            Learned::Gasa(c) => gasa::predict(c, tokens, &self.index, &self.lexicon, self.semantics),
            Learned::Cagasa(c) => predict_cagasa(c, tokens, &self.index, &self.lexicon, self.semantics),
        }
    }

    pub fn predict_text(&self, text: &str) -> (f64, Polarity) {
        let score = self.score_tokens(&tokenize(text));
        (score, classify_score(score))
    }

    /// Context-free classification of every learned word, in gene order.
    pub fn learned_classes(&self) -> Vec<WordClass> {
        match &self.learned {
            Learned::Gasa(c) => c.genes.clone(),
            Learned::Cagasa(c) => c.genes.iter().map(|g| g.context_free).collect(),
        }
    }

    /// Writes the learned words as lexicon records (GASA) or full context
    /// records (CA-GASA).
    pub fn write_lexicon<W: Write>(&self, sink: &mut W) -> Result<()> {
        match &self.learned {
            Learned::Gasa(c) => export_lexicon(self.index.words(), &c.genes, sink),
            Learned::Cagasa(c) => {
                for gene in &c.genes {
                    writeln!(sink, "{}", format_cagasa_gene(gene))?;
                }
                Ok(())
            }
        }
    }

    pub fn write<W: Write>(&self, sink: &mut W) -> Result<()> {
        let c = &self.config;
        let header: [(&str, String); 11] = [
            (FORMAT_TAG, FORMAT_VERSION.to_string()),
            ("algorithm", self.algorithm().to_string()),
            ("semantics", self.semantics.to_string()),
            ("pop", c.population_size.to_string()),
            ("tournament", c.tournament_size.to_string()),
            ("generations", c.max_generations.to_string()),
            ("crossover-rate", c.crossover_rate.to_string()),
            ("mutation-rate", c.mutation_rate.to_string()),
            ("seed", c.seed.to_string()),
            ("best-fitness", self.best_fitness.to_string()),
            ("training-instances", self.training_instances.to_string()),
        ];
        for (k, v) in header {
            writeln!(sink, "#{k}\t{v}")?;
        }
        writeln!(sink, "@sentiment-dictionary")?;
        for (w, class) in self.lexicon.sentiment().iter() {
            writeln!(sink, "{w}\t{class}")?;
        }
        writeln!(sink, "@amplifier-dictionary")?;
        for (w, class) in self.lexicon.amplifier().iter() {
            writeln!(sink, "{w}\t{class}")?;
        }
        writeln!(sink, "@learned")?;
        self.write_lexicon(sink)
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Model> {
        #[derive(PartialEq)]
        enum Section {
            Header,
            Sentiment,
            Amplifier,
            Learned,
        }
        let err = |line: usize, m: String| Error::parse("model", line, m);

        let mut section = Section::Header;
        let mut header = std::collections::HashMap::new();
        let mut sentiment = Vec::new();
        let mut amplifier = Vec::new();
        let mut learned_lines = Vec::new();

        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            let n = i + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if section != Section::Header {
                    return Err(err(n, "header line after the first section".into()));
                }
                let (k, v) = rest
                    .split_once('\t')
                    .ok_or_else(|| err(n, "expected `#key<TAB>value`".into()))?;
                header.insert(k.to_string(), v.to_string());
                continue;
            }
            if let Some(name) = line.strip_prefix('@') {
                section = match name {
                    "sentiment-dictionary" => Section::Sentiment,
                    "amplifier-dictionary" => Section::Amplifier,
                    "learned" => Section::Learned,
                    other => return Err(err(n, format!("unknown section `{other}`"))),
                };
                continue;
            }
            match section {
                Section::Header => return Err(err(n, "record outside any section".into())),
                Section::Sentiment => sentiment.push(parse_lexicon_record(line).map_err(|m| err(n, m))?),
                Section::Amplifier => amplifier.push(parse_lexicon_record(line).map_err(|m| err(n, m))?),
                Section::Learned => learned_lines.push((n, line.to_string())),
            }
        }

        if header.get(FORMAT_TAG).map(String::as_str) != Some(FORMAT_VERSION) {
            return Err(err(1, format!("not a version {FORMAT_VERSION} model file")));
        }
        let get = |k: &str| {
            header
                .get(k)
                .cloned()
                .ok_or_else(|| err(1, format!("missing header `{k}`")))
        };
        fn num<T: FromStr>(k: &str, v: String) -> Result<T> {
            v.parse()
                .map_err(|_| Error::parse("model", 1, format!("bad value `{v}` for `{k}`")))
        }
        let algorithm: Algorithm = get("algorithm")?.parse().map_err(|m| err(1, m))?;
        let semantics: Semantics = get("semantics")?.parse().map_err(|m| err(1, m))?;
        let config = GaConfig {
            population_size: num("pop", get("pop")?)?,
            tournament_size: num("tournament", get("tournament")?)?,
            max_generations: num("generations", get("generations")?)?,
            crossover_rate: num("crossover-rate", get("crossover-rate")?)?,
            mutation_rate: num("mutation-rate", get("mutation-rate")?)?,
            seed: num("seed", get("seed")?)?,
        };
        let lexicon = SeedLexicon::new(
            dictionary_from_records(Kind::Sentiment, &sentiment)?,
            dictionary_from_records(Kind::Amplifier, &amplifier)?,
        )?;

        let (words, learned) = match algorithm {
            Algorithm::Gasa => {
                let mut words = Vec::new();
                let mut genes = Vec::new();
                for (n, line) in &learned_lines {
                    let (w, c) = parse_lexicon_record(line).map_err(|m| err(*n, m))?;
                    words.push(w);
                    genes.push(c);
                }
                (words, Learned::Gasa(GasaChromosome::new(genes)))
            }
            Algorithm::Cagasa => {
                let mut genes = Vec::new();
                for (n, line) in &learned_lines {
                    genes.push(parse_cagasa_gene(line).map_err(|m| err(*n, m))?);
                }
                let words = genes.iter().map(|g| g.word.clone()).collect();
                (words, Learned::Cagasa(CagasaChromosome { genes }))
            }
        };
        if let Some(w) = words.iter().find(|w| lexicon.contains(w)) {
            return Err(err(1, format!("learned word `{w}` is also a dictionary word")));
        }

        Ok(Model {
            semantics,
            config,
            best_fitness: num("best-fitness", get("best-fitness")?)?,
            training_instances: num("training-instances", get("training-instances")?)?,
            lexicon,
            index: UnknownWordIndex::from_words(words)?,
            learned,
        })
    }
}

pub fn format_cagasa_gene(gene: &CagasaGene) -> String {
    let r = &gene.rule;
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        gene.word,
        r.next_size,
        r.previous_size,
        r.list_next.join(","),
        r.list_previous.join(","),
        r.number_ahead,
        r.number_behind,
        r.context_class,
        gene.context_free,
    )
}

pub fn parse_cagasa_gene(line: &str) -> std::result::Result<CagasaGene, String> {
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != 11 {
        return Err(format!("expected 11 tab-separated fields, got {}", f.len()));
    }
    let int = |s: &str| s.parse::<usize>().map_err(|_| format!("bad integer `{s}`"));
    let list = |s: &str| -> Vec<String> {
        if s.is_empty() {
            Vec::new()
        } else {
            s.split(',').map(str::to_string).collect()
        }
    };
    let class = |k: &str, v: &str| -> std::result::Result<WordClass, String> {
        let kind: Kind = k.parse()?;
        let value: f64 = v.parse().map_err(|_| format!("bad value `{v}`"))?;
        Ok(WordClass { kind, value })
    };
    if f[0].is_empty() {
        return Err("empty word".into());
    }
    let rule = ContextRule {
        next_size: int(f[1])?,
        previous_size: int(f[2])?,
        list_next: list(f[3]),
        list_previous: list(f[4]),
        number_ahead: int(f[5])?,
        number_behind: int(f[6])?,
        context_class: class(f[7], f[8])?,
    };
    rule.validate()?;
    Ok(CagasaGene {
        word: f[0].to_string(),
        rule,
        context_free: class(f[9], f[10])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Instance, Label};
    use crate::lexicon::{seed_amplifier_dictionary, Dictionary};
    use std::io::Cursor;

    fn toy() -> (Corpus, SeedLexicon) {
        let corpus = Corpus::new(
            vec![
                Instance::from_text("good phone", Label::Positive),
                Instance::from_text("not good at all", Label::Negative),
                Instance::from_text("awful battery", Label::Negative),
                Instance::from_text("great screen", Label::Positive),
                Instance::from_text("the battery is great", Label::Positive),
                Instance::from_text("never buy this phone", Label::Negative),
            ],
            "toy",
        );
        let mut d = Dictionary::new(Kind::Sentiment);
        d.insert("good", 1.0).unwrap();
        (corpus, SeedLexicon::new(d, seed_amplifier_dictionary()).unwrap())
    }

    fn cfg() -> GaConfig {
        GaConfig {
            population_size: 30,
            max_generations: 40,
            seed: 9,
            ..GaConfig::default()
        }
    }

    #[test]
    fn round_trip_both_algorithms() {
        let (corpus, lex) = toy();
        for algo in [Algorithm::Gasa, Algorithm::Cagasa] {
            let (model, _) = Model::train(&corpus, &lex, &cfg(), Semantics::Prose, algo).unwrap();
            let mut buf = Vec::new();
            model.write(&mut buf).unwrap();
            let back = Model::read(Cursor::new(&buf)).unwrap();
            assert_eq!(back, model);
            let mut again = Vec::new();
            back.write(&mut again).unwrap();
            assert_eq!(buf, again);
            for inst in &corpus.instances {
                assert_eq!(back.predict_tokens(&inst.tokens), model.predict_tokens(&inst.tokens));
            }
        }
    }

    #[test]
    fn zero_generations_keeps_initial_best() {
        let (corpus, lex) = toy();
        let c = GaConfig {
            max_generations: 0,
            ..cfg()
        };
        let (model, stats) = Model::train(&corpus, &lex, &c, Semantics::Literal, Algorithm::Gasa).unwrap();
        assert_eq!(stats.generations_executed, 0);
        assert_eq!(model.best_fitness, stats.best_fitness_per_generation[0]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Model::read(Cursor::new("hello\n")).is_err());
        assert!(Model::read(Cursor::new("#gasa-model\t2\n")).is_err());
    }

    #[test]
    fn cagasa_record_round_trip() {
        let gene = CagasaGene {
            word: "sunk".into(),
            rule: ContextRule {
                next_size: 2,
                previous_size: 1,
                list_next: vec!["book".into()],
                list_previous: vec![],
                number_ahead: 1,
                number_behind: 2,
                context_class: WordClass::sentiment(-1.0),
            },
            context_free: WordClass::amplifier(1.5),
        };
        let line = format_cagasa_gene(&gene);
        assert_eq!(line, "sunk\t2\t1\tbook\t\t1\t2\tsentiment\t-1.0\tamplifier\t1.5");
        assert_eq!(parse_cagasa_gene(&line).unwrap(), gene);
    }
}
