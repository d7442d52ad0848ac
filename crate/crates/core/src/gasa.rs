//! GASA: one classification gene per unknown word.

use rand::Rng;

use crate::corpus::{Corpus, Label, UnknownWordIndex};
use crate::error::{Error, Result};
use crate::evaluator::{classify_score, evaluate, Polarity, Semantics};
use crate::ga::Problem;
use crate::lexicon::{SeedLexicon, WordClass, AMPLIFIER_VALUES, EVOLVABLE, SENTIMENT_VALUES};

/// Gene `i` classifies the `i`-th word of the unknown-word index.
#[derive(Clone, Debug, PartialEq)]
pub struct GasaChromosome {
    pub genes: Vec<WordClass>,
}

impl GasaChromosome {
    pub fn new(genes: Vec<WordClass>) -> Self {
        GasaChromosome { genes }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }
}

/// Uniform kind, then a uniform value for that kind.
pub fn random_gene<R: Rng + ?Sized>(rng: &mut R) -> WordClass {
    if rng.gen_bool(0.5) {
        WordClass::sentiment(SENTIMENT_VALUES[rng.gen_range(0..3)])
    } else {
        WordClass::amplifier(AMPLIFIER_VALUES[rng.gen_range(0..3)])
    }
}

/// A uniformly drawn evolvable class other than `current`.
pub fn different_gene<R: Rng + ?Sized>(current: WordClass, rng: &mut R) -> WordClass {
    match current.evolvable_index() {
        Some(skip) => {
            let i = rng.gen_range(0..EVOLVABLE.len() - 1);
            EVOLVABLE[if i >= skip { i + 1 } else { i }]
        }
        None => EVOLVABLE[rng.gen_range(0..EVOLVABLE.len())],
    }
}

pub fn random_chromosome<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GasaChromosome {
    GasaChromosome::new((0..n).map(|_| random_gene(rng)).collect())
}

/// Replaces the gene at `position` with `replacement`.
pub fn mutate_at(parent: &GasaChromosome, position: usize, replacement: WordClass) -> Result<GasaChromosome> {
    if position >= parent.len() {
        return Err(Error::contract(format!(
            "mutation position {position} outside chromosome of length {}",
            parent.len()
        )));
    }
    let mut child = parent.clone();
    child.genes[position] = replacement;
    Ok(child)
}

/// Changes exactly one uniformly chosen gene to a different class.
pub fn mutate<R: Rng + ?Sized>(parent: &GasaChromosome, rng: &mut R) -> Result<GasaChromosome> {
    if parent.is_empty() {
        return Err(Error::contract("cannot mutate an empty chromosome"));
    }
    let position = rng.gen_range(0..parent.len());
    mutate_at(parent, position, different_gene(parent.genes[position], rng))
}

/// Swaps the genes at `position` between the parents.
pub fn crossover_at(
    first: &GasaChromosome,
    second: &GasaChromosome,
    position: usize,
) -> Result<(GasaChromosome, GasaChromosome)> {
    check_crossover_lengths(first.len(), second.len())?;
    if position >= first.len() {
        return Err(Error::contract(format!(
            "crossover position {position} outside chromosome of length {}",
            first.len()
        )));
    }
    let (mut a, mut b) = (first.clone(), second.clone());
    std::mem::swap(&mut a.genes[position], &mut b.genes[position]);
    Ok((a, b))
}

/// Single-position crossover at a uniformly chosen gene index.
pub fn crossover<R: Rng + ?Sized>(
    first: &GasaChromosome,
    second: &GasaChromosome,
    rng: &mut R,
) -> Result<(GasaChromosome, GasaChromosome)> {
    check_crossover_lengths(first.len(), second.len())?;
    crossover_at(first, second, rng.gen_range(0..first.len()))
}

pub(crate) fn check_crossover_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::contract(format!("parents differ in length ({a} vs {b})")));
    }
    if a == 0 {
        return Err(Error::contract("cannot cross empty chromosomes"));
    }
    Ok(())
}

/// How one token is resolved once the dictionaries have been consulted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Slot {
    Known(WordClass),
    Gene(usize),
}

pub(crate) fn compile_tokens<S: AsRef<str>>(tokens: &[S], lexicon: &SeedLexicon, index: &UnknownWordIndex) -> Vec<Slot> {
    tokens
        .iter()
        .map(|t| {
            let t = t.as_ref();
            match lexicon.lookup(t) {
                Some(c) => Slot::Known(c),
                None => match index.position_of(t) {
                    Some(i) => Slot::Gene(i),
                    None => Slot::Known(WordClass::NEUTRAL),
                },
            }
        })
        .collect()
}

/// A training corpus prepared for repeated fitness evaluation.
pub struct GasaProblem {
    instances: Vec<(Vec<Slot>, Label)>,
    gene_count: usize,
    semantics: Semantics,
}

impl GasaProblem {
    pub fn new(corpus: &Corpus, lexicon: &SeedLexicon, index: &UnknownWordIndex, semantics: Semantics) -> Self {
        GasaProblem {
            instances: corpus
                .instances
                .iter()
                .map(|inst| (compile_tokens(&inst.tokens, lexicon, index), inst.label))
                .collect(),
            gene_count: index.len(),
            semantics,
        }
    }

    pub fn gene_count(&self) -> usize {
        self.gene_count
    }

    pub fn instance_count(&self) -> usize {
        self.instances.len()
    }

    /// Number of instances the chromosome labels correctly.
    pub fn fitness(&self, chromosome: &GasaChromosome) -> Result<usize> {
        if chromosome.len() != self.gene_count {
            return Err(Error::contract(format!(
                "chromosome has {} genes but {} unknown words are indexed",
                chromosome.len(),
                self.gene_count
            )));
        }
        Ok(self.count_correct(&chromosome.genes))
    }

    fn count_correct(&self, genes: &[WordClass]) -> usize {
        self.instances
            .iter()
            .filter(|(slots, label)| {
                let classes = slots.iter().map(|s| match *s {
                    Slot::Known(c) => c,
                    Slot::Gene(i) => genes[i],
                });
                classify_score(evaluate(classes, self.semantics)).matches(*label)
            })
            .count()
    }
}

impl Problem for GasaProblem {
    type Genome = GasaChromosome;

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> GasaChromosome {
        random_chromosome(self.gene_count, rng)
    }

    fn fitness(&self, genome: &GasaChromosome) -> usize {
        self.count_correct(&genome.genes)
    }

    fn mutate<R: Rng + ?Sized>(&self, parent: &GasaChromosome, rng: &mut R) -> GasaChromosome {
        if parent.is_empty() {
            return parent.clone();
        }
        mutate(parent, rng).expect("non-empty chromosome")
    }

    fn crossover<R: Rng + ?Sized>(
        &self,
        first: &GasaChromosome,
        second: &GasaChromosome,
        rng: &mut R,
    ) -> (GasaChromosome, GasaChromosome) {
        if first.is_empty() {
            return (first.clone(), second.clone());
        }
        crossover(first, second, rng).expect("equal non-empty lengths")
    }

    fn max_fitness(&self) -> Option<usize> {
        Some(self.instances.len())
    }
}

pub fn fitness(
    chromosome: &GasaChromosome,
    corpus: &Corpus,
    index: &UnknownWordIndex,
    lexicon: &SeedLexicon,
    semantics: Semantics,
) -> Result<usize> {
    GasaProblem::new(corpus, lexicon, index, semantics).fitness(chromosome)
}

/// Sentence score under the chromosome. Words outside both the dictionaries
/// and the index count as neutral sentiment.
pub fn score<S: AsRef<str>>(
    chromosome: &GasaChromosome,
    tokens: &[S],
    index: &UnknownWordIndex,
    lexicon: &SeedLexicon,
    semantics: Semantics,
) -> f64 {
    let classes = compile_tokens(tokens, lexicon, index).into_iter().map(|s| match s {
        Slot::Known(c) => c,
        Slot::Gene(i) => chromosome.genes[i],
    });
    evaluate(classes, semantics)
}

pub fn predict<S: AsRef<str>>(
    chromosome: &GasaChromosome,
    tokens: &[S],
    index: &UnknownWordIndex,
    lexicon: &SeedLexicon,
    semantics: Semantics,
) -> Polarity {
    classify_score(score(chromosome, tokens, index, lexicon, semantics))
}

/// Learned class of each query word, in query order.
pub fn extract_classifications<S: AsRef<str>>(
    chromosome: &GasaChromosome,
    query: &[S],
    index: &UnknownWordIndex,
) -> Result<Vec<WordClass>> {
    query
        .iter()
        .map(|w| {
            let w = w.as_ref();
            index
                .position_of(w)
                .and_then(|i| chromosome.genes.get(i).copied())
                .ok_or_else(|| Error::contract(format!("word `{w}` is not an unknown word of this run")))
        })
        .collect()
}
