//! Context-aware GASA.
//!
//! Each gene carries two classifications for its word. The context
//! classification applies when the words around an occurrence overlap the
//! gene's context lists enough:
//!
//! ```text
//! a = |ahead ∩ list_next|, b = |behind ∩ list_previous|
//! context applies  <=>  (a + b) / (|ahead| + |behind|) >= 0.5
//! ```
//!
//! where `ahead` holds up to `number_ahead` following words and `behind` up
//! to `number_behind` preceding words. With no neighbours at all the
//! context-free classification is used.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::{Corpus, Label, UnknownWordIndex};
use crate::error::{Error, Result};
use crate::evaluator::{classify_score, evaluate, Polarity, Semantics};
use crate::ga::Problem;
use crate::gasa::{check_crossover_lengths, compile_tokens, different_gene, random_gene, GasaChromosome, Slot};
use crate::lexicon::{SeedLexicon, WordClass};

/// Upper bound for list capacities and look distances.
pub const CONTEXT_CAP: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct ContextRule {
    pub next_size: usize,
    pub previous_size: usize,
    pub list_next: Vec<String>,
    pub list_previous: Vec<String>,
    pub number_ahead: usize,
    pub number_behind: usize,
    pub context_class: WordClass,
}

impl ContextRule {
    /// A rule that can never fire.
    pub fn inert(context_class: WordClass) -> Self {
        ContextRule {
            next_size: 0,
            previous_size: 0,
            list_next: Vec::new(),
            list_previous: Vec::new(),
            number_ahead: 0,
            number_behind: 0,
            context_class,
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        let distinct = |l: &[String]| l.iter().collect::<BTreeSet<_>>().len() == l.len();
        if self.list_next.len() > self.next_size || self.list_previous.len() > self.previous_size {
            return Err("context list exceeds its capacity".into());
        }
        if !distinct(&self.list_next) || !distinct(&self.list_previous) {
            return Err("context lists must hold distinct words".into());
        }
        if [self.next_size, self.previous_size, self.number_ahead, self.number_behind]
            .iter()
            .any(|&v| v > CONTEXT_CAP)
        {
            return Err(format!("sizes and distances are capped at {CONTEXT_CAP}"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CagasaGene {
    pub word: String,
    pub rule: ContextRule,
    pub context_free: WordClass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CagasaChromosome {
    pub genes: Vec<CagasaGene>,
}

impl CagasaChromosome {
    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    /// The context-free embedding of a GASA chromosome: every rule is inert.
    pub fn from_gasa(index: &UnknownWordIndex, chromosome: &GasaChromosome) -> Result<Self> {
        if index.len() != chromosome.len() {
            return Err(Error::contract("index and chromosome lengths differ"));
        }
        Ok(CagasaChromosome {
            genes: index
                .words()
                .iter()
                .zip(&chromosome.genes)
                .map(|(w, &c)| CagasaGene {
                    word: w.clone(),
                    rule: ContextRule::inert(c),
                    context_free: c,
                })
                .collect(),
        })
    }
}

/// Distinct words within `number_ahead` after and `number_behind` before
/// `position`, clipped at the sentence boundaries.
pub fn gather_context<S: AsRef<str>>(
    tokens: &[S],
    position: usize,
    number_ahead: usize,
    number_behind: usize,
) -> (BTreeSet<&str>, BTreeSet<&str>) {
    let ahead_end = (position + 1 + number_ahead).min(tokens.len());
    let ahead = tokens[(position + 1).min(tokens.len())..ahead_end]
        .iter()
        .map(AsRef::as_ref)
        .collect();
    let behind = tokens[position.saturating_sub(number_behind)..position]
        .iter()
        .map(AsRef::as_ref)
        .collect();
    (ahead, behind)
}

pub fn context_applies(rule: &ContextRule, ahead: &BTreeSet<&str>, behind: &BTreeSet<&str>) -> bool {
    let a = ahead.iter().filter(|w| rule.list_next.iter().any(|n| n == *w)).count();
    let b = behind.iter().filter(|w| rule.list_previous.iter().any(|p| p == *w)).count();
    ratio_reaches_half(a + b, ahead.len() + behind.len())
}

fn ratio_reaches_half(matched: usize, total: usize) -> bool {
    total > 0 && 2 * matched >= total
}

// Allocation-free equivalent of gather_context + context_applies.
fn applies_at<S: AsRef<str>>(rule: &ContextRule, tokens: &[S], position: usize) -> bool {
    fn scan<'a, S: AsRef<str> + 'a>(window: &'a [S], list: &[String]) -> (usize, usize) {
        let (mut distinct, mut matched) = (0, 0);
        for (i, w) in window.iter().enumerate() {
            let w = w.as_ref();
            if window[..i].iter().any(|p| p.as_ref() == w) {
                continue;
            }
            distinct += 1;
            if list.iter().any(|l| l == w) {
                matched += 1;
            }
        }
        (distinct, matched)
    }
    let ahead_end = (position + 1 + rule.number_ahead).min(tokens.len());
    let ahead = &tokens[(position + 1).min(tokens.len())..ahead_end];
    let behind = &tokens[position.saturating_sub(rule.number_behind)..position];
    let (sx, a) = scan(ahead, &rule.list_next);
    let (sy, b) = scan(behind, &rule.list_previous);
    ratio_reaches_half(a + b, sx + sy)
}

/// Classification of the gene's word at `position` of `tokens`.
pub fn resolve_word<S: AsRef<str>>(gene: &CagasaGene, tokens: &[S], position: usize) -> WordClass {
    if applies_at(&gene.rule, tokens, position) {
        gene.rule.context_class
    } else {
        gene.context_free
    }
}

/// Words seen near one unknown word in the training data, within
/// [`CONTEXT_CAP`] positions. Both lists are sorted and distinct.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Neighbors {
    pub preceding: Vec<String>,
    pub following: Vec<String>,
}

pub fn collect_neighbors(corpus: &Corpus, index: &UnknownWordIndex) -> Vec<Neighbors> {
    let mut sets = vec![(BTreeSet::new(), BTreeSet::new()); index.len()];
    for inst in &corpus.instances {
        let tokens = &inst.tokens;
        for (pos, t) in tokens.iter().enumerate() {
            let Some(g) = index.position_of(t) else { continue };
            let (ahead, behind) = gather_context(tokens, pos, CONTEXT_CAP, CONTEXT_CAP);
            sets[g].0.extend(behind.into_iter().map(str::to_string));
            sets[g].1.extend(ahead.into_iter().map(str::to_string));
        }
    }
    sets.into_iter()
        .map(|(p, f)| Neighbors {
            preceding: p.into_iter().collect(),
            following: f.into_iter().collect(),
        })
        .collect()
}

fn sample_list<R: Rng + ?Sized>(pool: &[String], capacity: usize, rng: &mut R) -> Vec<String> {
    pool.choose_multiple(rng, capacity.min(pool.len())).cloned().collect()
}

pub fn random_cagasa_gene<R: Rng + ?Sized>(word: &str, neighbors: &Neighbors, rng: &mut R) -> CagasaGene {
    let next_size = rng.gen_range(1..=CONTEXT_CAP);
    let previous_size = rng.gen_range(1..=CONTEXT_CAP);
    let list_next = sample_list(&neighbors.following, next_size, rng);
    let list_previous = sample_list(&neighbors.preceding, previous_size, rng);
    let number_ahead = rng.gen_range(1..=CONTEXT_CAP);
    let number_behind = rng.gen_range(1..=CONTEXT_CAP);
    let context_class = random_gene(rng);
    let context_free = random_gene(rng);
    CagasaGene {
        word: word.to_string(),
        rule: ContextRule {
            next_size,
            previous_size,
            list_next,
            list_previous,
            number_ahead,
            number_behind,
            context_class,
        },
        context_free,
    }
}

pub fn random_cagasa_chromosome<R: Rng + ?Sized>(
    index: &UnknownWordIndex,
    neighbors: &[Neighbors],
    rng: &mut R,
) -> CagasaChromosome {
    CagasaChromosome {
        genes: index
            .words()
            .iter()
            .zip(neighbors)
            .map(|(w, n)| random_cagasa_gene(w, n, rng))
            .collect(),
    }
}

/// The three mutation edits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edit {
    ContextFree,
    Context,
    ContextWord,
}

/// Applies `edit` to the gene at `position`. A context-word edit with no
/// fresh neighbour available on either side falls back to a context-free
/// edit, so the child always differs from the parent.
pub fn mutate_cagasa_with<R: Rng + ?Sized>(
    parent: &CagasaChromosome,
    neighbors: &[Neighbors],
    position: usize,
    edit: Edit,
    rng: &mut R,
) -> Result<CagasaChromosome> {
    if position >= parent.len() {
        return Err(Error::contract(format!(
            "mutation position {position} outside chromosome of length {}",
            parent.len()
        )));
    }
    let mut child = parent.clone();
    let gene = &mut child.genes[position];
    match edit {
        Edit::ContextFree => gene.context_free = different_gene(gene.context_free, rng),
        Edit::Context => gene.rule.context_class = different_gene(gene.rule.context_class, rng),
        Edit::ContextWord => {
            let near = neighbors.get(position).cloned().unwrap_or_default();
            if !replace_context_word(&mut gene.rule, &near, rng) {
                gene.context_free = different_gene(gene.context_free, rng);
            }
        }
    }
    Ok(child)
}

fn replace_context_word<R: Rng + ?Sized>(rule: &mut ContextRule, near: &Neighbors, rng: &mut R) -> bool {
    fn fresh<'a>(pool: &'a [String], list: &[String], capacity: usize) -> Vec<&'a String> {
        if capacity == 0 {
            return Vec::new();
        }
        pool.iter().filter(|w| !list.contains(w)).collect()
    }
    let next = fresh(&near.following, &rule.list_next, rule.next_size);
    let previous = fresh(&near.preceding, &rule.list_previous, rule.previous_size);
    let use_next = match (next.is_empty(), previous.is_empty()) {
        (true, true) => return false,
        (false, true) => true,
        (true, false) => false,
        (false, false) => rng.gen_bool(0.5),
    };
    let (pool, list) = if use_next {
        (next, &mut rule.list_next)
    } else {
        (previous, &mut rule.list_previous)
    };
    let word = (*pool.choose(rng).expect("non-empty")).clone();
    if list.is_empty() {
        list.push(word);
    } else {
        let slot = rng.gen_range(0..list.len());
        list[slot] = word;
    }
    true
}

/// Picks a gene and one of the three edits uniformly.
pub fn mutate_cagasa<R: Rng + ?Sized>(
    parent: &CagasaChromosome,
    neighbors: &[Neighbors],
    rng: &mut R,
) -> Result<CagasaChromosome> {
    if parent.is_empty() {
        return Err(Error::contract("cannot mutate an empty chromosome"));
    }
    let position = rng.gen_range(0..parent.len());
    let edit = [Edit::ContextFree, Edit::Context, Edit::ContextWord][rng.gen_range(0..3)];
    mutate_cagasa_with(parent, neighbors, position, edit, rng)
}

pub fn crossover_cagasa_at(
    first: &CagasaChromosome,
    second: &CagasaChromosome,
    position: usize,
) -> Result<(CagasaChromosome, CagasaChromosome)> {
    check_crossover_lengths(first.len(), second.len())?;
    if position >= first.len() {
        return Err(Error::contract(format!("crossover position {position} out of range")));
    }
    let (mut a, mut b) = (first.clone(), second.clone());
    std::mem::swap(&mut a.genes[position], &mut b.genes[position]);
    Ok((a, b))
}

/// Swaps whole genes at one uniform position.
pub fn crossover_cagasa<R: Rng + ?Sized>(
    first: &CagasaChromosome,
    second: &CagasaChromosome,
    rng: &mut R,
) -> Result<(CagasaChromosome, CagasaChromosome)> {
    check_crossover_lengths(first.len(), second.len())?;
    crossover_cagasa_at(first, second, rng.gen_range(0..first.len()))
}

fn classes<'a, S: AsRef<str>>(
    genes: &'a [CagasaGene],
    tokens: &'a [S],
    slots: &'a [Slot],
) -> impl Iterator<Item = WordClass> + 'a {
    slots.iter().enumerate().map(move |(pos, s)| match *s {
        Slot::Known(c) => c,
        Slot::Gene(g) => resolve_word(&genes[g], tokens, pos),
    })
}

pub struct CagasaProblem {
    instances: Vec<(Vec<String>, Vec<Slot>, Label)>,
    index: UnknownWordIndex,
    neighbors: Vec<Neighbors>,
    semantics: Semantics,
}

impl CagasaProblem {
    pub fn new(corpus: &Corpus, lexicon: &SeedLexicon, index: &UnknownWordIndex, semantics: Semantics) -> Self {
        CagasaProblem {
            instances: corpus
                .instances
                .iter()
                .map(|i| (i.tokens.clone(), compile_tokens(&i.tokens, lexicon, index), i.label))
                .collect(),
            index: index.clone(),
            neighbors: collect_neighbors(corpus, index),
            semantics,
        }
    }

    pub fn neighbors(&self) -> &[Neighbors] {
        &self.neighbors
    }

    pub fn fitness(&self, chromosome: &CagasaChromosome) -> Result<usize> {
        if chromosome.len() != self.index.len() {
            return Err(Error::contract(format!(
                "chromosome has {} genes but {} unknown words are indexed",
                chromosome.len(),
                self.index.len()
            )));
        }
        Ok(self.count_correct(chromosome))
    }

    fn count_correct(&self, chromosome: &CagasaChromosome) -> usize {
        self.instances
            .iter()
            .filter(|(tokens, slots, label)| {
                let score = evaluate(classes(&chromosome.genes, tokens, slots), self.semantics);
                classify_score(score).matches(*label)
            })
            .count()
    }
}

impl Problem for CagasaProblem {
    type Genome = CagasaChromosome;

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> CagasaChromosome {
        random_cagasa_chromosome(&self.index, &self.neighbors, rng)
    }

    fn fitness(&self, genome: &CagasaChromosome) -> usize {
        self.count_correct(genome)
    }

    fn mutate<R: Rng + ?Sized>(&self, parent: &CagasaChromosome, rng: &mut R) -> CagasaChromosome {
        if parent.is_empty() {
            return parent.clone();
        }
        mutate_cagasa(parent, &self.neighbors, rng).expect("non-empty chromosome")
    }

    fn crossover<R: Rng + ?Sized>(
        &self,
        first: &CagasaChromosome,
        second: &CagasaChromosome,
        rng: &mut R,
    ) -> (CagasaChromosome, CagasaChromosome) {
        if first.is_empty() {
            return (first.clone(), second.clone());
        }
        crossover_cagasa(first, second, rng).expect("equal non-empty lengths")
    }

    fn max_fitness(&self) -> Option<usize> {
        Some(self.instances.len())
    }
}

/// Sentence score; words outside the dictionaries and the index are neutral.
pub fn score_cagasa<S: AsRef<str>>(
    chromosome: &CagasaChromosome,
    tokens: &[S],
    index: &UnknownWordIndex,
    lexicon: &SeedLexicon,
    semantics: Semantics,
) -> f64 {
    let slots = compile_tokens(tokens, lexicon, index);
    evaluate(classes(&chromosome.genes, tokens, &slots), semantics)
}

pub fn predict_cagasa<S: AsRef<str>>(
    chromosome: &CagasaChromosome,
    tokens: &[S],
    index: &UnknownWordIndex,
    lexicon: &SeedLexicon,
    semantics: Semantics,
) -> Polarity {
    classify_score(score_cagasa(chromosome, tokens, index, lexicon, semantics))
}
