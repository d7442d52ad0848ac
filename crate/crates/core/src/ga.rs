//! Generational genetic algorithm with tournament selection.
//!
//! The engine knows nothing about sentiment. A [`Problem`] supplies random
//! genomes, a fitness count and the two operators; [`run_ga`] does the rest.
//!
//! All randomness comes from one ChaCha8 stream seeded by
//! [`GaConfig::seed`], drawn in a fixed order: initial genomes first, then
//! per offspring step the operator coin, the tournament draws and the
//! operator's own draws. Fitness evaluation happens in parallel between
//! those sequential phases and never touches the stream, so results do not
//! depend on the number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub type GaRng = ChaCha8Rng;

/// Hyperparameters. Defaults are population 200, tournament 7, 500
/// generations, crossover 60% and mutation 40%.
#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub tournament_size: usize,
    pub max_generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 200,
            tournament_size: 7,
            max_generations: 500,
            crossover_rate: 0.60,
            mutation_rate: 0.40,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::Config("population size must be positive".into()));
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return Err(Error::Config(format!(
                "tournament size must lie in 1..={}, got {}",
                self.population_size, self.tournament_size
            )));
        }
        for (name, rate) in [("crossover", self.crossover_rate), ("mutation", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::Config(format!("{name} rate {rate} is not a probability")));
            }
        }
        if (self.crossover_rate + self.mutation_rate - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "crossover rate {} and mutation rate {} must sum to 1",
                self.crossover_rate, self.mutation_rate
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GaConfig { seed, ..self.clone() }
    }
}

/// What the engine needs to know about a search problem.
///
/// `fitness` must be a pure function of the genome; it is called from
/// worker threads.
pub trait Problem: Sync {
    type Genome: Clone + Send + Sync;

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Genome;
    fn fitness(&self, genome: &Self::Genome) -> usize;
    fn mutate<R: Rng + ?Sized>(&self, parent: &Self::Genome, rng: &mut R) -> Self::Genome;
    fn crossover<R: Rng + ?Sized>(
        &self,
        first: &Self::Genome,
        second: &Self::Genome,
        rng: &mut R,
    ) -> (Self::Genome, Self::Genome);

    /// Best attainable fitness, if known. Reaching it stops the run.
    fn max_fitness(&self) -> Option<usize> {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated<G> {
    pub genome: G,
    pub fitness: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    pub generations_executed: usize,
    /// Best-ever fitness after each generation, starting with the initial
    /// population.
    pub best_fitness_per_generation: Vec<usize>,
    pub terminated_early: bool,
}

/// Index of the winner among the population members at `draws`. Ties go to
/// a uniformly random tied entry.
pub fn tournament_from_draws<G, R: Rng + ?Sized>(
    population: &[Evaluated<G>],
    draws: impl IntoIterator<Item = usize>,
    rng: &mut R,
) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut tied = 0u32;
    for idx in draws {
        let f = population[idx].fitness;
        match best {
            Some(b) if f < population[b].fitness => {}
            Some(b) if f == population[b].fitness => {
                // reservoir sampling over the tied entries
                tied += 1;
                if rng.gen_range(0..tied) == 0 {
                    best = Some(idx);
                }
            }
            _ => {
                best = Some(idx);
                tied = 1;
            }
        }
    }
    best
}

/// Draws `k` members with replacement and returns the index of the fittest.
pub fn tournament_index<G, R: Rng + ?Sized>(population: &[Evaluated<G>], k: usize, rng: &mut R) -> Result<usize> {
    if population.is_empty() {
        return Err(Error::contract("tournament over an empty population"));
    }
    if k == 0 {
        return Err(Error::contract("tournament size must be at least 1"));
    }
    let n = population.len();
    let draws: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
    Ok(tournament_from_draws(population, draws, rng).expect("k >= 1"))
}

pub fn tournament_select<'a, G, R: Rng + ?Sized>(
    population: &'a [Evaluated<G>],
    k: usize,
    rng: &mut R,
) -> Result<&'a Evaluated<G>> {
    tournament_index(population, k, rng).map(|i| &population[i])
}

fn evaluate_all<P: Problem>(problem: &P, genomes: Vec<P::Genome>) -> Vec<Evaluated<P::Genome>> {
    genomes
        .into_par_iter()
        .map(|genome| {
            let fitness = problem.fitness(&genome);
            Evaluated { genome, fitness }
        })
        .collect()
}

/// Runs the generational loop and returns the best individual ever seen.
///
/// Each generation is built from scratch: with probability
/// `crossover_rate` two tournament winners are crossed and both children
/// kept (the second is dropped if only one slot is left), otherwise one
/// winner is mutated. The offspring replace the parents wholesale.
pub fn run_ga<P: Problem>(problem: &P, config: &GaConfig) -> Result<(Evaluated<P::Genome>, RunStats)> {
    config.validate()?;
    let pop_size = config.population_size;
    let mut rng = GaRng::seed_from_u64(config.seed);

    let initial = (0..pop_size).map(|_| problem.random_genome(&mut rng)).collect();
    let mut population = evaluate_all(problem, initial);

    let mut best = fittest(&population).clone();
    let target = problem.max_fitness();
    let reached = |f: usize| target.is_some_and(|t| f >= t);

    let mut stats = RunStats {
        best_fitness_per_generation: vec![best.fitness],
        ..RunStats::default()
    };
    stats.terminated_early = reached(best.fitness);

    while !stats.terminated_early && stats.generations_executed < config.max_generations {
        let mut offspring = Vec::with_capacity(pop_size);
        while offspring.len() < pop_size {
            if rng.gen_bool(config.crossover_rate) {
                let a = tournament_index(&population, config.tournament_size, &mut rng)?;
                let b = tournament_index(&population, config.tournament_size, &mut rng)?;
                let (c1, c2) = problem.crossover(&population[a].genome, &population[b].genome, &mut rng);
                offspring.push(c1);
                if offspring.len() < pop_size {
                    offspring.push(c2);
                }
            } else {
                let a = tournament_index(&population, config.tournament_size, &mut rng)?;
                offspring.push(problem.mutate(&population[a].genome, &mut rng));
            }
        }
        population = evaluate_all(problem, offspring);
        stats.generations_executed += 1;

        let gen_best = fittest(&population);
        if gen_best.fitness > best.fitness {
            best = gen_best.clone();
        }
        stats.best_fitness_per_generation.push(best.fitness);
        stats.terminated_early = reached(best.fitness);
    }
    Ok((best, stats))
}

/// First member with maximal fitness.
fn fittest<G>(population: &[Evaluated<G>]) -> &Evaluated<G> {
    let mut best = &population[0];
    for e in &population[1..] {
        if e.fitness > best.fitness {
            best = e;
        }
    }
    best
}
