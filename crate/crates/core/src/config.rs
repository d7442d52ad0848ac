//! `key=value` run configuration files.
//!
//! Keys mirror the command-line flags: `pop`, `tournament`, `generations`,
//! `crossover-rate`, `mutation-rate`, `seed`, `semantics`, `algo` and
//! `tie-as`. Blank lines and `#` comments are ignored. Flags given on the
//! command line win over the file.

use std::io::BufRead;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::evaluator::Semantics;
use crate::ga::GaConfig;
use crate::model::Algorithm;

/// Settings that may come from a file, a flag, or a default.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub pop: Option<usize>,
    pub tournament: Option<usize>,
    pub generations: Option<usize>,
    pub crossover_rate: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub seed: Option<u64>,
    pub semantics: Option<Semantics>,
    pub algo: Option<Algorithm>,
    pub tie_as: Option<Label>,
}

impl Overrides {
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut out = Overrides::default();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let n = i + 1;
            let (key, value) = t
                .split_once('=')
                .ok_or_else(|| Error::parse("config", n, "expected `key=value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |m: String| Error::parse("config", n, m);
            fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
                v.parse().map_err(|_| format!("bad number `{v}`"))
            }
            match key {
                "pop" => out.pop = Some(num(value).map_err(bad)?),
                "tournament" => out.tournament = Some(num(value).map_err(bad)?),
                "generations" => out.generations = Some(num(value).map_err(bad)?),
                "crossover-rate" => out.crossover_rate = Some(num(value).map_err(bad)?),
                "mutation-rate" => out.mutation_rate = Some(num(value).map_err(bad)?),
                "seed" => out.seed = Some(num(value).map_err(bad)?),
                "semantics" => out.semantics = Some(value.parse().map_err(bad)?),
                "algo" => out.algo = Some(value.parse().map_err(bad)?),
                "tie-as" => out.tie_as = Some(value.parse().map_err(bad)?),
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(out)
    }

    /// `self` wins wherever it is set.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            pop: self.pop.or(base.pop),
            tournament: self.tournament.or(base.tournament),
            generations: self.generations.or(base.generations),
            crossover_rate: self.crossover_rate.or(base.crossover_rate),
            mutation_rate: self.mutation_rate.or(base.mutation_rate),
            seed: self.seed.or(base.seed),
            semantics: self.semantics.or(base.semantics),
            algo: self.algo.or(base.algo),
            tie_as: self.tie_as.or(base.tie_as),
        }
    }

    /// GA settings over the defaults. When only one operator rate is given
    /// the other is its complement.
    pub fn ga_config(&self) -> Result<GaConfig> {
        let d = GaConfig::default();
        let (crossover_rate, mutation_rate) = match (self.crossover_rate, self.mutation_rate) {
            (Some(c), Some(m)) => (c, m),
            (Some(c), None) => (c, 1.0 - c),
            (None, Some(m)) => (1.0 - m, m),
            (None, None) => (d.crossover_rate, d.mutation_rate),
        };
        let config = GaConfig {
            population_size: self.pop.unwrap_or(d.population_size),
            tournament_size: self.tournament.unwrap_or(d.tournament_size),
            max_generations: self.generations.unwrap_or(d.max_generations),
            crossover_rate,
            mutation_rate,
            seed: self.seed.unwrap_or(d.seed),
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn parse_and_merge() {
        let file = Overrides::parse(Cursor::new("# run\npop = 50\nseed=3\nsemantics=prose\ncrossover-rate=0.7\n")).unwrap();
        let flags = Overrides {
            seed: Some(9),
            ..Overrides::default()
        };
        let merged = flags.over(file);
        let cfg = merged.ga_config().unwrap();
        assert_eq!(cfg.population_size, 50);
        assert_eq!(cfg.seed, 9);
        assert!((cfg.mutation_rate - 0.3).abs() < 1e-12);
        assert_eq!(merged.semantics, Some(Semantics::Prose));
    }

    #[test]
    fn defaults() {
        assert_eq!(Overrides::default().ga_config().unwrap(), GaConfig::default());
    }

    #[test]
    fn errors() {
        assert!(Overrides::parse(Cursor::new("pop\n")).is_err());
        assert!(Overrides::parse(Cursor::new("colour=blue\n")).is_err());
        assert!(Overrides::parse(Cursor::new("pop=lots\n")).is_err());
        let bad = Overrides {
            crossover_rate: Some(0.5),
            mutation_rate: Some(0.6),
            ..Overrides::default()
        };
        assert!(bad.ga_config().is_err());
    }
}
