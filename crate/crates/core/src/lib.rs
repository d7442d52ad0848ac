//! Sentiment lexicon induction with genetic algorithms.
//!
//! Words in labelled text are either known (seed dictionaries) or unknown.
//! A genetic algorithm assigns each unknown word a classification-value
//! pair, sentiment or amplifier, so that left-to-right arithmetic scoring of
//! each text reproduces its label as often as possible. The context-aware
//! variant lets a word switch to a second classification depending on its
//! neighbours.

pub mod cagasa;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod evaluator;
pub mod experiments;
pub mod ga;
pub mod gasa;
pub mod lexicon;
pub mod model;

pub use corpus::{Corpus, Instance, Label, UnknownWordIndex};
pub use error::{Error, Result};
pub use evaluator::{Polarity, Semantics};
pub use ga::{GaConfig, RunStats};
pub use lexicon::{Dictionary, Kind, SeedLexicon, WordClass};
pub use model::{Algorithm, Model};
