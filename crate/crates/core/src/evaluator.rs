//! Left-to-right arithmetic scoring of a classified sentence.

use std::fmt;
use std::str::FromStr;

use crate::corpus::Label;
use crate::lexicon::{Kind, WordClass};

/// How amplifiers are applied.
///
/// `Literal` never resets the amplifier accumulator and, when it is
/// non-zero at the end, adds it to the score.
/// `Prose` resets the accumulator after it multiplies a sentiment word and
/// only adds it at the end when the last word is an amplifier.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Semantics {
    #[default]
    Literal,
    Prose,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Literal => "literal",
            Semantics::Prose => "prose",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(Semantics::Literal),
            "prose" => Ok(Semantics::Prose),
            other => Err(format!("unknown semantics `{other}` (expected literal|prose)")),
        }
    }
}

/// Outcome of classifying a score.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Tie,
}

impl Polarity {
    /// A tie never matches.
    pub fn matches(self, label: Label) -> bool {
        matches!(
            (self, label),
            (Polarity::Positive, Label::Positive) | (Polarity::Negative, Label::Negative)
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Tie => "tie",
        }
    }
}

/// Scores an already-resolved sequence of classifications.
pub fn evaluate<I>(classes: I, semantics: Semantics) -> f64
where
    I: IntoIterator<Item = WordClass>,
{
    let mut score = 0.0;
    let mut amplifier = 0.0;
    let mut last_was_amplifier = false;
    for class in classes {
        match class.kind {
            Kind::Amplifier => {
                amplifier += class.value;
                last_was_amplifier = true;
            }
            Kind::Sentiment => {
                if amplifier != 0.0 {
                    score += amplifier * class.value;
                } else {
                    score += class.value;
                }
                if semantics == Semantics::Prose {
                    amplifier = 0.0;
                }
                last_was_amplifier = false;
            }
        }
    }
    match semantics {
        Semantics::Literal if amplifier != 0.0 => score += amplifier,
        Semantics::Prose if last_was_amplifier => score += amplifier,
        _ => {}
    }
    score
}

/// Scores `tokens`, asking `resolve` for the classification of the word at
/// each position.
pub fn evaluate_sentence<S, F>(tokens: &[S], mut resolve: F, semantics: Semantics) -> f64
where
    S: AsRef<str>,
    F: FnMut(usize, &str) -> WordClass,
{
    evaluate(
        tokens.iter().enumerate().map(|(i, t)| resolve(i, t.as_ref())),
        semantics,
    )
}

pub fn classify_score(score: f64) -> Polarity {
    if score > 0.0 {
        Polarity::Positive
    } else if score < 0.0 {
        Polarity::Negative
    } else {
        Polarity::Tie
    }
}
