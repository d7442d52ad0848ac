//! C interface to `gasa-core`.
//!
//! Every fallible function returns one of the `GASA_*` status codes. On a
//! non-zero code, `gasa_last_error_message` describes the failure for the
//! calling thread. Models are opaque handles released with
//! `gasa_model_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gasa_core::corpus::load_corpus;
use gasa_core::evaluator::{classify_score, evaluate};
use gasa_core::lexicon::{
    dictionary_from_records, load_sentiment_dictionary, parse_lexicon, seed_amplifier_dictionary, Dictionary,
    Kind, SeedLexicon, SentimentSource, WordClass,
};
use gasa_core::{Algorithm, Error, GaConfig, Model, Polarity, Semantics};

pub const GASA_OK: i32 = 0;
pub const GASA_ERR_NULL: i32 = 1;
pub const GASA_ERR_UTF8: i32 = 2;
pub const GASA_ERR_IO: i32 = 3;
pub const GASA_ERR_PARSE: i32 = 4;
pub const GASA_ERR_INVALID: i32 = 5;
pub const GASA_ERR_PANIC: i32 = 6;

pub const GASA_KIND_SENTIMENT: i32 = 0;
pub const GASA_KIND_AMPLIFIER: i32 = 1;

pub const GASA_SEMANTICS_LITERAL: i32 = 0;
pub const GASA_SEMANTICS_PROSE: i32 = 1;

pub const GASA_ALGO_GASA: i32 = 0;
pub const GASA_ALGO_CAGASA: i32 = 1;

pub const GASA_LABEL_NEGATIVE: i32 = -1;
pub const GASA_LABEL_TIE: i32 = 0;
pub const GASA_LABEL_POSITIVE: i32 = 1;

/// A trained model.
pub struct GasaModel {
    inner: Model,
}

/// GA settings. Obtain defaults from `gasa_config_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GasaConfig {
    pub population_size: usize,
    pub tournament_size: usize,
    pub max_generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub seed: u64,
}

impl From<GasaConfig> for GaConfig {
    fn from(c: GasaConfig) -> Self {
        GaConfig {
            population_size: c.population_size,
            tournament_size: c.tournament_size,
            max_generations: c.max_generations,
            crossover_rate: c.crossover_rate,
            mutation_rate: c.mutation_rate,
            seed: c.seed,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => GASA_ERR_IO,
            Error::Parse { .. } | Error::Conflict(_) | Error::Overlap(_) => GASA_ERR_PARSE,
            _ => GASA_ERR_INVALID,
        };
        Failure(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(GASA_ERR_IO, e.to_string())
    }
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GASA_OK
        }
        Ok(Err(Failure(code, message))) => {
            set_error(&message);
            code
        }
        Err(_) => {
            set_error("internal panic");
            GASA_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(GASA_ERR_NULL, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(GASA_ERR_UTF8, format!("{what} is not valid UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

fn semantics_from(code: i32) -> Result<Semantics, Failure> {
    match code {
        GASA_SEMANTICS_LITERAL => Ok(Semantics::Literal),
        GASA_SEMANTICS_PROSE => Ok(Semantics::Prose),
        other => Err(Failure(GASA_ERR_INVALID, format!("unknown semantics code {other}"))),
    }
}

fn open(path: &str) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure(GASA_ERR_IO, format!("{path}: {e}")))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn gasa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn gasa_config_default() -> GasaConfig {
    let d = GaConfig::default();
    GasaConfig {
        population_size: d.population_size,
        tournament_size: d.tournament_size,
        max_generations: d.max_generations,
        crossover_rate: d.crossover_rate,
        mutation_rate: d.mutation_rate,
        seed: d.seed,
    }
}

/// Reads a model file into `*out`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gasa_model_load(path: *const c_char, out: *mut *mut GasaModel) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(Failure(GASA_ERR_NULL, "out is null".into()));
        }
        *out = ptr::null_mut();
        let path = str_arg(path, "path")?;
        let inner = Model::read(open(path)?)?;
        *out = Box::into_raw(Box::new(GasaModel { inner }));
        Ok(())
    })
}

/// Writes `model` to `path`.
///
/// # Safety
/// `model` must come from this library and `path` be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gasa_model_save(model: *const GasaModel, path: *const c_char) -> i32 {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| Failure(GASA_ERR_NULL, "model is null".into()))?;
        let path = str_arg(path, "path")?;
        let mut sink = BufWriter::new(File::create(path).map_err(|e| Failure(GASA_ERR_IO, format!("{path}: {e}")))?);
        model.inner.write(&mut sink)?;
        sink.flush()?;
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gasa_model_free(model: *mut GasaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Scores `text` and writes one of the `GASA_LABEL_*` codes to `*label`.
/// Either output pointer may be null.
///
/// # Safety
/// `model` must come from this library and `text` be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gasa_model_predict(
    model: *const GasaModel,
    text: *const c_char,
    label: *mut i32,
    score: *mut f64,
) -> i32 {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| Failure(GASA_ERR_NULL, "model is null".into()))?;
        let text = str_arg(text, "text")?;
        let (s, polarity) = model.inner.predict_text(text);
        if let Some(l) = label.as_mut() {
            *l = match polarity {
                Polarity::Positive => GASA_LABEL_POSITIVE,
                Polarity::Negative => GASA_LABEL_NEGATIVE,
                Polarity::Tie => GASA_LABEL_TIE,
            };
        }
        if let Some(out) = score.as_mut() {
            *out = s;
        }
        Ok(())
    })
}

/// Scores a sequence of classification-value pairs. `kinds[i]` is a
/// `GASA_KIND_*` code.
///
/// # Safety
/// `kinds` and `values` must each hold `len` elements (or be null when
/// `len` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gasa_evaluate(
    kinds: *const i32,
    values: *const f64,
    len: usize,
    semantics: i32,
    out: *mut f64,
) -> i32 {
    guard(|| {
        if out.is_null() || (len > 0 && (kinds.is_null() || values.is_null())) {
            return Err(Failure(GASA_ERR_NULL, "null argument".into()));
        }
        let semantics = semantics_from(semantics)?;
        let (kinds, values) = if len == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(kinds, len), std::slice::from_raw_parts(values, len))
        };
        let mut classes = Vec::with_capacity(len);
        for (&k, &v) in kinds.iter().zip(values) {
            classes.push(match k {
                GASA_KIND_SENTIMENT => WordClass::sentiment(v),
                GASA_KIND_AMPLIFIER => WordClass::amplifier(v),
                other => return Err(Failure(GASA_ERR_INVALID, format!("unknown kind code {other}"))),
            });
        }
        *out = evaluate(classes, semantics);
        Ok(())
    })
}

/// Sign of a score as a `GASA_LABEL_*` code.
#[no_mangle]
pub extern "C" fn gasa_classify_score(score: f64) -> i32 {
    match classify_score(score) {
        Polarity::Positive => GASA_LABEL_POSITIVE,
        Polarity::Negative => GASA_LABEL_NEGATIVE,
        Polarity::Tie => GASA_LABEL_TIE,
    }
}

/// Trains a model on a labeled corpus file.
///
/// `sentiment_dict` (`word<TAB>positive|negative` lines) and
/// `amplifier_dict` (lexicon records) may be null; the amplifier seeds
/// then default to `not` and `never` at -1. `config` may be null for the
/// defaults.
///
/// # Safety
/// Strings must be NUL-terminated; `config` must be null or valid; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn gasa_train_file(
    corpus_path: *const c_char,
    sentiment_dict: *const c_char,
    amplifier_dict: *const c_char,
    config: *const GasaConfig,
    semantics: i32,
    algorithm: i32,
    out: *mut *mut GasaModel,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(Failure(GASA_ERR_NULL, "out is null".into()));
        }
        *out = ptr::null_mut();
        let corpus_path = str_arg(corpus_path, "corpus_path")?;
        let sentiment_dict = opt_str_arg(sentiment_dict, "sentiment_dict")?;
        let amplifier_dict = opt_str_arg(amplifier_dict, "amplifier_dict")?;
        let config: GaConfig = match config.as_ref() {
            Some(c) => (*c).into(),
            None => GaConfig::default(),
        };
        let semantics = semantics_from(semantics)?;
        let algorithm = match algorithm {
            GASA_ALGO_GASA => Algorithm::Gasa,
            GASA_ALGO_CAGASA => Algorithm::Cagasa,
            other => return Err(Failure(GASA_ERR_INVALID, format!("unknown algorithm code {other}"))),
        };

        let sentiment = match sentiment_dict {
            Some(p) => load_sentiment_dictionary(SentimentSource::Labeled(open(p)?))?,
            None => Dictionary::new(Kind::Sentiment),
        };
        let amplifier = match amplifier_dict {
            Some(p) => dictionary_from_records(Kind::Amplifier, &parse_lexicon(open(p)?)?)?,
            None => seed_amplifier_dictionary(),
        };
        let lexicon = SeedLexicon::new(sentiment, amplifier)?;
        let (corpus, _) = load_corpus(open(corpus_path)?, corpus_path)?;
        let (inner, _) = Model::train(&corpus, &lexicon, &config, semantics, algorithm)?;
        *out = Box::into_raw(Box::new(GasaModel { inner }));
        Ok(())
    })
}
