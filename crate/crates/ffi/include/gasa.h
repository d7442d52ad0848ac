#ifndef GASA_H
#define GASA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define GASA_OK 0

#define GASA_ERR_NULL 1

#define GASA_ERR_UTF8 2

#define GASA_ERR_IO 3

#define GASA_ERR_PARSE 4

#define GASA_ERR_INVALID 5

#define GASA_ERR_PANIC 6

#define GASA_KIND_SENTIMENT 0

#define GASA_KIND_AMPLIFIER 1

#define GASA_SEMANTICS_LITERAL 0

#define GASA_SEMANTICS_PROSE 1

#define GASA_ALGO_GASA 0

#define GASA_ALGO_CAGASA 1

#define GASA_LABEL_NEGATIVE -1

#define GASA_LABEL_TIE 0

#define GASA_LABEL_POSITIVE 1

// A trained model.
typedef struct GasaModel GasaModel;

// GA settings. Obtain defaults from `gasa_config_default`.
typedef struct GasaConfig {
  uintptr_t population_size;
  uintptr_t tournament_size;
  uintptr_t max_generations;
  double crossover_rate;
  double mutation_rate;
  uint64_t seed;
} GasaConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into this library on the
// same thread.
const char *gasa_last_error_message(void);

struct GasaConfig gasa_config_default(void);

// Reads a model file into `*out`.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a writable pointer.
int32_t gasa_model_load(const char *path, struct GasaModel **out);

// Writes `model` to `path`.
//
// # Safety
// `model` must come from this library and `path` be NUL-terminated.
int32_t gasa_model_save(const struct GasaModel *model, const char *path);

// Releases a model. Null is ignored.
//
// # Safety
// `model` must come from this library and not be used afterwards.
void gasa_model_free(struct GasaModel *model);

// Scores `text` and writes one of the `GASA_LABEL_*` codes to `*label`.
// Either output pointer may be null.
//
// # Safety
// `model` must come from this library and `text` be NUL-terminated.
int32_t gasa_model_predict(const struct GasaModel *model,
                           const char *text,
                           int32_t *label,
                           double *score);

// Scores a sequence of classification-value pairs. `kinds[i]` is a
// `GASA_KIND_*` code.
//
// # Safety
// `kinds` and `values` must each hold `len` elements (or be null when
// `len` is 0); `out` must be writable.
int32_t gasa_evaluate(const int32_t *kinds,
                      const double *values,
                      uintptr_t len,
                      int32_t semantics,
                      double *out);

// Sign of a score as a `GASA_LABEL_*` code.
int32_t gasa_classify_score(double score);

// Trains a model on a labeled corpus file.
//
// `sentiment_dict` (`word<TAB>positive|negative` lines) and
// `amplifier_dict` (lexicon records) may be null; the amplifier seeds
// then default to `not` and `never` at -1. `config` may be null for the
// defaults.
//
// # Safety
// Strings must be NUL-terminated; `config` must be null or valid; `out`
// must be writable.
int32_t gasa_train_file(const char *corpus_path,
                        const char *sentiment_dict,
                        const char *amplifier_dict,
                        const struct GasaConfig *config,
                        int32_t semantics,
                        int32_t algorithm,
                        struct GasaModel **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GASA_H */
