/* SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 litpred contributors
 *
 * C interface of the litpred shared library. All heavy objects live behind
 * opaque handles; every function returns a status code and leaves a
 * human-readable message in thread-local storage on failure.
 */

#ifndef LITPRED_H
#define LITPRED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LITPRED_API __declspec(dllexport)
#else
#define LITPRED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. */
#define LITPRED_OK 0
#define LITPRED_ERR_INVALID_ARGUMENT 1
#define LITPRED_ERR_IO 2
#define LITPRED_ERR_VALIDATION 3
#define LITPRED_ERR_INTERNAL 4

LITPRED_API const char* litpred_version(void);

/* Message describing the most recent failure on this thread. */
LITPRED_API const char* litpred_last_error(void);

/* Frees a string returned through an out-parameter. */
LITPRED_API void litpred_string_free(char* s);

/* ------------------------------------------------------------------------ */
/* Corpus handle                                                             */
/* ------------------------------------------------------------------------ */

typedef struct litpred_corpus litpred_corpus;

/* generator_config_json: {"n_cases":..., "outcome_mix":[...], "seed":..., ...} */
LITPRED_API int litpred_corpus_generate(const char* generator_config_json,
                                        litpred_corpus** out);
LITPRED_API int litpred_corpus_open(const char* path, litpred_corpus** out);
LITPRED_API int litpred_corpus_save(const litpred_corpus* corpus, const char* path);
LITPRED_API int litpred_corpus_counts(const litpred_corpus* corpus, int64_t* n_cases,
                                      int64_t* n_documents);
/* Bundles the validation report as JSON; free with litpred_string_free. */
LITPRED_API int litpred_corpus_validate(const litpred_corpus* corpus, char** report_json,
                                        int64_t* n_violations);
LITPRED_API void litpred_corpus_free(litpred_corpus* corpus);

/* ------------------------------------------------------------------------ */
/* Model handle                                                              */
/* ------------------------------------------------------------------------ */

typedef struct litpred_model litpred_model;

LITPRED_API int litpred_model_open(const char* path, litpred_model** out);
/* features: dense encoded row of length n_features (schema order). */
LITPRED_API int litpred_model_predict(const litpred_model* model, const double* features,
                                      size_t n_features, double out_probs[3]);
LITPRED_API void litpred_model_free(litpred_model* model);

/* ------------------------------------------------------------------------ */
/* Pure helpers                                                              */
/* ------------------------------------------------------------------------ */

/* Shannon entropy in nats of a 3-class distribution. */
LITPRED_API int litpred_entropy(const double probs[3], double* out);
LITPRED_API int litpred_one_minus_max(const double probs[3], double* out);

/* ------------------------------------------------------------------------ */
/* Pipeline commands (config_json: see README for the schema)               */
/* ------------------------------------------------------------------------ */

LITPRED_API int litpred_cmd_generate(const char* config_json);
LITPRED_API int litpred_cmd_ingest(const char* config_json);
/* Returns LITPRED_ERR_VALIDATION when the corpus has violations. */
LITPRED_API int litpred_cmd_validate(const char* config_json, int64_t* n_violations);
LITPRED_API int litpred_cmd_featurize(const char* config_json);
LITPRED_API int litpred_cmd_train(const char* config_json);
LITPRED_API int litpred_cmd_report(const char* config_json);
LITPRED_API int litpred_cmd_ablate(const char* config_json);
LITPRED_API int litpred_cmd_regress(const char* config_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LITPRED_H */
