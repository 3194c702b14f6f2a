/* Event-argument extraction as entailment: C interface.
 *
 * Every function returns an eae_status. On failure the message is
 * available from eae_last_error() on the calling thread until the next
 * call on that thread. Strings returned through char** are owned by the
 * caller and released with eae_string_free(). Handles are released with
 * their matching *_free function; passing NULL to a free function is a
 * no-op. Handles are safe for concurrent read-only use.
 */
#ifndef EAE_EAE_H_
#define EAE_EAE_H_

#include <stddef.h>

#if defined(_WIN32)
#define EAE_API __declspec(dllexport)
#else
#define EAE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eae_status {
  EAE_OK = 0,
  EAE_ERR_INVALID_ARGUMENT = 1,
  EAE_ERR_IO = 2,
  EAE_ERR_PARSE = 3,
  EAE_ERR_VALIDATION = 4,
  EAE_ERR_UNDEFINED_METRIC = 5,
  EAE_ERR_TRANSPORT = 6,
  EAE_ERR_PROTOCOL = 7,
  EAE_ERR_CONFIG = 8,
  EAE_ERR_UNSUPPORTED = 9,
  EAE_ERR_INTERNAL = 10
} eae_status;

typedef struct eae_corpus eae_corpus;
typedef struct eae_templates eae_templates;
typedef struct eae_dataset eae_dataset;
typedef struct eae_model eae_model;
typedef struct eae_provider eae_provider;

typedef void (*eae_log_fn)(const char* message, void* user);

EAE_API const char* eae_version(void);
EAE_API const char* eae_last_error(void);
EAE_API const char* eae_status_name(eae_status status);
EAE_API void eae_string_free(char* s);

/* Built-in named run configurations as a JSON object. */
EAE_API eae_status eae_presets_json(char** out_json);
EAE_API eae_status eae_file_sha256(const char* path, char** out_hex);

/* ---- corpus ---- */

/* format: "jsonl" or "bio". relations_path is the BIO relation sidecar
 * and may be NULL. */
EAE_API eae_status eae_corpus_load(const char* path, const char* format,
                                   const char* relations_path,
                                   eae_corpus** out);
EAE_API eae_status eae_corpus_write(const eae_corpus* corpus,
                                    const char* path);
EAE_API eae_status eae_corpus_stats_json(const eae_corpus* corpus,
                                         char** out_json);
EAE_API size_t eae_corpus_size(const eae_corpus* corpus);
EAE_API void eae_corpus_free(eae_corpus* corpus);

/* ---- templates ---- */

EAE_API eae_status eae_templates_default(eae_templates** out);
EAE_API eae_status eae_templates_load(const char* path, eae_templates** out);
/* Copy whose test template is `index` ("t1".."t4") for every relation. */
EAE_API eae_status eae_templates_with_test(const eae_templates* templates,
                                           const char* index,
                                           eae_templates** out);
EAE_API void eae_templates_free(eae_templates* templates);

/* ---- NLI dataset ---- */

/* split_json: {"train_fraction": 0.7, "seed": 42, "test_only": false};
 * missing keys take those defaults, NULL means all defaults. */
EAE_API eae_status eae_dataset_build(const eae_corpus* corpus,
                                     const eae_templates* templates,
                                     const char* split_json,
                                     eae_dataset** out);
EAE_API eae_status eae_dataset_load(const char* path, eae_dataset** out);
EAE_API eae_status eae_dataset_write(const eae_dataset* dataset,
                                     const char* path);
EAE_API eae_status eae_dataset_stats_json(const eae_dataset* dataset,
                                          char** out_json);
/* split: "train", "test" or NULL for all pairs. */
EAE_API size_t eae_dataset_size(const eae_dataset* dataset, const char* split);
EAE_API void eae_dataset_free(eae_dataset* dataset);

/* ---- models ---- */

/* Trains k folds on the dataset's train split. config_json:
 * {"train": {folds, learning_rate, weight_decay, epochs, batch_size, seed,
 *  threshold, encoder: {...}}, "loss": {w_pos, w_neg, tau, use_nce,
 *  nce_mode}}. When out_dir is not NULL each fold's checkpoint goes to
 * out_dir/fold_<k> and the selected one to out_dir/best. The report lists
 * per-fold epochs and validation metrics plus best_fold. */
EAE_API eae_status eae_train_kfold(const eae_dataset* dataset,
                                   const char* config_json,
                                   const char* out_dir, eae_log_fn log,
                                   void* log_user, char** out_report_json);
EAE_API eae_status eae_model_load(const char* dir, eae_model** out);
/* Scores gold triples of `gold` as 1 and everything else as 0. */
EAE_API eae_status eae_model_oracle(const eae_corpus* gold, eae_model** out);
EAE_API eae_status eae_model_set_threshold(eae_model* model,
                                           double threshold);
EAE_API eae_status eae_model_score(const eae_model* model,
                                   const char* premise,
                                   const char* hypothesis, double* out_prob);
EAE_API void eae_model_free(eae_model* model);

/* ---- evaluation ---- */

/* split: "train", "test" or NULL for all. Report has per-class metrics,
 * average_f1, accuracy and per-relation positive-class metrics. */
EAE_API eae_status eae_evaluate_nli(const eae_model* model,
                                    const eae_dataset* dataset,
                                    const char* split, char** out_json);
/* graphs_jsonl as produced by the extract functions. */
EAE_API eae_status eae_evaluate_graphs(const char* graphs_jsonl,
                                       const eae_corpus* gold,
                                       char** out_json);

/* counts_json: {"hasAgent": {"tp":..,"fn":..,"fp":..,"tn":..}, ...}; tn is
 * optional and kappa is reported only where it is given. */
EAE_API eae_status eae_iaa_from_counts(const char* counts_json,
                                       char** out_json);
EAE_API eae_status eae_iaa_from_corpora(const eae_corpus* a,
                                        const eae_corpus* b, char** out_json);

/* ---- extraction ---- */

/* kind "gold": entities of `gold` (config_json ignored).
 * kind "mock": config_json maps text to a list of {type, start, end}.
 * kind "remote": config_json {"endpoint", "token", "timeout_ms",
 *   "max_attempts"}; unset fields come from EAE_NER_ENDPOINT,
 *   EAE_NER_TOKEN and EAE_NER_TIMEOUT_MS. */
EAE_API eae_status eae_provider_create(const char* kind,
                                       const char* config_json,
                                       const eae_corpus* gold,
                                       eae_provider** out);
EAE_API void eae_provider_free(eae_provider* provider);

/* Runs every corpus sentence through provider and model. out_graphs_jsonl
 * gets one line per event-bearing sentence; out_failures_json is a JSON
 * list of {sentence_id, message} and may be NULL. */
EAE_API eae_status eae_extract_corpus(const eae_corpus* corpus,
                                      eae_provider* provider,
                                      const eae_model* model,
                                      const eae_templates* templates,
                                      char** out_graphs_jsonl,
                                      char** out_failures_json);
EAE_API eae_status eae_extract_document(const char* text,
                                        const char* document_id,
                                        eae_provider* provider,
                                        const eae_model* model,
                                        const eae_templates* templates,
                                        char** out_graphs_jsonl,
                                        char** out_failures_json);

#ifdef __cplusplus
}
#endif

#endif /* EAE_EAE_H_ */
