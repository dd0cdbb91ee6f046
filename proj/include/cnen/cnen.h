/* Copyright 2026 The cnen Authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the cnen temporal link predictor. All functions return a
 * cnen_status; on failure cnen_last_error() describes the problem for the
 * calling thread. Strings and byte buffers handed out by the library must be
 * released with cnen_string_free() / cnen_bytes_free(). JSON is used for
 * every structured input and output.
 */
#ifndef CNEN_CNEN_H_
#define CNEN_CNEN_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CNEN_BUILDING_LIBRARY)
#define CNEN_API __attribute__((visibility("default")))
#else
#define CNEN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes for the CLI. */
typedef enum cnen_status {
  CNEN_OK = 0,
  CNEN_ERR_USAGE = 1,
  CNEN_ERR_DATA = 2,
  CNEN_ERR_NUMERICAL = 3,
  CNEN_ERR_INTERNAL = 4
} cnen_status;

typedef struct cnen_dataset cnen_dataset;
typedef struct cnen_memory cnen_memory;

CNEN_API const char* cnen_version(void);
/* Message for the last failed call on this thread; "" if none. */
CNEN_API const char* cnen_last_error(void);
CNEN_API void cnen_string_free(char* s);
CNEN_API void cnen_bytes_free(uint8_t* bytes);

/* ---- datasets ---- */

/* layout_json may be NULL or an object with optional keys
 * "header" ("auto"|"present"|"absent"), "delimiter" (one-char string),
 * "has_label" (bool), "has_index_column" (bool). */
CNEN_API cnen_status cnen_dataset_load(const char* path, const char* layout_json,
                                       cnen_dataset** out);
/* Triadic-closure stream. Keys: num_nodes, num_events, closure_prob,
 * window, seed. */
CNEN_API cnen_status cnen_dataset_triadic(const char* options_json,
                                          cnen_dataset** out);
CNEN_API cnen_status cnen_dataset_load_node_features(cnen_dataset* ds,
                                                     const char* path);
CNEN_API cnen_status cnen_dataset_info(const cnen_dataset* ds, size_t* num_nodes,
                                       size_t* num_events, size_t* node_dim,
                                       size_t* edge_dim);
CNEN_API cnen_status cnen_dataset_save_csv(const cnen_dataset* ds, const char* path);
CNEN_API void cnen_dataset_free(cnen_dataset* ds);

/* ---- configuration and runs ---- */

/* Fills defaults, validates, and returns the fully resolved config. */
CNEN_API cnen_status cnen_config_resolve(const char* config_json, char** resolved_json);

typedef void (*cnen_epoch_callback)(const char* epoch_json, void* user);

/* Trains with early stopping, tests the best epoch and returns the metrics
 * JSON. checkpoint_path may be NULL; callback may be NULL. */
CNEN_API cnen_status cnen_train(const cnen_dataset* ds, const char* config_json,
                                const char* dataset_name, const char* checkpoint_path,
                                cnen_epoch_callback callback, void* user,
                                char** metrics_json);

/* Scores validation and test with a saved checkpoint, no training. */
CNEN_API cnen_status cnen_evaluate(const cnen_dataset* ds, const char* config_json,
                                   const char* dataset_name, const char* checkpoint_path,
                                   char** metrics_json);

/* axis: "hashtable_size" or "sequence_length". */
CNEN_API cnen_status cnen_sweep(const cnen_dataset* ds, const char* config_json,
                                const char* axis, const size_t* values, size_t count,
                                const char* dataset_name, char** table_json);

/* options_json may be NULL. Keys: seq_lens, widths, fixed_seq_len,
 * fixed_width, num_nodes, num_events, batch_size, hidden, repeats, seed. */
CNEN_API cnen_status cnen_bench(const char* options_json, char** report_json);

/* options_json may be NULL. Keys: streams, max_nodes, max_events, width,
 * seq_len, check_every, two_order, neighbor_update, seed, multiplier,
 * forced_collision (bool). *passed is 1 when no injective pair mismatched. */
CNEN_API cnen_status cnen_oracle_check(const char* options_json, char** result_json,
                                       int* passed);

/* ---- neighbor memory ---- */

/* short_width == 0 creates a long-only memory. */
CNEN_API cnen_status cnen_memory_create(size_t num_nodes, size_t long_width,
                                        uint64_t long_q, size_t short_width,
                                        uint64_t short_q, cnen_memory** out);
CNEN_API void cnen_memory_free(cnen_memory* mem);
/* Inserts into both tables. */
CNEN_API cnen_status cnen_memory_insert(cnen_memory* mem, uint32_t owner,
                                        uint32_t neighbor);
/* table: 0 long, 1 short. strict: 0 literal, 1 real ids only. */
CNEN_API cnen_status cnen_memory_co_count(const cnen_memory* mem, int table,
                                          uint32_t a, uint32_t b, int strict,
                                          size_t* out);
CNEN_API cnen_status cnen_memory_reset(cnen_memory* mem);
CNEN_API cnen_status cnen_memory_snapshot(const cnen_memory* mem, uint8_t** bytes,
                                          size_t* len);
CNEN_API cnen_status cnen_memory_restore(cnen_memory* mem, const uint8_t* bytes,
                                         size_t len);

#ifdef __cplusplus
}
#endif

#endif /* CNEN_CNEN_H_ */
