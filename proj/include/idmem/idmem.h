/* Copyright 2026 The idmem Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the idmem identity-memory engine.
 *
 * Every fallible call returns an idmem_status. On failure the message of the
 * most recent error on the calling thread is available from
 * idmem_last_error(). Handles are opaque; strings and byte buffers returned
 * through out-parameters are owned by the caller and released with
 * idmem_string_free() / idmem_bytes_free().
 *
 * Observations are passed row-major: n_obs rows of `dimension` doubles.
 */

#ifndef IDMEM_IDMEM_H
#define IDMEM_IDMEM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IDMEM_API __declspec(dllexport)
#else
#define IDMEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum idmem_status {
  IDMEM_OK = 0,
  IDMEM_ERR_CONFIG = 1,
  IDMEM_ERR_DIMENSION = 2,
  IDMEM_ERR_STREAM_ORDER = 3,
  IDMEM_ERR_INSUFFICIENT_POINTS = 4,
  IDMEM_ERR_INVALID_ARGUMENT = 5,
  IDMEM_ERR_SNAPSHOT = 6,
  IDMEM_ERR_IO = 7,
  IDMEM_ERR_NULL_POINTER = 8,
  IDMEM_ERR_INTERNAL = 9
} idmem_status;

typedef struct idmem_config {
  double rho_bar;
  double e_bar;
  double alpha;
  uint64_t max_stale;
  size_t dimension;
  int has_abs_gate; /* nonzero: abs_gate is used for single-observation frames */
  double abs_gate;
  int normalize; /* nonzero: L2-normalize observations on ingest */
  uint64_t seed;
} idmem_config;

typedef struct idmem_engine idmem_engine;
typedef struct idmem_report idmem_report;
typedef struct idmem_dataset idmem_dataset;

IDMEM_API const char* idmem_version(void);
IDMEM_API const char* idmem_status_name(idmem_status status);
IDMEM_API const char* idmem_last_error(void);

IDMEM_API void idmem_string_free(char* s);
IDMEM_API void idmem_bytes_free(uint8_t* bytes);

/* ---- configuration ---- */

IDMEM_API void idmem_config_default(idmem_config* config);
IDMEM_API idmem_status idmem_config_validate(const idmem_config* config);
/* Defaults with eligibility pruning effectively off; used by the benchmarks. */
IDMEM_API void idmem_config_benchmark(idmem_config* config, size_t dimension);

/* ---- engine ---- */

IDMEM_API idmem_status idmem_engine_create(const idmem_config* config, idmem_engine** out);
/* Rejects snapshots written under a different dimension or configuration. */
IDMEM_API idmem_status idmem_engine_restore(const idmem_config* config, const uint8_t* bytes,
                                            size_t size, idmem_engine** out);
IDMEM_API void idmem_engine_destroy(idmem_engine* engine);

/* Search parallelism; 0 is treated as 1. Never changes results. */
IDMEM_API idmem_status idmem_engine_set_workers(idmem_engine* engine, unsigned workers);

IDMEM_API idmem_status idmem_engine_observe(idmem_engine* engine, uint64_t frame_index,
                                            const double* observations, size_t n_obs,
                                            idmem_report** out);

/* Read-only. identities[k] is valid only where matched[k] is 1. */
IDMEM_API idmem_status idmem_engine_classify(const idmem_engine* engine,
                                             const double* observations, size_t n_obs,
                                             uint64_t* identities, uint8_t* matched);

IDMEM_API size_t idmem_engine_memory_size(const idmem_engine* engine);
IDMEM_API uint64_t idmem_engine_frame_counter(const idmem_engine* engine);
IDMEM_API uint64_t idmem_engine_next_identity(const idmem_engine* engine);
/* 1 once any frame has been committed. */
IDMEM_API int idmem_engine_started(const idmem_engine* engine);

IDMEM_API idmem_status idmem_engine_snapshot(const idmem_engine* engine, uint8_t** bytes,
                                             size_t* size);
IDMEM_API idmem_status idmem_engine_stats_json(const idmem_engine* engine, char** json);

/* Parses a snapshot without a config and reports its header and stats. */
IDMEM_API idmem_status idmem_snapshot_inspect_json(const uint8_t* bytes, size_t size,
                                                   char** json);

/* ---- per-frame report ---- */

IDMEM_API void idmem_report_destroy(idmem_report* report);
IDMEM_API uint64_t idmem_report_frame_index(const idmem_report* report);
IDMEM_API size_t idmem_report_observation_count(const idmem_report* report);
IDMEM_API idmem_status idmem_report_assignment(const idmem_report* report, size_t k,
                                               uint64_t* identity, int* is_new);
IDMEM_API size_t idmem_report_memory_size_after(const idmem_report* report);
/* One JSON object on a single line. */
IDMEM_API idmem_status idmem_report_json(const idmem_report* report, char** json);

/* ---- labeled frame sets ---- */

IDMEM_API idmem_status idmem_dataset_create(size_t dimension, idmem_dataset** out);
IDMEM_API void idmem_dataset_destroy(idmem_dataset* dataset);
/* labels may be NULL (unlabeled frame) or hold n_obs strings. */
IDMEM_API idmem_status idmem_dataset_add_frame(idmem_dataset* dataset, uint64_t frame_index,
                                               const double* observations, size_t n_obs,
                                               const char* const* labels);
IDMEM_API size_t idmem_dataset_dimension(const idmem_dataset* dataset);
IDMEM_API size_t idmem_dataset_frame_count(const idmem_dataset* dataset);
/* Pointers stay valid until the dataset is modified or destroyed. */
IDMEM_API idmem_status idmem_dataset_frame(const idmem_dataset* dataset, size_t i,
                                           uint64_t* frame_index, size_t* n_obs,
                                           const double** observations, int* labeled);
IDMEM_API const char* idmem_dataset_label(const idmem_dataset* dataset, size_t i, size_t k);

/* ---- experiments ---- */

typedef struct idmem_stability_spec {
  double inlier_mean;
  double inlier_std;
  double outlier_mean;
  double outlier_std;
  double outlier_fraction;
  uint64_t iterations;
  size_t dimension;
  size_t observations_per_frame;
  uint64_t seed;
} idmem_stability_spec;

IDMEM_API void idmem_stability_spec_standard(idmem_stability_spec* spec, double outlier_mean,
                                             uint64_t seed);
IDMEM_API idmem_status idmem_stability_stream(const idmem_stability_spec* spec,
                                              idmem_dataset** out);
/* Runs the experiment; JSON carries histogram, scatter and summary. */
IDMEM_API idmem_status idmem_stability_run_json(const idmem_stability_spec* spec,
                                                const idmem_config* config, size_t bins,
                                                char** json);

typedef struct idmem_pr_spec {
  size_t dimension;
  double target_std;
  size_t views;
  double view_step;
  double separation;
  size_t distractor_identities;
  size_t warmup_frames;
  size_t subset_a_frames;
  size_t subset_b_frames;
  double target_frame_fraction;
  uint64_t seed;
} idmem_pr_spec;

IDMEM_API void idmem_pr_spec_default(idmem_pr_spec* spec);
IDMEM_API idmem_status idmem_pr_generate(const idmem_pr_spec* spec, idmem_dataset** warmup,
                                         idmem_dataset** subset_a, idmem_dataset** subset_b);

/* One pass over the dataset, re-indexed after the engine's last frame. */
IDMEM_API idmem_status idmem_train_pass(idmem_engine* engine, const idmem_dataset* frames);

/* Alternates training passes over A with read-only scoring of B. Returns a
 * JSON array with one point per pass. */
IDMEM_API idmem_status idmem_multipass_pr_json(idmem_engine* engine,
                                               const idmem_dataset* subset_a,
                                               const idmem_dataset* subset_b, unsigned passes,
                                               const char* target_label, char** json);

#ifdef __cplusplus
}
#endif

#endif /* IDMEM_IDMEM_H */
