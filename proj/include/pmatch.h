/*
 * Copyright (c) 2026, pmatch developers
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to libpmatch: percentile-driven pseudo-label thresholds for
 * multi-label semi-supervised classification, plus the experiment harness.
 *
 * Conventions:
 *  - Every fallible call returns pm_status. On failure, pm_last_error()
 *    returns a message for the calling thread until its next failing call.
 *  - Handles are opaque; each *_create has a matching *_destroy, which
 *    accepts NULL.
 *  - Matrices are row-major, rows = samples, columns = classes.
 *  - Strings returned through char** are owned by the caller and released
 *    with pm_string_free.
 */
#ifndef PMATCH_H
#define PMATCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(PMATCH_BUILDING_LIBRARY)
#define PMATCH_API __attribute__((visibility("default")))
#else
#define PMATCH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pm_status {
  PM_OK = 0,
  PM_ERR_INVALID_ARGUMENT = 1,
  PM_ERR_CONFIG = 2,
  PM_ERR_NUMERIC = 3,
  PM_ERR_MISMATCH = 4,
  PM_ERR_IO = 5,
  PM_ERR_UNDEFINED = 6, /* metric undefined for the given labels */
  PM_ERR_INTERNAL = 7
} pm_status;

PMATCH_API const char* pm_status_name(pm_status status);
PMATCH_API const char* pm_last_error(void);
PMATCH_API const char* pm_version(void);
PMATCH_API void pm_string_free(char* s);

/* ---- score histogram ---------------------------------------------------- */

typedef struct pm_histogram pm_histogram;

/* Uniform histogram. decay 0 freezes it. */
PMATCH_API pm_status pm_histogram_create(size_t bins, double decay, pm_histogram** out);
PMATCH_API void pm_histogram_destroy(pm_histogram* h);
/* One mini-batch of scores in [0, 1]; count must be positive. */
PMATCH_API pm_status pm_histogram_update(pm_histogram* h, const double* scores, size_t count);
PMATCH_API pm_status pm_histogram_quantile(const pm_histogram* h, double percentile, double* out);
PMATCH_API size_t pm_histogram_bin_count(const pm_histogram* h);
/* Copies bin masses; capacity must be at least the bin count. */
PMATCH_API pm_status pm_histogram_bins(const pm_histogram* h, double* out, size_t capacity);

/* ---- thresholds and loss weights ---------------------------------------- */

typedef struct pm_thresholds pm_thresholds;

/* Per-class percentiles clamped by the labeled set's negative ratios.
 * labels is rows x classes with entries 0 or 1. */
PMATCH_API pm_status pm_thresholds_create(double kappa_plus, double kappa_minus, int clamp_negative,
                                          const uint8_t* labels, size_t rows, size_t classes,
                                          pm_thresholds** out);
PMATCH_API void pm_thresholds_destroy(pm_thresholds* t);
PMATCH_API size_t pm_thresholds_class_count(const pm_thresholds* t);
/* Recompute score thresholds; one histogram per class. */
PMATCH_API pm_status pm_thresholds_refresh(pm_thresholds* t, const pm_histogram* const* histograms, size_t count);
/* Any output may be NULL; non-NULL outputs hold class_count doubles. */
PMATCH_API pm_status pm_thresholds_get(const pm_thresholds* t, double* kappa_plus, double* kappa_minus,
                                       double* tau_plus, double* tau_minus, double* gap);

typedef struct pm_weight_schedule {
  double gap_start;
  double gap_saturate;
  double alpha_saturate;
  long warmup_iters;
} pm_weight_schedule;

PMATCH_API pm_weight_schedule pm_weight_schedule_default(void);
PMATCH_API pm_status pm_loss_weight(double gap, long iteration, const pm_weight_schedule* schedule, double* out);

/* ---- pseudo-label selection --------------------------------------------- */

/* selected and pseudo receive rows x classes bytes. */
PMATCH_API pm_status pm_select(const double* weak_scores, size_t rows, size_t classes, const double* tau_plus,
                               const double* tau_minus, uint8_t* selected, uint8_t* pseudo);

/* ---- losses -------------------------------------------------------------- */

typedef enum pm_loss_kind { PM_LOSS_BCE = 0, PM_LOSS_ASYMMETRIC = 1 } pm_loss_kind;

typedef struct pm_loss_config {
  pm_loss_kind kind;
  double gamma_pos;
  double gamma_neg;
  double prob_shift;
  int normalize_by_selected;
} pm_loss_config;

PMATCH_API pm_loss_config pm_loss_config_default(void);
/* loss and grad (d loss / d score) may each be NULL. */
PMATCH_API pm_status pm_elementwise_loss(int target, double score, const pm_loss_config* cfg, double* loss,
                                         double* grad);
/* grad, when non-NULL, receives rows x classes doubles. */
PMATCH_API pm_status pm_supervised_loss(const uint8_t* labels, const double* scores, size_t rows, size_t classes,
                                        const pm_loss_config* cfg, double* loss, double* grad);
/* per_class (classes doubles) and grad (rows x classes) may be NULL. */
PMATCH_API pm_status pm_unlabeled_loss(const uint8_t* selected, const uint8_t* pseudo, const double* strong_scores,
                                       size_t rows, size_t classes, const pm_loss_config* cfg, double* loss,
                                       double* per_class, double* grad);
PMATCH_API double pm_total_loss(double supervised, double unlabeled, double alpha);

/* ---- metrics ------------------------------------------------------------- */

/* PM_ERR_UNDEFINED when there are no positives. */
PMATCH_API pm_status pm_average_precision(const double* scores, const uint8_t* labels, size_t n, double* out);
/* PM_ERR_UNDEFINED unless both polarities are present. */
PMATCH_API pm_status pm_roc_auc(const double* scores, const uint8_t* labels, size_t n, double* out);

/* ---- experiments --------------------------------------------------------- */

typedef struct pm_config pm_config;

PMATCH_API pm_status pm_config_create(pm_config** out);
PMATCH_API pm_status pm_config_parse(const char* text, pm_config** out);
PMATCH_API pm_status pm_config_load(const char* path, pm_config** out);
PMATCH_API void pm_config_destroy(pm_config* cfg);
PMATCH_API pm_status pm_config_set(pm_config* cfg, const char* key, const char* value);
/* Canonical key = value text covering every field. */
PMATCH_API pm_status pm_config_to_string(const pm_config* cfg, char** out);

/* Trains per the config, writing the trace to trace_path as it goes.
 * report_json (may be NULL) receives the final evaluation report. */
PMATCH_API pm_status pm_run_experiment(const pm_config* cfg, const char* trace_path, char** report_json);
/* Tabulates finished traces; as_json selects JSON instead of a text table. */
PMATCH_API pm_status pm_compare_traces(const char* const* paths, size_t count, int as_json, char** out);
/* Writes the config's synthetic dataset as a columnar text dump. */
PMATCH_API pm_status pm_generate_dataset(const pm_config* cfg, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* PMATCH_H */
