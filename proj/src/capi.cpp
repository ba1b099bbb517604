// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "pmatch/config.hpp"
#include "pmatch/errors.hpp"
#include "pmatch/experiment.hpp"
#include "pmatch/losses.hpp"
#include "pmatch/metrics.hpp"
#include "pmatch/pseudo_labeler.hpp"
#include "pmatch/score_histogram.hpp"
#include "pmatch/threshold_controller.hpp"
#include "pmatch/trace_json.hpp"

struct pm_histogram {
  pmatch::ClassHistogram impl;
};

struct pm_thresholds {
  pmatch::ThresholdState impl;
};

struct pm_config {
  pmatch::ExperimentConfig impl;
};

namespace {

thread_local std::string g_last_error;

pm_status fail(pm_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
pm_status guarded(F&& body) {
  try {
    return body();
  } catch (const pmatch::ConfigError& e) {
    return fail(PM_ERR_CONFIG, e.what());
  } catch (const pmatch::NumericError& e) {
    return fail(PM_ERR_NUMERIC, e.what());
  } catch (const pmatch::MismatchError& e) {
    return fail(PM_ERR_MISMATCH, e.what());
  } catch (const pmatch::IoError& e) {
    return fail(PM_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PM_ERR_INTERNAL, "unknown error");
  }
}

#define PM_REQUIRE(cond, what) \
  if (!(cond)) return fail(PM_ERR_INVALID_ARGUMENT, what)

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pmatch::LossConfig to_core(const pm_loss_config* cfg) {
  pmatch::LossConfig out;
  if (!cfg) return out;
  if (cfg->kind != PM_LOSS_BCE && cfg->kind != PM_LOSS_ASYMMETRIC) {
    throw std::invalid_argument("unknown loss kind");
  }
  out.kind = cfg->kind == PM_LOSS_BCE ? pmatch::LossKind::BinaryCrossEntropy : pmatch::LossKind::Asymmetric;
  out.gamma_pos = cfg->gamma_pos;
  out.gamma_neg = cfg->gamma_neg;
  out.prob_shift = cfg->prob_shift;
  out.normalize_by_selected = cfg->normalize_by_selected != 0;
  out.validate();
  return out;
}

template <typename T>
pmatch::Matrix<T> copy_matrix(const T* data, std::size_t rows, std::size_t cols) {
  return pmatch::Matrix<T>(rows, cols, std::vector<T>(data, data + rows * cols));
}

}  // namespace

extern "C" {

const char* pm_status_name(pm_status status) {
  switch (status) {
    case PM_OK: return "ok";
    case PM_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case PM_ERR_CONFIG: return "config";
    case PM_ERR_NUMERIC: return "numeric";
    case PM_ERR_MISMATCH: return "mismatch";
    case PM_ERR_IO: return "io";
    case PM_ERR_UNDEFINED: return "undefined";
    case PM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* pm_last_error(void) { return g_last_error.c_str(); }

const char* pm_version(void) { return "1.0.0"; }

void pm_string_free(char* s) { std::free(s); }

pm_status pm_histogram_create(size_t bins, double decay, pm_histogram** out) {
  PM_REQUIRE(out, "out is NULL");
  return guarded([&] {
    *out = new pm_histogram{pmatch::ClassHistogram(bins, decay)};
    return PM_OK;
  });
}

void pm_histogram_destroy(pm_histogram* h) { delete h; }

pm_status pm_histogram_update(pm_histogram* h, const double* scores, size_t count) {
  PM_REQUIRE(h, "histogram is NULL");
  PM_REQUIRE(scores || count == 0, "scores is NULL");
  return guarded([&] {
    h->impl.update(std::span<const double>(scores, count));
    return PM_OK;
  });
}

pm_status pm_histogram_quantile(const pm_histogram* h, double percentile, double* out) {
  PM_REQUIRE(h && out, "NULL argument");
  return guarded([&] {
    *out = h->impl.quantile(percentile);
    return PM_OK;
  });
}

size_t pm_histogram_bin_count(const pm_histogram* h) { return h ? h->impl.bin_count() : 0; }

pm_status pm_histogram_bins(const pm_histogram* h, double* out, size_t capacity) {
  PM_REQUIRE(h && out, "NULL argument");
  PM_REQUIRE(capacity >= h->impl.bin_count(), "output buffer smaller than bin count");
  const auto bins = h->impl.bins();
  std::copy(bins.begin(), bins.end(), out);
  return PM_OK;
}

pm_status pm_thresholds_create(double kappa_plus, double kappa_minus, int clamp_negative, const uint8_t* labels,
                               size_t rows, size_t classes, pm_thresholds** out) {
  PM_REQUIRE(out, "out is NULL");
  PM_REQUIRE(labels || rows * classes == 0, "labels is NULL");
  return guarded([&] {
    auto m = copy_matrix(labels, rows, classes);
    for (auto v : m.values()) {
      if (v > 1) throw std::invalid_argument("labels must be 0 or 1");
    }
    pmatch::PercentileInit init{kappa_plus, kappa_minus, clamp_negative != 0};
    *out = new pm_thresholds{pmatch::init_class_percentiles(init, m)};
    return PM_OK;
  });
}

void pm_thresholds_destroy(pm_thresholds* t) { delete t; }

size_t pm_thresholds_class_count(const pm_thresholds* t) { return t ? t->impl.class_count() : 0; }

pm_status pm_thresholds_refresh(pm_thresholds* t, const pm_histogram* const* histograms, size_t count) {
  PM_REQUIRE(t, "thresholds is NULL");
  PM_REQUIRE(histograms || count == 0, "histograms is NULL");
  return guarded([&] {
    std::vector<pmatch::ClassHistogram> hs;
    hs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!histograms[i]) throw std::invalid_argument("histogram " + std::to_string(i) + " is NULL");
      hs.push_back(histograms[i]->impl);
    }
    pmatch::refresh_thresholds(t->impl, hs);
    return PM_OK;
  });
}

pm_status pm_thresholds_get(const pm_thresholds* t, double* kappa_plus, double* kappa_minus, double* tau_plus,
                            double* tau_minus, double* gap) {
  PM_REQUIRE(t, "thresholds is NULL");
  const auto& s = t->impl;
  auto put = [](const std::vector<double>& src, double* dst) {
    if (dst) std::copy(src.begin(), src.end(), dst);
  };
  put(s.kappa_plus, kappa_plus);
  put(s.kappa_minus, kappa_minus);
  put(s.tau_plus, tau_plus);
  put(s.tau_minus, tau_minus);
  put(s.gap, gap);
  return PM_OK;
}

pm_weight_schedule pm_weight_schedule_default(void) {
  const pmatch::WeightSchedule d;
  return {d.gap_start, d.gap_saturate, d.alpha_saturate, d.warmup_iters};
}

pm_status pm_loss_weight(double gap, long iteration, const pm_weight_schedule* schedule, double* out) {
  PM_REQUIRE(out, "out is NULL");
  return guarded([&] {
    pmatch::WeightSchedule s;
    if (schedule) s = {schedule->gap_start, schedule->gap_saturate, schedule->alpha_saturate, schedule->warmup_iters};
    s.validate();
    if (!(gap >= 0.0 && gap <= 1.0)) throw std::invalid_argument("gap must lie in [0, 1]");
    if (iteration < 0) throw std::invalid_argument("iteration must be non-negative");
    *out = pmatch::loss_weight(gap, iteration, s);
    return PM_OK;
  });
}

pm_status pm_select(const double* weak_scores, size_t rows, size_t classes, const double* tau_plus,
                    const double* tau_minus, uint8_t* selected, uint8_t* pseudo) {
  PM_REQUIRE(weak_scores && tau_plus && tau_minus && selected && pseudo, "NULL argument");
  return guarded([&] {
    const auto scores = copy_matrix(weak_scores, rows, classes);
    const auto mask = pmatch::select(scores, std::span<const double>(tau_plus, classes),
                                     std::span<const double>(tau_minus, classes));
    std::copy(mask.selected.values().begin(), mask.selected.values().end(), selected);
    std::copy(mask.pseudo.values().begin(), mask.pseudo.values().end(), pseudo);
    return PM_OK;
  });
}

pm_loss_config pm_loss_config_default(void) { return {PM_LOSS_BCE, 0.0, 0.0, 0.0, 0}; }

pm_status pm_elementwise_loss(int target, double score, const pm_loss_config* cfg, double* loss, double* grad) {
  return guarded([&] {
    const auto c = to_core(cfg);
    if (loss) *loss = pmatch::elementwise_loss(target, score, c);
    if (grad) *grad = pmatch::elementwise_gradient(target, score, c);
    return PM_OK;
  });
}

pm_status pm_supervised_loss(const uint8_t* labels, const double* scores, size_t rows, size_t classes,
                             const pm_loss_config* cfg, double* loss, double* grad) {
  PM_REQUIRE(labels && scores && loss, "NULL argument");
  return guarded([&] {
    const auto r = pmatch::supervised_loss(copy_matrix(labels, rows, classes), copy_matrix(scores, rows, classes),
                                           to_core(cfg));
    *loss = r.value;
    if (grad) std::copy(r.grad.values().begin(), r.grad.values().end(), grad);
    return PM_OK;
  });
}

pm_status pm_unlabeled_loss(const uint8_t* selected, const uint8_t* pseudo, const double* strong_scores, size_t rows,
                            size_t classes, const pm_loss_config* cfg, double* loss, double* per_class, double* grad) {
  PM_REQUIRE(selected && pseudo && strong_scores && loss, "NULL argument");
  return guarded([&] {
    pmatch::SelectionMask mask{copy_matrix(selected, rows, classes), copy_matrix(pseudo, rows, classes)};
    const auto r = pmatch::unlabeled_loss(mask, copy_matrix(strong_scores, rows, classes), to_core(cfg));
    *loss = r.value;
    if (per_class) std::copy(r.per_class.begin(), r.per_class.end(), per_class);
    if (grad) std::copy(r.grad.values().begin(), r.grad.values().end(), grad);
    return PM_OK;
  });
}

double pm_total_loss(double supervised, double unlabeled, double alpha) {
  return pmatch::total_loss(supervised, unlabeled, alpha);
}

pm_status pm_average_precision(const double* scores, const uint8_t* labels, size_t n, double* out) {
  PM_REQUIRE(scores && labels && out, "NULL argument");
  return guarded([&] {
    const auto ap = pmatch::average_precision({scores, n}, {labels, n});
    if (!ap) return fail(PM_ERR_UNDEFINED, "average precision needs at least one positive");
    *out = *ap;
    return PM_OK;
  });
}

pm_status pm_roc_auc(const double* scores, const uint8_t* labels, size_t n, double* out) {
  PM_REQUIRE(scores && labels && out, "NULL argument");
  return guarded([&] {
    const auto auc = pmatch::roc_auc({scores, n}, {labels, n});
    if (!auc) return fail(PM_ERR_UNDEFINED, "ROC-AUC needs both positive and negative labels");
    *out = *auc;
    return PM_OK;
  });
}

pm_status pm_config_create(pm_config** out) {
  PM_REQUIRE(out, "out is NULL");
  return guarded([&] {
    *out = new pm_config{};
    return PM_OK;
  });
}

pm_status pm_config_parse(const char* text, pm_config** out) {
  PM_REQUIRE(text && out, "NULL argument");
  return guarded([&] {
    *out = new pm_config{pmatch::parse_config(text)};
    return PM_OK;
  });
}

pm_status pm_config_load(const char* path, pm_config** out) {
  PM_REQUIRE(path && out, "NULL argument");
  return guarded([&] {
    *out = new pm_config{pmatch::load_config(path)};
    return PM_OK;
  });
}

void pm_config_destroy(pm_config* cfg) { delete cfg; }

pm_status pm_config_set(pm_config* cfg, const char* key, const char* value) {
  PM_REQUIRE(cfg && key && value, "NULL argument");
  return guarded([&] {
    cfg->impl.set(key, value);
    return PM_OK;
  });
}

pm_status pm_config_to_string(const pm_config* cfg, char** out) {
  PM_REQUIRE(cfg && out, "NULL argument");
  return guarded([&] {
    *out = dup_string(pmatch::format_config(cfg->impl));
    return PM_OK;
  });
}

pm_status pm_run_experiment(const pm_config* cfg, const char* trace_path, char** report_json) {
  PM_REQUIRE(cfg && trace_path, "NULL argument");
  return guarded([&] {
    cfg->impl.validate();
    std::ofstream trace(trace_path, std::ios::binary | std::ios::trunc);
    if (!trace) throw pmatch::IoError(std::string("cannot open trace output '") + trace_path + "'");
    const auto summary = pmatch::run_experiment(cfg->impl, trace);
    if (report_json) *report_json = dup_string(pmatch::report_to_json(summary.final_report));
    return PM_OK;
  });
}

pm_status pm_compare_traces(const char* const* paths, size_t count, int as_json, char** out) {
  PM_REQUIRE(paths && out, "NULL argument");
  return guarded([&] {
    std::vector<pmatch::TraceResult> traces;
    for (size_t i = 0; i < count; ++i) {
      if (!paths[i]) throw std::invalid_argument("trace path is NULL");
      traces.push_back(pmatch::read_trace_result(paths[i]));
    }
    const auto cmp = pmatch::compare_runs(traces);
    *out = dup_string(as_json ? pmatch::comparison_to_json(cmp) : pmatch::comparison_to_text(cmp));
    return PM_OK;
  });
}

pm_status pm_generate_dataset(const pm_config* cfg, const char* out_path) {
  PM_REQUIRE(cfg && out_path, "NULL argument");
  return guarded([&] {
    cfg->impl.validate();
    pmatch::DatasetSpec spec = cfg->impl.data;
    spec.seed = cfg->impl.seed;
    const auto data = pmatch::generate_dataset(spec);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw pmatch::IoError(std::string("cannot open dataset output '") + out_path + "'");
    pmatch::write_dataset(out, data);
    out.flush();
    if (!out) throw pmatch::IoError(std::string("failed writing '") + out_path + "'");
    return PM_OK;
  });
}

}  // extern "C"
