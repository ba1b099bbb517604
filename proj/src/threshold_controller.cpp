// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/threshold_controller.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pmatch/errors.hpp"

namespace pmatch {

void WeightSchedule::validate() const {
  if (!(gap_start < gap_saturate)) {
    throw std::invalid_argument("weight schedule needs gap_start < gap_saturate");
  }
  if (!(alpha_saturate > 0.0)) throw std::invalid_argument("alpha_saturate must be positive");
  if (warmup_iters < 0) throw std::invalid_argument("warmup_iters must be non-negative");
}

std::vector<double> negative_ratios(const LabelMatrix& labels) {
  if (labels.rows() == 0) throw std::invalid_argument("labeled set is empty");
  std::vector<double> ratios(labels.cols(), 0.0);
  for (std::size_t c = 0; c < labels.cols(); ++c) {
    std::size_t negatives = 0;
    for (std::size_t i = 0; i < labels.rows(); ++i) negatives += labels(i, c) == 0 ? 1 : 0;
    ratios[c] = static_cast<double>(negatives) / static_cast<double>(labels.rows());
  }
  return ratios;
}

ThresholdState init_class_percentiles(const PercentileInit& init, const LabelMatrix& labeled_labels) {
  if (!(init.kappa_minus >= 0.0 && init.kappa_minus < init.kappa_plus && init.kappa_plus <= 1.0)) {
    throw std::invalid_argument("percentiles must satisfy 0 <= kappa_minus < kappa_plus <= 1");
  }
  const auto ratios = negative_ratios(labeled_labels);
  const std::size_t classes = ratios.size();

  ThresholdState state;
  state.kappa_plus.resize(classes);
  state.kappa_minus.resize(classes);
  std::ostringstream bad;
  for (std::size_t c = 0; c < classes; ++c) {
    state.kappa_plus[c] = std::max(init.kappa_plus, ratios[c]);
    state.kappa_minus[c] = init.clamp_negative ? std::min(init.kappa_minus, ratios[c]) : init.kappa_minus;
    if (!(state.kappa_minus[c] < state.kappa_plus[c])) {
      bad << " class " << c << " (kappa_minus=" << state.kappa_minus[c]
          << ", kappa_plus=" << state.kappa_plus[c] << ", negative ratio=" << ratios[c] << ");";
    }
  }
  if (!bad.str().empty()) {
    throw ConfigError("clamped percentiles violate kappa_minus < kappa_plus for" + bad.str());
  }
  // The CDF of a uniform histogram is the identity.
  state.tau_plus = state.kappa_plus;
  state.tau_minus = state.kappa_minus;
  state.gap.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) state.gap[c] = state.tau_plus[c] - state.tau_minus[c];
  return state;
}

void refresh_thresholds(ThresholdState& state, std::span<const ClassHistogram> histograms) {
  const std::size_t classes = state.class_count();
  if (histograms.size() != classes) {
    throw std::invalid_argument("refresh_thresholds: " + std::to_string(histograms.size()) +
                                " histograms for " + std::to_string(classes) + " classes");
  }
  state.tau_plus.resize(classes);
  state.tau_minus.resize(classes);
  state.gap.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    state.tau_plus[c] = histograms[c].quantile(state.kappa_plus[c]);
    state.tau_minus[c] = histograms[c].quantile(state.kappa_minus[c]);
    state.gap[c] = state.tau_plus[c] - state.tau_minus[c];
  }
}

ThresholdState fixed_thresholds(std::size_t classes, double tau_plus, double tau_minus) {
  if (!(tau_minus >= 0.0 && tau_minus <= tau_plus && tau_plus <= 1.0)) {
    throw std::invalid_argument("fixed thresholds must satisfy 0 <= tau_minus <= tau_plus <= 1");
  }
  ThresholdState s;
  s.kappa_plus.assign(classes, tau_plus);
  s.kappa_minus.assign(classes, tau_minus);
  s.tau_plus.assign(classes, tau_plus);
  s.tau_minus.assign(classes, tau_minus);
  s.gap.assign(classes, tau_plus - tau_minus);
  return s;
}

double loss_weight(double gap, long iteration, const WeightSchedule& schedule) {
  if (iteration < schedule.warmup_iters || gap < schedule.gap_start) return 0.0;
  if (gap > schedule.gap_saturate) return schedule.alpha_saturate;
  return schedule.alpha_saturate * (gap - schedule.gap_start) /
         (schedule.gap_saturate - schedule.gap_start);
}

}  // namespace pmatch
