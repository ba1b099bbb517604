// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/score_histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pmatch {

namespace {

void check_decay(double decay) {
  if (!(decay >= 0.0 && decay <= 1.0)) {
    throw std::invalid_argument("histogram decay must lie in [0, 1], got " + std::to_string(decay));
  }
}

}  // namespace

ClassHistogram::ClassHistogram(std::size_t bin_count, double decay) : decay_(decay) {
  if (bin_count == 0) throw std::invalid_argument("histogram bin count must be positive");
  check_decay(decay);
  bins_.assign(bin_count, 1.0 / static_cast<double>(bin_count));
}

ClassHistogram ClassHistogram::from_bins(std::vector<double> bins, double decay) {
  if (bins.empty()) throw std::invalid_argument("histogram bin count must be positive");
  for (double b : bins) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw std::invalid_argument("histogram bins must be finite and non-negative");
    }
  }
  const double total = std::accumulate(bins.begin(), bins.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("histogram bins must sum to 1, got " + std::to_string(total));
  }
  ClassHistogram h(bins.size(), decay);
  h.bins_ = std::move(bins);
  return h;
}

std::size_t ClassHistogram::bin_of(double score) const {
  const auto k = bins_.size();
  const auto idx = static_cast<std::size_t>(std::floor(score * static_cast<double>(k)));
  return std::min(idx, k - 1);
}

void ClassHistogram::update(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("histogram update needs a non-empty batch");
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw std::invalid_argument("score outside [0, 1]: " + std::to_string(s));
    }
  }
  if (frozen()) return;

  std::vector<double> counts(bins_.size(), 0.0);
  for (double s : scores) counts[bin_of(s)] += 1.0;

  const double fresh = (1.0 - decay_) / static_cast<double>(scores.size());
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    bins_[i] = decay_ * bins_[i] + fresh * counts[i];
  }
}

double ClassHistogram::quantile(double percentile) const {
  if (!(percentile >= 0.0 && percentile <= 1.0)) {
    throw std::invalid_argument("percentile must lie in [0, 1], got " + std::to_string(percentile));
  }
  if (percentile == 0.0) return 0.0;
  if (percentile == 1.0) return 1.0;

  const double k = static_cast<double>(bins_.size());
  double below = 0.0;
  double last_edge = 1.0;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const double m = bins_[i];
    if (m <= 0.0) continue;
    const double above = below + m;
    last_edge = static_cast<double>(i + 1) / k;
    if (above >= percentile) {
      // Clamping the fraction keeps the result monotone across bin edges even
      // when the running sum rounds.
      const double frac = std::clamp((percentile - below) / m, 0.0, 1.0);
      return std::min((static_cast<double>(i) + frac) / k, 1.0);
    }
    below = above;
  }
  // Accumulated mass fell short of the percentile by rounding only.
  return last_edge;
}

double ClassHistogram::cdf(double score) const {
  if (score <= 0.0) return 0.0;
  if (score >= 1.0) return mass();
  const double k = static_cast<double>(bins_.size());
  const double pos = score * k;
  const auto full = static_cast<std::size_t>(std::floor(pos));
  double acc = 0.0;
  for (std::size_t i = 0; i < full && i < bins_.size(); ++i) acc += bins_[i];
  if (full < bins_.size()) acc += bins_[full] * (pos - static_cast<double>(full));
  return acc;
}

double ClassHistogram::mass() const { return std::accumulate(bins_.begin(), bins_.end(), 0.0); }

}  // namespace pmatch
