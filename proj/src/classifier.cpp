// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pmatch {

double sigmoid(double logit) {
  double p;
  if (logit >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-logit));
  } else {
    const double e = std::exp(logit);
    p = e / (1.0 + e);
  }
  // Keep scores strictly inside (0, 1) even when the logistic saturates.
  constexpr double lo = std::numeric_limits<double>::min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(p, lo, hi);
}

ToyClassifier::ToyClassifier(std::size_t features, std::size_t classes, std::size_t hidden)
    : features_(features), classes_(classes), hidden_(hidden) {
  if (features == 0 || classes == 0) throw std::invalid_argument("classifier needs features and classes");
  const std::size_t last = hidden == 0 ? features : hidden;
  params_.assign(out_offset() + (last + 1) * classes, 0.0);
}

void ToyClassifier::initialize(Rng& rng, double scale) {
  std::normal_distribution<double> gauss(0.0, scale);
  std::fill(params_.begin(), params_.end(), 0.0);
  const std::size_t last = hidden_ == 0 ? features_ : hidden_;
  if (hidden_ > 0) {
    for (std::size_t k = 0; k < features_ * hidden_; ++k) params_[k] = gauss(rng);
  }
  for (std::size_t k = 0; k < last * classes_; ++k) params_[out_offset() + k] = gauss(rng);
}

void ToyClassifier::set_output_bias(std::span<const double> bias) {
  if (bias.size() != classes_) throw std::invalid_argument("one output bias per class required");
  const std::size_t last = hidden_ == 0 ? features_ : hidden_;
  std::copy(bias.begin(), bias.end(), params_.begin() + static_cast<std::ptrdiff_t>(out_offset() + last * classes_));
}

ToyClassifier::Activations ToyClassifier::forward(const FeatureMatrix& x) const {
  if (x.cols() != features_) {
    throw std::invalid_argument("classifier expects " + std::to_string(features_) + " features, got " +
                                std::to_string(x.cols()));
  }
  Activations act;
  const FeatureMatrix* input = &x;
  std::size_t in_dims = features_;
  if (hidden_ > 0) {
    act.hidden = FeatureMatrix(x.rows(), hidden_);
    const double* w1 = params_.data();
    const double* b1 = w1 + features_ * hidden_;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      auto h = act.hidden.row(i);
      std::copy(b1, b1 + hidden_, h.begin());
      auto xi = x.row(i);
      for (std::size_t d = 0; d < features_; ++d) {
        const double v = xi[d];
        const double* wrow = w1 + d * hidden_;
        for (std::size_t j = 0; j < hidden_; ++j) h[j] += v * wrow[j];
      }
      for (double& v : h) v = std::tanh(v);
    }
    input = &act.hidden;
    in_dims = hidden_;
  }

  const double* w = params_.data() + out_offset();
  const double* b = w + in_dims * classes_;
  act.scores = ScoreMatrix(x.rows(), classes_);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto s = act.scores.row(i);
    std::copy(b, b + classes_, s.begin());
    auto xi = input->row(i);
    for (std::size_t d = 0; d < in_dims; ++d) {
      const double v = xi[d];
      const double* wrow = w + d * classes_;
      for (std::size_t c = 0; c < classes_; ++c) s[c] += v * wrow[c];
    }
    for (double& v : s) v = sigmoid(v);
  }
  return act;
}

void ToyClassifier::backward(const FeatureMatrix& x, const Activations& act, const ScoreMatrix& score_grad,
                             std::span<double> param_grad) const {
  require_same_shape(act.scores, score_grad, "classifier backward");
  if (param_grad.size() != params_.size()) throw std::invalid_argument("gradient buffer has wrong size");

  const FeatureMatrix& input = hidden_ > 0 ? act.hidden : x;
  const std::size_t in_dims = input.cols();
  double* gw = param_grad.data() + out_offset();
  double* gb = gw + in_dims * classes_;
  const double* w = params_.data() + out_offset();

  std::vector<double> dlogit(classes_);
  std::vector<double> dhidden(hidden_);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t c = 0; c < classes_; ++c) {
      const double p = act.scores(i, c);
      dlogit[c] = score_grad(i, c) * p * (1.0 - p);
      gb[c] += dlogit[c];
    }
    auto xi = input.row(i);
    for (std::size_t d = 0; d < in_dims; ++d) {
      double* grow = gw + d * classes_;
      for (std::size_t c = 0; c < classes_; ++c) grow[c] += xi[d] * dlogit[c];
    }
    if (hidden_ == 0) continue;

    for (std::size_t j = 0; j < hidden_; ++j) {
      const double* wrow = w + j * classes_;
      double acc = 0.0;
      for (std::size_t c = 0; c < classes_; ++c) acc += wrow[c] * dlogit[c];
      const double h = act.hidden(i, j);
      dhidden[j] = acc * (1.0 - h * h);
    }
    double* gw1 = param_grad.data();
    double* gb1 = gw1 + features_ * hidden_;
    auto raw = x.row(i);
    for (std::size_t d = 0; d < features_; ++d) {
      double* grow = gw1 + d * hidden_;
      for (std::size_t j = 0; j < hidden_; ++j) grow[j] += raw[d] * dhidden[j];
    }
    for (std::size_t j = 0; j < hidden_; ++j) gb1[j] += dhidden[j];
  }
}

}  // namespace pmatch
