// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pmatch/dataset.hpp"
#include "pmatch/matrix.hpp"

namespace pmatch {

double sigmoid(double logit);

/// Multi-label classifier with one independent sigmoid per class: linear when
/// hidden == 0, otherwise one tanh hidden layer. All parameters live in one
/// flat vector so the optimizer can treat them uniformly.
///
/// Layout: [W1 (in x hidden), b1 (hidden)] when hidden > 0, then
/// [W (last x classes), b (classes)].
class ToyClassifier {
 public:
  ToyClassifier(std::size_t features, std::size_t classes, std::size_t hidden = 0);

  /// Gaussian initialization with standard deviation `scale` (biases zero).
  void initialize(Rng& rng, double scale = 0.01);

  /// Sets the output-layer biases, one per class (e.g. to prior log-odds).
  void set_output_bias(std::span<const double> bias);

  struct Activations {
    FeatureMatrix hidden;  // empty for the linear model
    ScoreMatrix scores;    // strictly inside (0, 1)
  };

  /// Throws std::invalid_argument on a feature-dimension mismatch.
  Activations forward(const FeatureMatrix& x) const;
  ScoreMatrix predict(const FeatureMatrix& x) const { return forward(x).scores; }

  /// Adds d(loss)/d(parameters) into `param_grad`, given d(loss)/d(scores).
  void backward(const FeatureMatrix& x, const Activations& act, const ScoreMatrix& score_grad,
                std::span<double> param_grad) const;

  std::size_t features() const { return features_; }
  std::size_t classes() const { return classes_; }
  std::size_t hidden() const { return hidden_; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

 private:
  std::size_t out_offset() const { return hidden_ == 0 ? 0 : (features_ + 1) * hidden_; }

  std::size_t features_;
  std::size_t classes_;
  std::size_t hidden_;
  std::vector<double> params_;
};

}  // namespace pmatch
