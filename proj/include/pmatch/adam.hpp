// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pmatch {

struct AdamOptions {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam over a flat parameter vector.
class Adam {
 public:
  Adam(std::size_t parameter_count, AdamOptions options = {});

  /// One update with learning rate `lr`; the step counter advances first, so
  /// the first call uses t = 1.
  void step(std::span<double> params, std::span<const double> grads, double lr);
  void step(std::span<double> params, std::span<const double> grads) { step(params, grads, options_.lr); }

  long steps() const { return t_; }
  const AdamOptions& options() const { return options_; }

 private:
  AdamOptions options_;
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

}  // namespace pmatch
