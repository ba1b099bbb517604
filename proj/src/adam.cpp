// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace pmatch {

Adam::Adam(std::size_t parameter_count, AdamOptions options)
    : options_(options), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads, double lr) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument("adam: parameter/gradient size mismatch");
  }
  ++t_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double m_hat = m_[i] / correction1;
    const double v_hat = v_[i] / correction2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + options_.epsilon);
  }
}

}  // namespace pmatch
