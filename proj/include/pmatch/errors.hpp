// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pmatch {

// Invalid arguments are reported with std::invalid_argument throughout.
// The types below cover the failure classes the C API maps onto distinct
// status codes.

/// Configuration that is well-formed but unusable (e.g. a class whose clamped
/// percentile targets collapse).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite value detected during training.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that cannot be compared or combined (shape or provenance mismatch).
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pmatch
