// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "pmatch/metrics.hpp"

namespace pmatch {

/// One-line JSON object for an evaluation report. Skipped classes appear as
/// null entries and are listed under skipped_ap / skipped_auc.
std::string report_to_json(const EvalReport& report);

}  // namespace pmatch
