// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/trace_json.hpp"

#include <json.hpp>

namespace pmatch {

namespace {

using ojson = nlohmann::ordered_json;

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

ojson opt_list(const std::vector<std::optional<double>>& values) {
  ojson out = ojson::array();
  for (const auto& v : values) out.push_back(opt(v));
  return out;
}

}  // namespace

std::string report_to_json(const EvalReport& r) {
  ojson j;
  j["iteration"] = r.iteration;
  j["ap_variant"] = EvalReport::kApVariant;
  j["map"] = opt(r.mean_ap);
  j["macro_auc"] = opt(r.macro_auc);
  j["ap"] = opt_list(r.ap);
  j["auc"] = opt_list(r.auc);
  j["skipped_ap"] = r.skipped_ap;
  j["skipped_auc"] = r.skipped_auc;
  ojson pseudo = ojson::array();
  for (const auto& q : r.pseudo) {
    pseudo.push_back({
        {"pos_selected", q.positive_selected},
        {"pos_correct", q.positive_correct},
        {"pos_true", q.positive_true},
        {"neg_selected", q.negative_selected},
        {"neg_correct", q.negative_correct},
        {"neg_true", q.negative_true},
        {"pos_precision", opt(q.positive_precision())},
        {"pos_recall", opt(q.positive_recall())},
        {"neg_precision", opt(q.negative_precision())},
        {"neg_recall", opt(q.negative_recall())},
    });
  }
  j["pseudo"] = std::move(pseudo);
  return j.dump();
}

}  // namespace pmatch
