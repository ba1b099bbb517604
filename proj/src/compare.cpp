// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "pmatch/errors.hpp"
#include "pmatch/experiment.hpp"

namespace pmatch {

namespace {

using json = nlohmann::json;

std::optional<double> opt_number(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (!v) continue;
    acc += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return acc / static_cast<double>(n);
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string show(const std::optional<double>& v, bool sign = false) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), sign ? "%+.4f" : "%.4f", *v);
  return buf;
}

}  // namespace

TraceResult read_trace_result(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace '" + path + "'");
  return read_trace_result(in, path);
}

TraceResult read_trace_result(std::istream& in, const std::string& path) {
  TraceResult r;
  r.path = path;
  std::string line;
  bool have_header = false;
  bool have_final = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IoError("trace '" + path + "': malformed record: " + e.what());
    }
    const auto type = j.value("type", "");
    if (type == "header") {
      if (j.value("format", "") != "pmatch-trace") throw IoError("trace '" + path + "': unknown format");
      r.label = j.at("label").get<std::string>();
      r.method = j.at("method").get<std::string>();
      for (const auto& [k, v] : j.at("dataset").items()) r.dataset.emplace_back(k, v.get<std::string>());
      std::sort(r.dataset.begin(), r.dataset.end());
      r.seed = std::stoull(j.at("config").at("seed").get<std::string>());
      have_header = true;
    } else if (type == "final") {
      const auto& rep = j.at("report");
      r.mean_ap = opt_number(rep, "map");
      r.macro_auc = opt_number(rep, "macro_auc");
      std::size_t pos_sel = 0, pos_ok = 0, neg_sel = 0, neg_ok = 0;
      for (const auto& q : rep.at("pseudo")) {
        pos_sel += q.at("pos_selected").get<std::size_t>();
        pos_ok += q.at("pos_correct").get<std::size_t>();
        neg_sel += q.at("neg_selected").get<std::size_t>();
        neg_ok += q.at("neg_correct").get<std::size_t>();
      }
      if (pos_sel > 0) r.positive_precision = static_cast<double>(pos_ok) / static_cast<double>(pos_sel);
      if (neg_sel > 0) r.negative_precision = static_cast<double>(neg_ok) / static_cast<double>(neg_sel);
      have_final = true;
    }
  }
  if (!have_header) throw IoError("trace '" + path + "' has no header record");
  if (!have_final) throw IoError("trace '" + path + "' has no final record (run incomplete?)");
  return r;
}

Comparison compare_runs(const std::vector<TraceResult>& traces) {
  if (traces.size() < 2) throw std::invalid_argument("compare needs at least two traces");

  Comparison cmp;
  for (const auto& t : traces) {
    ComparisonArm* home = nullptr;
    for (auto& arm : cmp.arms) {
      const bool label_match = arm.label == t.label || arm.label.rfind(t.label + "#", 0) == 0;
      const bool seed_taken = std::any_of(arm.runs.begin(), arm.runs.end(), [&](const auto& r) { return r.seed == t.seed; });
      if (label_match && !seed_taken) {
        home = &arm;
        break;
      }
    }
    if (!home) {
      std::size_t same = std::count_if(cmp.arms.begin(), cmp.arms.end(), [&](const auto& a) {
        return a.label == t.label || a.label.rfind(t.label + "#", 0) == 0;
      });
      cmp.arms.push_back({});
      home = &cmp.arms.back();
      home->label = same == 0 ? t.label : t.label + "#" + std::to_string(same + 1);
    }
    home->runs.push_back(t);
  }
  for (auto& arm : cmp.arms) {
    std::sort(arm.runs.begin(), arm.runs.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });
  }

  const ComparisonArm& ref = cmp.arms.front();
  cmp.reference = ref.label;
  std::map<std::uint64_t, const TraceResult*> ref_by_seed;
  for (const auto& r : ref.runs) ref_by_seed[r.seed] = &r;

  for (auto& arm : cmp.arms) {
    if (arm.runs.size() != ref.runs.size()) {
      throw MismatchError("arm '" + arm.label + "' has " + std::to_string(arm.runs.size()) +
                          " runs but reference arm '" + ref.label + "' has " + std::to_string(ref.runs.size()));
    }
    std::vector<std::optional<double>> maps, aucs, pos, neg, deltas;
    for (const auto& r : arm.runs) {
      const auto it = ref_by_seed.find(r.seed);
      if (it == ref_by_seed.end()) {
        throw MismatchError("seed " + std::to_string(r.seed) + " of '" + r.path + "' is absent from reference arm '" +
                            ref.label + "'");
      }
      if (r.dataset != it->second->dataset) {
        throw MismatchError("trace '" + r.path + "' was generated from different data than '" + it->second->path + "'");
      }
      maps.push_back(r.mean_ap);
      aucs.push_back(r.macro_auc);
      pos.push_back(r.positive_precision);
      neg.push_back(r.negative_precision);

      ArmSeedDelta d;
      d.seed = r.seed;
      if (r.mean_ap && it->second->mean_ap) d.map_delta = *r.mean_ap - *it->second->mean_ap;
      if (r.macro_auc && it->second->macro_auc) d.auc_delta = *r.macro_auc - *it->second->macro_auc;
      if (d.map_delta && *d.map_delta >= 0.0) ++arm.seeds_not_worse;
      deltas.push_back(d.map_delta);
      arm.deltas.push_back(d);
    }
    arm.mean_map = mean_of(maps);
    arm.mean_auc = mean_of(aucs);
    arm.mean_positive_precision = mean_of(pos);
    arm.mean_negative_precision = mean_of(neg);
    arm.mean_map_delta = mean_of(deltas);
  }
  return cmp;
}

std::string comparison_to_json(const Comparison& cmp) {
  json j;
  j["reference"] = cmp.reference;
  j["arms"] = json::array();
  for (const auto& arm : cmp.arms) {
    json a;
    a["label"] = arm.label;
    a["method"] = arm.runs.front().method;
    a["mean_map"] = opt(arm.mean_map);
    a["mean_auc"] = opt(arm.mean_auc);
    a["mean_positive_precision"] = opt(arm.mean_positive_precision);
    a["mean_negative_precision"] = opt(arm.mean_negative_precision);
    a["mean_map_delta"] = opt(arm.mean_map_delta);
    a["seeds_not_worse"] = arm.seeds_not_worse;
    a["runs"] = json::array();
    for (std::size_t i = 0; i < arm.runs.size(); ++i) {
      const auto& r = arm.runs[i];
      a["runs"].push_back({{"seed", r.seed},
                           {"path", r.path},
                           {"map", opt(r.mean_ap)},
                           {"macro_auc", opt(r.macro_auc)},
                           {"positive_precision", opt(r.positive_precision)},
                           {"negative_precision", opt(r.negative_precision)},
                           {"map_delta", opt(arm.deltas[i].map_delta)},
                           {"auc_delta", opt(arm.deltas[i].auc_delta)}});
    }
    j["arms"].push_back(std::move(a));
  }
  return j.dump(2);
}

std::string comparison_to_text(const Comparison& cmp) {
  std::ostringstream out;
  out << "reference: " << cmp.reference << "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %8s %8s %8s %8s %10s %s\n", "arm", "mAP", "AUC", "pos-prec", "neg-prec",
                "dmAP", "not-worse");
  out << line;
  for (const auto& arm : cmp.arms) {
    std::snprintf(line, sizeof(line), "%-24s %8s %8s %8s %8s %10s %zu/%zu\n", arm.label.c_str(),
                  show(arm.mean_map).c_str(), show(arm.mean_auc).c_str(), show(arm.mean_positive_precision).c_str(),
                  show(arm.mean_negative_precision).c_str(), show(arm.mean_map_delta, true).c_str(),
                  arm.seeds_not_worse, arm.runs.size());
    out << line;
    for (const auto& d : arm.deltas) {
      out << "    seed " << d.seed << ": dmAP " << show(d.map_delta, true) << "  dAUC " << show(d.auc_delta, true)
          << "\n";
    }
  }
  return out.str();
}

}  // namespace pmatch
