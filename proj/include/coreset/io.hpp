// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CORESET_IO_HPP_
#define CORESET_IO_HPP_

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "coreset/clustering.hpp"
#include "coreset/errors.hpp"
#include "coreset/instance.hpp"
#include "coreset/instances.hpp"
#include "coreset/pipeline.hpp"

namespace coreset {

using OrderedJson = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// Shortest text that reads back to the same double.
inline std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write to a sibling temp file, then rename over the target.
inline void WriteFileAtomic(const std::filesystem::path& path,
                            const std::string& data) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << data;
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Compact JSON, written by hand so huge instances never need a DOM.
inline std::string InstanceToJson(const SubmodularInstance& inst) {
  std::string out;
  auto num = [&out](uint64_t v) { out += std::to_string(v); };
  if (inst.is_coverage()) {
    out += "{\"kind\":\"coverage\",\"universe\":";
    num(inst.universe());
    out += ",\"sets\":[";
    for (ItemId x = 0; x < inst.size(); ++x) {
      if (x) out += ',';
      out += '[';
      bool first = true;
      for (uint32_t e : inst.elements(x)) {
        if (!first) out += ',';
        first = false;
        num(e);
      }
      out += ']';
    }
    out += ']';
    if (!inst.weights().empty()) {
      out += ",\"weights\":[";
      for (size_t i = 0; i < inst.weights().size(); ++i) {
        if (i) out += ',';
        num(static_cast<uint64_t>(inst.weights()[i]));
      }
      out += ']';
    }
    out += "}\n";
    return out;
  }
  out += "{\"kind\":\"cut\",\"n\":";
  num(inst.size());
  out += ",\"arcs\":[";
  for (size_t i = 0; i < inst.arcs().size(); ++i) {
    const Arc& a = inst.arcs()[i];
    if (i) out += ',';
    out += '[';
    num(a.from);
    out += ',';
    num(a.to);
    out += ',';
    num(static_cast<uint64_t>(a.weight));
    out += ']';
  }
  out += "]}\n";
  return out;
}

namespace internal {

template <typename T>
T JsonUint(const nlohmann::json& j, const char* what) {
  if (!j.is_number_integer() || j.get<int64_t>() < 0) {
    throw InputError(std::string("expected a non-negative integer for ") +
                     what);
  }
  const uint64_t v = j.get<uint64_t>();
  if (v > std::numeric_limits<T>::max()) {
    throw InputError(std::string("value too large for ") + what);
  }
  return static_cast<T>(v);
}

}  // namespace internal

inline SubmodularInstance InstanceFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind")) {
    throw InputError("instance JSON: missing kind");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "coverage" || kind == "weighted-coverage") {
    const auto u = internal::JsonUint<uint32_t>(j.at("universe"), "universe");
    std::vector<std::vector<uint32_t>> sets;
    for (const auto& s : j.at("sets")) {
      std::vector<uint32_t> elems;
      for (const auto& e : s) elems.push_back(internal::JsonUint<uint32_t>(e, "element"));
      sets.push_back(std::move(elems));
    }
    std::vector<int64_t> weights;
    if (j.contains("weights")) {
      for (const auto& w : j.at("weights")) {
        weights.push_back(internal::JsonUint<int64_t>(w, "weight"));
      }
      if (weights.empty() && u > 0) {
        throw InputError("instance JSON: empty weights list");
      }
    }
    return SubmodularInstance::Coverage(u, sets, std::move(weights));
  }
  if (kind == "cut") {
    const auto n = internal::JsonUint<uint32_t>(j.at("n"), "n");
    std::vector<Arc> arcs;
    for (const auto& a : j.at("arcs")) {
      if (!a.is_array() || a.size() != 3) {
        throw InputError("instance JSON: arcs are [from, to, weight]");
      }
      arcs.push_back({internal::JsonUint<uint32_t>(a[0], "arc from"),
                      internal::JsonUint<uint32_t>(a[1], "arc to"),
                      internal::JsonUint<int64_t>(a[2], "arc weight")});
    }
    return SubmodularInstance::DirectedCut(n, std::move(arcs));
  }
  throw InputError("instance JSON: unknown kind " + kind);
}

inline OrderedJson MetaToJson(const GeneratedInstance& g) {
  OrderedJson j;
  j["format_version"] = kFormatVersion;
  j["generator"] = g.generator;
  j["params"] = OrderedJson::parse(g.params.dump());
  j["kind"] = KindName(g.instance.kind());
  j["n"] = g.instance.size();
  j["k"] = g.k;
  if (g.opt_value) {
    j["opt_value"] = *g.opt_value;
  } else {
    j["opt_value"] = "unknown";
  }
  if (g.opt_set) {
    j["opt_set"] = std::vector<ItemId>(g.opt_set->begin(), g.opt_set->end());
  }
  if (!g.groups.empty()) {
    OrderedJson groups = OrderedJson::object();
    for (const auto& [name, ids] : g.groups) groups[name] = ids;
    j["groups"] = groups;
  }
  if (g.fixed_clustering) {
    j["fixed_clustering"] = {{"m", g.fixed_clustering->m},
                             {"assignment", g.fixed_clustering->assignment}};
  }
  return j;
}

// Reads the sidecar back into the generator fields of `g`.
inline void ApplyMeta(const std::string& text, GeneratedInstance& g) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("meta JSON: ") + e.what());
  }
  g.generator = j.value("generator", "");
  if (j.contains("params")) g.params = j.at("params");
  g.k = j.value("k", size_t{1});
  g.opt_value.reset();
  if (j.contains("opt_value") && j.at("opt_value").is_number()) {
    g.opt_value = j.at("opt_value").get<double>();
  }
  if (j.contains("opt_set")) {
    g.opt_set = ItemSet(j.at("opt_set").get<std::vector<ItemId>>());
  }
  if (j.contains("groups")) {
    for (const auto& [name, ids] : j.at("groups").items()) {
      g.groups[name] = ids.get<std::vector<ItemId>>();
    }
  }
  if (j.contains("fixed_clustering")) {
    const auto& fc = j.at("fixed_clustering");
    g.fixed_clustering = ClusteringFromAssignment(
        fc.at("m").get<uint32_t>(),
        fc.at("assignment").get<std::vector<std::vector<uint32_t>>>());
  }
}

inline OrderedJson SelectionToJson(const Selection& s) {
  OrderedJson j;
  j["items"] = s.items;
  j["gains"] = s.gains;
  j["value"] = s.value;
  return j;
}

inline OrderedJson ConfigToJson(const PipelineConfig& c) {
  OrderedJson j;
  j["k"] = c.k;
  j["k_prime"] = c.k_prime;
  j["m"] = c.m;
  j["C"] = c.C;
  j["core_alg"] = CoreAlgName(c.core);
  if (c.core == CoreAlg::kThreshold) j["epsilon"] = c.epsilon;
  j["post"] = PostAlgName(c.post);
  j["seed"] = c.seeds.master_seed();
  return j;
}

// Wall time is deliberately left out: reports must be byte-reproducible.
inline OrderedJson ReportToJson(const RunReport& r,
                                const PipelineConfig& config) {
  OrderedJson j;
  j["format_version"] = kFormatVersion;
  j["config"] = ConfigToJson(config);
  OrderedJson machines = OrderedJson::array();
  for (const auto& s : r.per_machine) machines.push_back(SelectionToJson(s));
  j["per_machine"] = machines;
  j["union_size"] = r.union_size;
  j["final"] = SelectionToJson(r.final);
  j["best_single_machine"] = r.best_single_machine;
  j["opt_value"] = r.opt_value ? OrderedJson(*r.opt_value) : OrderedJson();
  j["ratio"] = r.ratio ? OrderedJson(*r.ratio) : OrderedJson();
  if (r.coreset_value) {
    j["coreset_value"] = *r.coreset_value;
    j["coreset_method"] = r.coreset_method;
    j["coreset_ratio"] =
        r.coreset_ratio ? OrderedJson(*r.coreset_ratio) : OrderedJson();
  }
  j["value_calls"] = r.value_calls;
  j["marginal_calls"] = r.marginal_calls;
  if (r.pseudo) {
    j["pseudo_greedy"] = {{"v_size", r.pseudo->v.size()},
                          {"v_value", r.pseudo->v_value},
                          {"best_k2", r.pseudo->best_k2},
                          {"best_mask", r.pseudo->best_mask},
                          {"greedy_value", r.pseudo->greedy_value},
                          {"used_greedy", r.pseudo->used_greedy},
                          {"candidates", r.pseudo->candidates}};
  }
  return j;
}

inline const char* kRunCsvHeader =
    "format_version,seed,k,k_prime,m,C,core_alg,post,final_value,"
    "best_single_machine,opt_value,ratio,coreset_value,coreset_method,"
    "coreset_ratio,union_size,value_calls,marginal_calls";

inline std::string OptionalCell(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

inline std::string ReportCsvRow(const RunReport& r,
                                const PipelineConfig& c) {
  std::ostringstream out;
  out << kFormatVersion << ',' << c.seeds.master_seed() << ',' << c.k << ','
      << c.k_prime << ',' << c.m << ',' << c.C << ',' << CoreAlgName(c.core)
      << ',' << PostAlgName(c.post) << ',' << FormatDouble(r.final.value)
      << ',' << FormatDouble(r.best_single_machine) << ','
      << OptionalCell(r.opt_value) << ',' << OptionalCell(r.ratio) << ','
      << OptionalCell(r.coreset_value) << ',' << r.coreset_method << ','
      << OptionalCell(r.coreset_ratio) << ',' << r.union_size << ','
      << r.value_calls << ',' << r.marginal_calls;
  return out.str();
}

}  // namespace coreset

#endif  // CORESET_IO_HPP_
