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

#ifndef CORESET_INSTANCE_HPP_
#define CORESET_INSTANCE_HPP_

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "coreset/errors.hpp"
#include "coreset/item_set.hpp"

namespace coreset {

enum class InstanceKind { kCoverage, kWeightedCoverage, kDirectedCut };

inline const char* KindName(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kCoverage:
      return "coverage";
    case InstanceKind::kWeightedCoverage:
      return "weighted-coverage";
    case InstanceKind::kDirectedCut:
      return "cut";
  }
  return "?";
}

// Largest weight accepted anywhere. Keeps every sum exact in a double.
inline constexpr int64_t kMaxWeight = int64_t{1} << 30;

struct Arc {
  ItemId from = 0;
  ItemId to = 0;
  int64_t weight = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
};

// Oracle call counters. Relaxed atomics: only the totals matter.
class OracleStats {
 public:
  OracleStats() = default;
  OracleStats(const OracleStats& other)
      : value_calls_(other.value_calls()),
        marginal_calls_(other.marginal_calls()) {}
  OracleStats& operator=(const OracleStats& other) {
    value_calls_.store(other.value_calls(), std::memory_order_relaxed);
    marginal_calls_.store(other.marginal_calls(), std::memory_order_relaxed);
    return *this;
  }

  uint64_t value_calls() const {
    return value_calls_.load(std::memory_order_relaxed);
  }
  uint64_t marginal_calls() const {
    return marginal_calls_.load(std::memory_order_relaxed);
  }
  uint64_t total() const { return value_calls() + marginal_calls(); }

  void AddValue(uint64_t n = 1) {
    value_calls_.fetch_add(n, std::memory_order_relaxed);
  }
  void AddMarginal(uint64_t n = 1) {
    marginal_calls_.fetch_add(n, std::memory_order_relaxed);
  }
  void Reset() {
    value_calls_.store(0, std::memory_order_relaxed);
    marginal_calls_.store(0, std::memory_order_relaxed);
  }

 private:
  std::atomic<uint64_t> value_calls_{0};
  std::atomic<uint64_t> marginal_calls_{0};
};

// A ground set [0, n) with a submodular set function over it. Immutable
// after construction apart from the call counters.
//
// Coverage items are stored by profile: items with the same element list
// (same order included) share one stored list. Hardness instances contain
// thousands of copies of a few sets, so this matters.
class SubmodularInstance {
 public:
  SubmodularInstance() = default;

  // Empty `weights` means plain coverage; otherwise one weight per element.
  static SubmodularInstance Coverage(uint32_t universe,
                                     const std::vector<std::vector<uint32_t>>& sets,
                                     std::vector<int64_t> weights = {}) {
    std::vector<std::vector<uint32_t>> profiles;
    std::vector<uint32_t> profile_of(sets.size());
    std::unordered_map<uint64_t, std::vector<uint32_t>> by_hash;
    for (size_t i = 0; i < sets.size(); ++i) {
      const uint64_t h = HashList(sets[i]);
      auto& bucket = by_hash[h];
      uint32_t id = UINT32_MAX;
      for (uint32_t p : bucket) {
        if (profiles[p] == sets[i]) {
          id = p;
          break;
        }
      }
      if (id == UINT32_MAX) {
        id = static_cast<uint32_t>(profiles.size());
        profiles.push_back(sets[i]);
        bucket.push_back(id);
      }
      profile_of[i] = id;
    }
    return CoverageFromProfiles(universe, std::move(profiles),
                                std::move(profile_of), std::move(weights));
  }

  // Profiles may repeat; they are used as given.
  static SubmodularInstance CoverageFromProfiles(
      uint32_t universe, std::vector<std::vector<uint32_t>> profiles,
      std::vector<uint32_t> profile_of, std::vector<int64_t> weights = {}) {
    SubmodularInstance inst;
    inst.kind_ = weights.empty() ? InstanceKind::kCoverage
                                 : InstanceKind::kWeightedCoverage;
    inst.n_ = static_cast<uint32_t>(profile_of.size());
    inst.universe_ = universe;
    if (!weights.empty() && weights.size() != universe) {
      throw InputError("weights length " + std::to_string(weights.size()) +
                       " != universe " + std::to_string(universe));
    }
    for (int64_t w : weights) {
      if (w < 0 || w > kMaxWeight) {
        throw InputError("element weight out of range: " + std::to_string(w));
      }
    }
    std::vector<uint32_t> seen(universe, UINT32_MAX);
    for (uint32_t p = 0; p < profiles.size(); ++p) {
      for (uint32_t e : profiles[p]) {
        if (e >= universe) {
          throw InputError("element " + std::to_string(e) +
                           " outside universe of size " +
                           std::to_string(universe));
        }
        if (seen[e] == p) {
          throw InputError("duplicate element " + std::to_string(e) +
                           " in one set");
        }
        seen[e] = p;
      }
    }
    for (uint32_t p : profile_of) {
      if (p >= profiles.size()) throw InputError("profile index out of range");
    }
    inst.profiles_ = std::move(profiles);
    inst.profile_of_ = std::move(profile_of);
    inst.weights_ = std::move(weights);
    return inst;
  }

  static SubmodularInstance DirectedCut(uint32_t n, std::vector<Arc> arcs) {
    SubmodularInstance inst;
    inst.kind_ = InstanceKind::kDirectedCut;
    inst.n_ = n;
    for (const Arc& a : arcs) {
      if (a.from >= n || a.to >= n) {
        throw InputError("arc endpoint out of range");
      }
      if (a.from == a.to) throw InputError("self-loop on node " +
                                           std::to_string(a.from));
      if (a.weight < 0 || a.weight > kMaxWeight) {
        throw InputError("arc weight out of range: " +
                         std::to_string(a.weight));
      }
    }
    inst.out_start_.assign(n + 1, 0);
    inst.in_start_.assign(n + 1, 0);
    for (const Arc& a : arcs) {
      ++inst.out_start_[a.from + 1];
      ++inst.in_start_[a.to + 1];
    }
    for (uint32_t i = 0; i < n; ++i) {
      inst.out_start_[i + 1] += inst.out_start_[i];
      inst.in_start_[i + 1] += inst.in_start_[i];
    }
    inst.out_adj_.resize(arcs.size());
    inst.in_adj_.resize(arcs.size());
    std::vector<uint32_t> out_fill(inst.out_start_.begin(),
                                   inst.out_start_.end() - 1);
    std::vector<uint32_t> in_fill(inst.in_start_.begin(),
                                  inst.in_start_.end() - 1);
    for (const Arc& a : arcs) {
      inst.out_adj_[out_fill[a.from]++] = {a.to, a.weight};
      inst.in_adj_[in_fill[a.to]++] = {a.from, a.weight};
    }
    inst.arcs_ = std::move(arcs);
    inst.profile_of_.resize(n);
    for (uint32_t i = 0; i < n; ++i) inst.profile_of_[i] = i;
    return inst;
  }

  InstanceKind kind() const { return kind_; }
  bool is_coverage() const { return kind_ != InstanceKind::kDirectedCut; }
  bool monotone() const { return is_coverage(); }
  uint32_t size() const { return n_; }
  uint32_t universe() const { return universe_; }
  ItemSet ground() const { return ItemSet::Range(n_); }

  std::span<const uint32_t> elements(ItemId x) const {
    return profiles_[profile_of_[x]];
  }
  uint32_t profile(ItemId x) const { return profile_of_[x]; }
  uint32_t profile_count() const {
    return is_coverage() ? static_cast<uint32_t>(profiles_.size()) : n_;
  }
  const std::vector<std::vector<uint32_t>>& profiles() const {
    return profiles_;
  }
  const std::vector<uint32_t>& profile_of() const { return profile_of_; }
  const std::vector<int64_t>& weights() const { return weights_; }
  double element_weight(uint32_t e) const {
    return weights_.empty() ? 1.0 : static_cast<double>(weights_[e]);
  }
  const std::vector<Arc>& arcs() const { return arcs_; }

  struct Edge {
    ItemId other;
    int64_t weight;
  };
  std::span<const Edge> out_edges(ItemId x) const {
    return {out_adj_.data() + out_start_[x], out_start_[x + 1] - out_start_[x]};
  }
  std::span<const Edge> in_edges(ItemId x) const {
    return {in_adj_.data() + in_start_[x], in_start_[x + 1] - in_start_[x]};
  }

  OracleStats& stats() const { return stats_; }

  void CheckItem(ItemId x) const {
    if (x >= n_) {
      throw InputError("item id " + std::to_string(x) +
                       " out of range for ground set of size " +
                       std::to_string(n_));
    }
  }

  // f(s) from scratch. Does not touch the counters.
  double Evaluate(std::span<const ItemId> s) const {
    for (ItemId x : s) CheckItem(x);
    if (is_coverage()) {
      std::vector<char> covered(universe_, 0);
      double total = 0;
      for (ItemId x : s) {
        for (uint32_t e : elements(x)) {
          if (!covered[e]) {
            covered[e] = 1;
            total += element_weight(e);
          }
        }
      }
      return total;
    }
    std::vector<char> in(n_, 0);
    for (ItemId x : s) in[x] = 1;
    double total = 0;
    for (ItemId x = 0; x < n_; ++x) {
      if (!in[x]) continue;
      for (const Edge& e : out_edges(x)) {
        if (!in[e.other]) total += static_cast<double>(e.weight);
      }
    }
    return total;
  }

 private:
  static uint64_t HashList(const std::vector<uint32_t>& v) {
    uint64_t h = 0xcbf29ce484222325ULL ^ v.size();
    for (uint32_t e : v) {
      h ^= e;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  InstanceKind kind_ = InstanceKind::kCoverage;
  uint32_t n_ = 0;
  uint32_t universe_ = 0;
  std::vector<std::vector<uint32_t>> profiles_;
  std::vector<uint32_t> profile_of_;
  std::vector<int64_t> weights_;
  std::vector<Arc> arcs_;
  std::vector<uint32_t> out_start_, in_start_;
  std::vector<Edge> out_adj_, in_adj_;
  mutable OracleStats stats_;
};

// Incremental f over a growing (or shrinking) set. Gain() is the counted
// oracle access used by the selection algorithms; GainUncounted() is for
// reference computations that are not part of a measured run.
class IncrementalState {
 public:
  explicit IncrementalState(const SubmodularInstance& inst)
      : inst_(&inst), in_(inst.size(), 0) {
    if (inst.is_coverage()) cover_.assign(inst.universe(), 0);
  }

  const SubmodularInstance& instance() const { return *inst_; }
  double value() const { return value_; }
  size_t size() const { return members_; }
  bool Contains(ItemId x) const { return in_[x] != 0; }

  double Gain(ItemId x) const {
    inst_->stats().AddMarginal();
    return GainUncounted(x);
  }

  double GainUncounted(ItemId x) const {
    if (in_[x]) return 0;
    double g = 0;
    if (inst_->is_coverage()) {
      for (uint32_t e : inst_->elements(x)) {
        if (cover_[e] == 0) g += inst_->element_weight(e);
      }
      return g;
    }
    for (const auto& e : inst_->out_edges(x)) {
      if (!in_[e.other]) g += static_cast<double>(e.weight);
    }
    for (const auto& e : inst_->in_edges(x)) {
      if (in_[e.other]) g -= static_cast<double>(e.weight);
    }
    return g;
  }

  // Adds x and returns its gain. Adding a member is a no-op.
  double Add(ItemId x) {
    if (in_[x]) return 0;
    const double g = GainUncounted(x);
    in_[x] = 1;
    ++members_;
    if (inst_->is_coverage()) {
      for (uint32_t e : inst_->elements(x)) ++cover_[e];
    }
    value_ += g;
    return g;
  }

  void Remove(ItemId x) {
    if (!in_[x]) return;
    in_[x] = 0;
    --members_;
    if (inst_->is_coverage()) {
      for (uint32_t e : inst_->elements(x)) --cover_[e];
    }
    value_ -= GainUncounted(x);
  }

 private:
  const SubmodularInstance* inst_;
  std::vector<uint8_t> in_;
  std::vector<uint32_t> cover_;
  size_t members_ = 0;
  double value_ = 0;
};

}  // namespace coreset

#endif  // CORESET_INSTANCE_HPP_
