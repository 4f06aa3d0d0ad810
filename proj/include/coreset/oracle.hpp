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

#ifndef CORESET_ORACLE_HPP_
#define CORESET_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coreset/errors.hpp"
#include "coreset/instance.hpp"
#include "coreset/item_set.hpp"

namespace coreset {

inline double Value(const SubmodularInstance& inst, const ItemSet& s) {
  const double v = inst.Evaluate(s.ids());
  inst.stats().AddValue();
  return v;
}

inline double Marginal(const SubmodularInstance& inst, ItemId x,
                       const ItemSet& s) {
  inst.CheckItem(x);
  for (ItemId y : s) inst.CheckItem(y);
  inst.stats().AddMarginal();
  if (s.Contains(x)) return 0;
  IncrementalState state(inst);
  for (ItemId y : s) state.Add(y);
  return state.GainUncounted(x);
}

// C(n, k) as a double, saturating at +inf is fine for guard checks.
inline double Binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  double r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

inline constexpr double kEnumerationLimit = 1e7;

inline bool BruteForceAllowed(size_t ground_size, size_t k) {
  const size_t kk = std::min(k, ground_size);
  return ground_size <= 30 || Binomial(ground_size, kk) <= kEnumerationLimit;
}

struct BestK {
  ItemSet set;
  double value = 0;
};

namespace internal {

// Depth-first enumeration in lexicographic order of sorted id sequences.
// Only a strictly larger value replaces the incumbent, so the first
// maximizer met (the lexicographically smallest) wins.
class SubsetSearch {
 public:
  SubsetSearch(const SubmodularInstance& inst, std::vector<ItemId> pool,
               size_t k, bool exact_size)
      : state_(inst), pool_(std::move(pool)), k_(k), exact_(exact_size) {}

  BestK Run() {
    best_value_ = -1;
    Visit(0);
    BestK out;
    out.set = ItemSet(best_);
    out.value = best_value_ < 0 ? 0 : best_value_;
    return out;
  }

 private:
  void Visit(size_t start) {
    if (!exact_ || current_.size() == k_) {
      if (state_.value() > best_value_) {
        best_value_ = state_.value();
        best_ = current_;
      }
    }
    if (current_.size() == k_) return;
    const size_t need = exact_ ? k_ - current_.size() : 1;
    for (size_t i = start; i + need <= pool_.size(); ++i) {
      state_.Add(pool_[i]);
      current_.push_back(pool_[i]);
      Visit(i + 1);
      current_.pop_back();
      state_.Remove(pool_[i]);
    }
  }

  IncrementalState state_;
  std::vector<ItemId> pool_;
  size_t k_;
  bool exact_;
  std::vector<ItemId> current_;
  std::vector<ItemId> best_;
  double best_value_ = -1;
};

}  // namespace internal

// Exact max of f over subsets of `ground` with at most k items. For
// monotone f only subsets of size exactly min(k, |ground|) are searched;
// one of them is always a maximizer. Not counted as oracle calls: this is
// the reference, not part of any measured algorithm.
inline BestK BruteForceBestK(const SubmodularInstance& inst,
                             const ItemSet& ground, size_t k) {
  for (ItemId x : ground) inst.CheckItem(x);
  if (!BruteForceAllowed(ground.size(), k)) {
    throw CapacityError("brute force over C(" + std::to_string(ground.size()) +
                        ", " + std::to_string(k) + ") subsets refused");
  }
  const size_t kk = std::min(k, ground.size());
  if (kk == 0) return {};
  std::vector<ItemId> pool(ground.begin(), ground.end());
  return internal::SubsetSearch(inst, std::move(pool), kk, inst.monotone())
      .Run();
}

// f_k(ground) for measurement. For coverage, copies of one element list
// are interchangeable, so the search runs over distinct profiles only.
// Returns nullopt when even the reduced search is too large.
inline std::optional<double> ExactBestKValue(const SubmodularInstance& inst,
                                             const ItemSet& ground,
                                             size_t k) {
  if (!inst.is_coverage()) {
    if (!BruteForceAllowed(ground.size(), k)) return std::nullopt;
    return BruteForceBestK(inst, ground, k).value;
  }
  std::vector<ItemId> reps;
  std::vector<char> seen(inst.profile_count(), 0);
  for (ItemId x : ground) {
    inst.CheckItem(x);
    if (!seen[inst.profile(x)]) {
      seen[inst.profile(x)] = 1;
      reps.push_back(x);
    }
  }
  const size_t kk = std::min(k, reps.size());
  if (kk == 0) return 0.0;
  if (Binomial(reps.size(), kk) > kEnumerationLimit) return std::nullopt;
  return internal::SubsetSearch(inst, std::move(reps), kk, true).Run().value;
}

}  // namespace coreset

#endif  // CORESET_ORACLE_HPP_
