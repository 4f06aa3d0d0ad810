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

#ifndef CORESET_PIPELINE_HPP_
#define CORESET_PIPELINE_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "coreset/algorithms.hpp"
#include "coreset/clustering.hpp"
#include "coreset/errors.hpp"
#include "coreset/instance.hpp"
#include "coreset/item_set.hpp"
#include "coreset/oracle.hpp"
#include "coreset/parallel.hpp"
#include "coreset/random.hpp"

namespace coreset {

enum class CoreAlg { kGreedy, kLazy, kThreshold, kRandomGreedy, kSmall };
enum class PostAlg { kGreedy, kPseudoGreedy, kRandomGreedy };

inline const char* CoreAlgName(CoreAlg a) {
  switch (a) {
    case CoreAlg::kGreedy: return "greedy";
    case CoreAlg::kLazy: return "lazy";
    case CoreAlg::kThreshold: return "threshold";
    case CoreAlg::kRandomGreedy: return "random_greedy";
    case CoreAlg::kSmall: return "small";
  }
  return "?";
}

inline const char* PostAlgName(PostAlg a) {
  switch (a) {
    case PostAlg::kGreedy: return "greedy";
    case PostAlg::kPseudoGreedy: return "pseudo_greedy";
    case PostAlg::kRandomGreedy: return "random_greedy";
  }
  return "?";
}

inline CoreAlg ParseCoreAlg(const std::string& s) {
  if (s == "greedy") return CoreAlg::kGreedy;
  if (s == "lazy") return CoreAlg::kLazy;
  if (s == "threshold") return CoreAlg::kThreshold;
  if (s == "random_greedy") return CoreAlg::kRandomGreedy;
  if (s == "small") return CoreAlg::kSmall;
  throw InputError("unknown core algorithm: " + s);
}

inline PostAlg ParsePostAlg(const std::string& s) {
  if (s == "greedy") return PostAlg::kGreedy;
  if (s == "pseudo_greedy") return PostAlg::kPseudoGreedy;
  if (s == "random_greedy") return PostAlg::kRandomGreedy;
  throw InputError("unknown post-processing algorithm: " + s);
}

// ceil((2*sqrt(2)+1) * k), the per-machine output size for PseudoGreedy.
inline size_t DkCeil(size_t k) {
  return static_cast<size_t>(
      std::ceil((2.0 * std::sqrt(2.0) + 1.0) * static_cast<double>(k)));
}

struct PipelineConfig {
  size_t k = 1;
  size_t k_prime = 1;
  uint32_t m = 1;
  uint32_t C = 1;
  CoreAlg core = CoreAlg::kGreedy;
  double epsilon = 0.1;  // threshold greedy only
  PostAlg post = PostAlg::kGreedy;
  SeedTree seeds;
  // f_k of the union of core-sets is measured when the optimum is known.
  bool measure_coreset = true;

  void Validate() const {
    if (k < 1) throw InputError("k must be >= 1");
    if (k_prime < 1) throw InputError("k_prime must be >= 1");
    if (m < 1) throw InputError("m must be >= 1");
    if (C < 1 || C > m) throw InputError("need 1 <= C <= m");
    if (post == PostAlg::kPseudoGreedy && k_prime < DkCeil(k)) {
      throw InputError("pseudo_greedy needs k_prime >= " +
                       std::to_string(DkCeil(k)));
    }
    if (core == CoreAlg::kSmall && k_prime > k) {
      throw InputError("the small core-set algorithm needs k_prime <= k");
    }
    if (core == CoreAlg::kThreshold && !(epsilon > 0 && epsilon <= 0.5)) {
      throw InputError("threshold epsilon must be in (0, 0.5]");
    }
  }
};

// Selection for a fixed item sequence, gains recomputed in that order.
inline Selection SelectionOf(const SubmodularInstance& inst,
                             const std::vector<ItemId>& items) {
  Selection s;
  IncrementalState state(inst);
  for (ItemId x : items) internal::Push(s, x, state.Add(x));
  return s;
}

// Uniform random subset of `items` with min(size, |items|) elements, in
// the order drawn.
inline std::vector<ItemId> RandomSubset(const std::vector<ItemId>& items,
                                        size_t size, CounterRng& rng) {
  const size_t take = std::min(size, items.size());
  const auto picks = SampleWithoutReplacement(
      static_cast<uint32_t>(items.size()), static_cast<uint32_t>(take), rng);
  std::vector<ItemId> out;
  out.reserve(take);
  for (uint32_t p : picks) out.push_back(items[p]);
  return out;
}

struct SmallCoresetResult {
  Selection output;
  Selection greedy;          // S_l
  std::vector<ItemId> high;  // S'_l
  double tau = 0;
  bool took_greedy_branch = false;
};

// Per-machine algorithm for core-sets smaller than k: greedy to k, keep
// the items that still add tau = f(S)/sqrt(k'k) on top of the kept ones
// (scanned in greedy order), then a coin picks which set to subsample.
inline SmallCoresetResult SmallCoresetMachine(const SubmodularInstance& inst,
                                              const ItemSet& t, size_t k,
                                              size_t k_prime,
                                              CounterRng& rng) {
  if (k_prime < 1 || k_prime > k) {
    throw InputError("small core-set needs 1 <= k_prime <= k");
  }
  SmallCoresetResult r;
  r.greedy = Greedy(inst, t, k);
  r.tau = r.greedy.value /
          std::sqrt(static_cast<double>(k_prime) * static_cast<double>(k));
  if (r.tau > 0) {
    IncrementalState state(inst);
    bool grew = true;
    while (grew) {
      grew = false;
      for (ItemId x : r.greedy.items) {
        if (state.Contains(x)) continue;
        if (state.Gain(x) >= r.tau) {
          state.Add(x);
          r.high.push_back(x);
          grew = true;
        }
      }
    }
  }
  r.took_greedy_branch = Bernoulli(rng, 0.5);
  const std::vector<ItemId>& source =
      r.took_greedy_branch ? r.greedy.items : r.high;
  r.output = SelectionOf(inst, RandomSubset(source, k_prime, rng));
  return r;
}

inline Selection RunCoreAlg(const SubmodularInstance& inst, const ItemSet& t,
                            const PipelineConfig& config, uint32_t machine) {
  switch (config.core) {
    case CoreAlg::kGreedy:
      return Greedy(inst, t, config.k_prime);
    case CoreAlg::kLazy:
      return LazyGreedy(inst, t, config.k_prime);
    case CoreAlg::kThreshold:
      return ThresholdGreedy(inst, t, config.k_prime, config.epsilon);
    case CoreAlg::kRandomGreedy: {
      CounterRng rng(config.seeds.Derive(SeedRole::kMachine, machine));
      return RandomGreedy(inst, t, config.k_prime, rng);
    }
    case CoreAlg::kSmall: {
      CounterRng rng(config.seeds.Derive(SeedRole::kMachine, machine));
      return SmallCoresetMachine(inst, t, config.k, config.k_prime, rng)
          .output;
    }
  }
  throw ContractError("unhandled core algorithm");
}

inline std::vector<Selection> RunCoresetPhase(const SubmodularInstance& inst,
                                              const Clustering& clustering,
                                              const PipelineConfig& config) {
  if (clustering.m != config.m) {
    throw InputError("clustering has " + std::to_string(clustering.m) +
                     " machines, config has " + std::to_string(config.m));
  }
  return ParallelMap(clustering.m, [&](size_t i) {
    return RunCoreAlg(inst, clustering.parts[i], config,
                      static_cast<uint32_t>(i));
  });
}

inline ItemSet UnionOf(const std::vector<Selection>& selections) {
  std::vector<ItemId> all;
  for (const auto& s : selections) {
    all.insert(all.end(), s.items.begin(), s.items.end());
  }
  return ItemSet(std::move(all));
}

namespace internal {

// Greedy continuation of a seed set over a candidate pool, grown one item
// at a time on demand. Lazy evaluation, same picks as plain greedy.
class GreedyExtension {
 public:
  GreedyExtension(const SubmodularInstance& inst, const ItemSet& seed,
                  const ItemSet& pool)
      : state_(inst) {
    for (ItemId x : seed) state_.Add(x);
    seed_value_ = state_.value();
    for (ItemId x : pool) {
      if (!state_.Contains(x)) heap_.push({state_.Gain(x), x, 0});
    }
  }

  // f(seed + first `count` additions); fewer if the pool runs out.
  double ValueAfter(size_t count) {
    while (added_.size() < count && Step()) {
    }
    const size_t c = std::min(count, added_.size());
    return c == 0 ? seed_value_ : values_[c - 1];
  }

  std::vector<ItemId> Additions(size_t count) {
    ValueAfter(count);
    return {added_.begin(),
            added_.begin() + std::min(count, added_.size())};
  }

 private:
  struct Entry {
    double bound;
    ItemId id;
    uint32_t step;
  };
  struct Lower {
    bool operator()(const Entry& a, const Entry& b) const {
      return Better(b.bound, b.id, a.bound, a.id);
    }
  };

  bool Step() {
    const uint32_t step = static_cast<uint32_t>(added_.size());
    while (!heap_.empty()) {
      Entry top = heap_.top();
      heap_.pop();
      if (top.step == step) {
        state_.Add(top.id);
        added_.push_back(top.id);
        values_.push_back(state_.value());
        return true;
      }
      top.bound = state_.Gain(top.id);
      top.step = step;
      heap_.push(top);
    }
    return false;
  }

  IncrementalState state_;
  double seed_value_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Lower> heap_;
  std::vector<ItemId> added_;
  std::vector<double> values_;
};

}  // namespace internal

struct PseudoGreedyResult {
  Selection final;
  std::vector<ItemId> v;  // the best candidate set
  double v_value = 0;
  size_t best_k2 = 0;
  uint32_t best_mask = 0;
  double greedy_value = 0;    // greedy(union, k)
  bool used_greedy = false;   // the greedy fallback beat the subsample
  size_t candidates = 0;
};

// Post-processor over the union of core-sets. Enumerates guesses k2 of the
// optimum's share that machine 1 holds, seeds with unions of blocks of
// machine 1's greedy prefix, completes each seed greedily, keeps the best
// candidate V and subsamples it to k items. The better of that sample and
// plain greedy(union, k) is returned.
inline PseudoGreedyResult PseudoGreedy(const SubmodularInstance& inst,
                                       const Selection& s1,
                                       const ItemSet& pool, size_t k,
                                       CounterRng& rng) {
  if (k < 1) throw InputError("pseudo_greedy needs k >= 1");
  PseudoGreedyResult r;
  // Candidates depend on (seed set, number of additions) only. A seed's
  // greedy continuation is shared by every candidate with that seed.
  std::map<std::vector<ItemId>, internal::GreedyExtension> extensions;
  bool have = false;
  std::vector<ItemId> best_seed;
  size_t best_count = 0;
  for (size_t k2 = 1; k2 <= k; ++k2) {
    const size_t k3 = 32 * ((k2 + 127) / 128);
    const size_t k1 = k - k2;
    std::vector<ItemId> blocks[8];
    for (size_t b = 0; b < 8; ++b) {
      for (size_t j = b * k3; j < (b + 1) * k3 && j < s1.items.size(); ++j) {
        blocks[b].push_back(s1.items[j]);
      }
    }
    for (uint32_t mask = 0; mask < 256; ++mask) {
      const size_t size_i = static_cast<size_t>(std::popcount(mask));
      // |I| <= 4 + k1/k3, compared without division.
      if (size_i > 4 && (size_i - 4) * k3 > k1) continue;
      std::vector<ItemId> seed;
      for (size_t b = 0; b < 8; ++b) {
        if (mask & (1u << b)) {
          seed.insert(seed.end(), blocks[b].begin(), blocks[b].end());
        }
      }
      std::sort(seed.begin(), seed.end());
      // Non-negative: the |I| bound above guarantees it.
      const size_t additions = k1 + 4 * k3 - size_i * k3;
      auto it = extensions.find(seed);
      if (it == extensions.end()) {
        it = extensions
                 .emplace(std::piecewise_construct, std::forward_as_tuple(seed),
                          std::forward_as_tuple(inst, ItemSet(seed), pool))
                 .first;
      }
      const double value = it->second.ValueAfter(additions);
      ++r.candidates;
      if (!have || value > r.v_value) {
        have = true;
        r.v_value = value;
        r.best_k2 = k2;
        r.best_mask = mask;
        best_seed = seed;
        best_count = additions;
      }
    }
  }
  r.v = best_seed;
  const auto extra = extensions.at(best_seed).Additions(best_count);
  r.v.insert(r.v.end(), extra.begin(), extra.end());
  const Selection sample = SelectionOf(inst, RandomSubset(r.v, k, rng));
  const Selection plain = Greedy(inst, pool, k);
  r.greedy_value = plain.value;
  r.used_greedy = plain.value > sample.value;
  r.final = r.used_greedy ? plain : sample;
  return r;
}

struct PostResult {
  Selection final;
  std::optional<PseudoGreedyResult> pseudo;
};

inline PostResult ComposeAndPost(const SubmodularInstance& inst,
                                 const std::vector<Selection>& selections,
                                 size_t k, PostAlg post,
                                 const SeedTree& seeds) {
  if (k < 1) throw InputError("k must be >= 1");
  const ItemSet pool = UnionOf(selections);
  PostResult out;
  CounterRng rng(seeds.Derive(SeedRole::kPostProcess, 0));
  switch (post) {
    case PostAlg::kGreedy:
      out.final = LazyGreedy(inst, pool, k);
      break;
    case PostAlg::kRandomGreedy:
      out.final = RandomGreedy(inst, pool, k, rng);
      break;
    case PostAlg::kPseudoGreedy: {
      static const Selection kEmpty;
      const Selection& s1 = selections.empty() ? kEmpty : selections[0];
      out.pseudo = PseudoGreedy(inst, s1, pool, k, rng);
      out.final = out.pseudo->final;
      break;
    }
  }
  return out;
}

struct RunReport {
  uint64_t seed = 0;
  std::vector<Selection> per_machine;
  size_t union_size = 0;
  Selection final;
  std::optional<double> opt_value;
  std::optional<double> ratio;
  double best_single_machine = 0;
  // f_k of the union of core-sets and how it was obtained
  // ("exact" or "greedy-lower-bound").
  std::optional<double> coreset_value;
  std::string coreset_method;
  std::optional<double> coreset_ratio;
  uint64_t value_calls = 0;
  uint64_t marginal_calls = 0;
  std::optional<PseudoGreedyResult> pseudo;
};

// f_k(pool) for reporting: exact when enumerable, else the greedy value
// (a lower bound). Uncounted.
inline std::pair<double, std::string> MeasureBestK(
    const SubmodularInstance& inst, const ItemSet& pool, size_t k) {
  if (auto exact = ExactBestKValue(inst, pool, k)) {
    return {*exact, "exact"};
  }
  const OracleStats before = inst.stats();
  const double v = LazyGreedy(inst, pool, k).value;
  inst.stats() = before;
  return {v, "greedy-lower-bound"};
}

struct BestKBounds {
  double lower = 0;  // f of the greedy k-set
  double upper = 0;
};

// Two-sided bounds on f_k(pool) for monotone f, uncounted. For every greedy
// prefix G and any k-set O, f(O) <= f(G) + sum of the k largest gains
// over G; the upper bound is the smallest such value along the run.
inline BestKBounds BoundBestK(const SubmodularInstance& inst,
                              const ItemSet& pool, size_t k) {
  if (!inst.monotone()) {
    throw ContractError("the f_k upper bound needs a monotone function");
  }
  for (ItemId x : pool) inst.CheckItem(x);
  BestKBounds b;
  IncrementalState state(inst);
  std::vector<double> gains(pool.size());
  b.upper = std::numeric_limits<double>::infinity();
  const size_t steps = std::min(k, pool.size());
  for (size_t step = 0;; ++step) {
    size_t best = pool.size();
    for (size_t i = 0; i < pool.size(); ++i) {
      gains[i] = state.Contains(pool[i]) ? 0.0 : state.GainUncounted(pool[i]);
      if (gains[i] > 0 && (best == pool.size() || gains[i] > gains[best])) {
        best = i;
      }
    }
    std::vector<double> top = gains;
    const size_t kk = std::min(k, top.size());
    std::partial_sort(top.begin(), top.begin() + kk, top.end(),
                      std::greater<>());
    double bound = state.value();
    for (size_t i = 0; i < kk; ++i) bound += top[i];
    b.upper = std::min(b.upper, bound);
    if (step == steps || best == pool.size()) break;
    state.Add(pool[best]);
  }
  b.lower = state.value();
  return b;
}

// Clustering, core-set phase, composition. `opt` may be supplied by the
// generator; otherwise it is brute-forced when the guard allows.
inline RunReport RunDistributed(const SubmodularInstance& inst,
                                const PipelineConfig& config,
                                std::optional<double> opt = std::nullopt,
                                const Clustering* fixed = nullptr) {
  config.Validate();
  RunReport report;
  report.seed = config.seeds.master_seed();
  const uint64_t v0 = inst.stats().value_calls();
  const uint64_t m0 = inst.stats().marginal_calls();
  Clustering random;
  if (fixed == nullptr) {
    random = RandomClustering(inst.size(), config.m, config.C, config.seeds);
  }
  const Clustering& clustering = fixed ? *fixed : random;
  report.per_machine = RunCoresetPhase(inst, clustering, config);
  const ItemSet pool = UnionOf(report.per_machine);
  report.union_size = pool.size();
  PostResult post =
      ComposeAndPost(inst, report.per_machine, config.k, config.post,
                     config.seeds);
  report.final = std::move(post.final);
  report.pseudo = std::move(post.pseudo);
  for (const auto& s : report.per_machine) {
    IncrementalState state(inst);
    for (size_t j = 0; j < s.items.size() && j < config.k; ++j) {
      state.Add(s.items[j]);
    }
    report.best_single_machine =
        std::max(report.best_single_machine, state.value());
  }
  report.value_calls = inst.stats().value_calls() - v0;
  report.marginal_calls = inst.stats().marginal_calls() - m0;

  if (!opt && BruteForceAllowed(inst.size(), config.k)) {
    opt = BruteForceBestK(inst, inst.ground(), config.k).value;
  }
  report.opt_value = opt;
  if (opt && *opt > 0) {
    report.ratio =
        std::max(report.final.value, report.best_single_machine) / *opt;
  }
  if (opt && config.measure_coreset) {
    auto [value, method] = MeasureBestK(inst, pool, config.k);
    report.coreset_value = value;
    report.coreset_method = method;
    if (*opt > 0) report.coreset_ratio = value / *opt;
  }
  return report;
}

struct StreamingResult {
  Selection final;
  size_t blocks = 0;
  size_t stored = 0;  // items kept across all blocks
};

// Random-order stream: cut into blocks of ceil(sqrt(nk)) items, keep
// greedy(block, k') from each, finish with greedy over what was kept.
inline StreamingResult RunStreaming(const SubmodularInstance& inst, size_t k,
                                    size_t k_prime, const SeedTree& seeds) {
  if (k < 1 || inst.size() < k) throw InputError("streaming needs n >= k >= 1");
  StreamingResult r;
  const auto blocks = StreamBlocks(inst.size(), static_cast<uint32_t>(k), seeds);
  std::vector<Selection> kept;
  for (const auto& block : blocks) {
    kept.push_back(LazyGreedy(inst, ItemSet(block), k_prime));
    r.stored += kept.back().size();
  }
  r.blocks = blocks.size();
  r.final = LazyGreedy(inst, UnionOf(kept), k);
  return r;
}

}  // namespace coreset

#endif  // CORESET_PIPELINE_HPP_
