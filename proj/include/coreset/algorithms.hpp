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

#ifndef CORESET_ALGORITHMS_HPP_
#define CORESET_ALGORITHMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "coreset/errors.hpp"
#include "coreset/instance.hpp"
#include "coreset/item_set.hpp"
#include "coreset/random.hpp"

namespace coreset {

// Strict total order used to break ties between equal marginals. The
// default is ascending id.
class TieOrder {
 public:
  TieOrder() = default;

  // order[p] is the item placed at position p. Must be a permutation.
  static TieOrder FromSequence(const std::vector<ItemId>& order) {
    TieOrder t;
    t.rank_.assign(order.size(), UINT32_MAX);
    for (uint32_t p = 0; p < order.size(); ++p) {
      if (order[p] >= order.size() || t.rank_[order[p]] != UINT32_MAX) {
        throw InputError("tie order is not a permutation");
      }
      t.rank_[order[p]] = p;
    }
    return t;
  }

  static TieOrder Random(uint32_t n, uint64_t seed) {
    std::vector<ItemId> order(n);
    for (uint32_t i = 0; i < n; ++i) order[i] = i;
    CounterRng rng(seed);
    Shuffle(order, rng);
    return FromSequence(order);
  }

  bool is_identity() const { return rank_.empty(); }

  uint32_t Rank(ItemId x) const { return rank_.empty() ? x : rank_[x]; }

  bool Before(ItemId a, ItemId b) const { return Rank(a) < Rank(b); }

 private:
  std::vector<uint32_t> rank_;
};

// Ordered output of a selection algorithm with its gain trace.
struct Selection {
  std::vector<ItemId> items;
  std::vector<double> gains;
  double value = 0;

  ItemSet AsSet() const { return ItemSet(items); }
  size_t size() const { return items.size(); }
  friend bool operator==(const Selection&, const Selection&) = default;
};

namespace internal {

inline void Push(Selection& s, ItemId x, double gain) {
  s.items.push_back(x);
  s.gains.push_back(gain);
  s.value += gain;
}

// Strictly better candidate: larger gain, then earlier in the tie order.
inline bool Better(double ga, uint32_t ra, double gb, uint32_t rb) {
  return ga > gb || (ga == gb && ra < rb);
}

}  // namespace internal

inline Selection Greedy(const SubmodularInstance& inst, const ItemSet& t,
                        size_t k_prime, const TieOrder& order = {}) {
  for (ItemId x : t) inst.CheckItem(x);
  Selection out;
  std::vector<ItemId> cand(t.begin(), t.end());
  IncrementalState state(inst);
  // Items sharing an element list have equal gains; evaluate once per step.
  std::vector<double> memo(inst.profile_count());
  std::vector<uint32_t> memo_step(inst.profile_count(), UINT32_MAX);
  const size_t steps = std::min(k_prime, cand.size());
  for (uint32_t step = 0; step < steps; ++step) {
    size_t best = cand.size();
    double best_gain = 0;
    for (size_t i = 0; i < cand.size(); ++i) {
      const ItemId x = cand[i];
      const uint32_t p = inst.profile(x);
      double g;
      if (memo_step[p] == step) {
        g = memo[p];
      } else {
        g = state.Gain(x);
        memo[p] = g;
        memo_step[p] = step;
      }
      if (best == cand.size() ||
          internal::Better(g, order.Rank(x), best_gain,
                           order.Rank(cand[best]))) {
        best = i;
        best_gain = g;
      }
    }
    const ItemId x = cand[best];
    state.Add(x);
    internal::Push(out, x, best_gain);
    cand[best] = cand.back();
    cand.pop_back();
  }
  return out;
}

// Same output as Greedy, bit for bit. Stale gains are upper bounds by
// submodularity; a fresh entry on top of the heap is the exact argmax with
// the exact tie-break, because any item tied with it and earlier in the
// order would sort above it.
inline Selection LazyGreedy(const SubmodularInstance& inst, const ItemSet& t,
                            size_t k_prime, const TieOrder& order = {}) {
  for (ItemId x : t) inst.CheckItem(x);
  struct Entry {
    double bound;
    uint32_t rank;
    ItemId id;
    uint32_t step;
  };
  auto lower = [](const Entry& a, const Entry& b) {
    return internal::Better(b.bound, b.rank, a.bound, a.rank);
  };
  Selection out;
  IncrementalState state(inst);
  std::vector<Entry> init;
  init.reserve(t.size());
  for (ItemId x : t) init.push_back({state.Gain(x), order.Rank(x), x, 0});
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(
      lower, std::move(init));
  const size_t steps = std::min(k_prime, t.size());
  for (uint32_t step = 0; step < steps; ++step) {
    while (true) {
      Entry top = heap.top();
      heap.pop();
      if (top.step == step) {
        state.Add(top.id);
        internal::Push(out, top.id, top.bound);
        break;
      }
      top.bound = state.Gain(top.id);
      top.step = step;
      heap.push(top);
    }
  }
  return out;
}

// Items are taken when their gain clears a threshold; thresholds walk down
// the fixed lattice (1-eps)^i starting at the largest lattice point not
// above the best singleton. Within a pass items are scanned in tie order.
// Stops at k_prime items or when nothing left has positive gain.
inline Selection ThresholdGreedy(const SubmodularInstance& inst,
                                 const ItemSet& t, size_t k_prime,
                                 double epsilon, const TieOrder& order = {}) {
  if (!(epsilon > 0 && epsilon <= 0.5)) {
    throw InputError("threshold greedy needs epsilon in (0, 0.5]");
  }
  for (ItemId x : t) inst.CheckItem(x);
  Selection out;
  if (t.empty() || k_prime == 0) return out;
  IncrementalState state(inst);
  std::vector<ItemId> scan(t.begin(), t.end());
  std::sort(scan.begin(), scan.end(),
            [&](ItemId a, ItemId b) { return order.Before(a, b); });
  double top = -std::numeric_limits<double>::infinity();
  for (ItemId x : scan) top = std::max(top, state.Gain(x));
  if (top <= 0) return out;
  const double base = 1.0 - epsilon;
  auto lattice = [&](long i) { return std::pow(base, static_cast<double>(i)); };
  long i = static_cast<long>(std::ceil(std::log(top) / std::log(base)));
  while (lattice(i) > top) ++i;
  while (lattice(i - 1) <= top) --i;
  while (true) {
    const double tau = lattice(i);
    for (ItemId x : scan) {
      if (out.size() == k_prime) return out;
      if (state.Contains(x)) continue;
      const double g = state.Gain(x);
      if (g >= tau) {
        state.Add(x);
        internal::Push(out, x, g);
      }
    }
    if (out.size() == k_prime) return out;
    // Passes above the best remaining gain would take nothing; skip them.
    double rest = 0;
    for (ItemId x : scan) {
      if (!state.Contains(x)) rest = std::max(rest, state.Gain(x));
    }
    if (rest <= 0) return out;
    ++i;
    while (lattice(i) > rest) ++i;
  }
}

// Cardinality-constrained random greedy for non-monotone f. Each step
// takes the k best candidates (padded with zero-gain dummies), picks one
// uniformly, and keeps it only if its gain is positive.
inline Selection RandomGreedy(const SubmodularInstance& inst, const ItemSet& t,
                              size_t k, CounterRng& rng,
                              const TieOrder& order = {}) {
  if (k == 0) throw InputError("random greedy needs k >= 1");
  for (ItemId x : t) inst.CheckItem(x);
  Selection out;
  IncrementalState state(inst);
  std::vector<ItemId> cand(t.begin(), t.end());
  struct Scored {
    double gain;
    uint32_t rank;
    ItemId id;
  };
  std::vector<Scored> scored;
  for (size_t step = 0; step < k; ++step) {
    scored.clear();
    for (ItemId x : cand) {
      if (!state.Contains(x)) scored.push_back({state.Gain(x), order.Rank(x), x});
    }
    const size_t top = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + top, scored.end(),
                      [](const Scored& a, const Scored& b) {
                        return internal::Better(a.gain, a.rank, b.gain,
                                                b.rank);
                      });
    const size_t pick = UniformBelow(rng, k);
    if (pick < top && scored[pick].gain > 0) {
      const ItemId x = scored[pick].id;
      internal::Push(out, x, state.Add(x));
    }
  }
  return out;
}

// A selection algorithm bound to its parameters. `deterministic` tells the
// nice-ness checker whether the output is a function of the input alone.
struct Selector {
  std::string name;
  bool deterministic = true;
  std::function<Selection(const SubmodularInstance&, const ItemSet&, size_t)>
      run;
};

inline Selector GreedySelector(TieOrder order = {}) {
  return {"greedy", true,
          [order](const SubmodularInstance& inst, const ItemSet& t,
                  size_t kp) { return Greedy(inst, t, kp, order); }};
}

inline Selector LazyGreedySelector(TieOrder order = {}) {
  return {"lazy", true,
          [order](const SubmodularInstance& inst, const ItemSet& t,
                  size_t kp) { return LazyGreedy(inst, t, kp, order); }};
}

inline Selector ThresholdSelector(double epsilon, TieOrder order = {}) {
  return {"threshold", true,
          [order, epsilon](const SubmodularInstance& inst, const ItemSet& t,
                           size_t kp) {
            return ThresholdGreedy(inst, t, kp, epsilon, order);
          }};
}

// Greedy whose tie order is re-drawn from a hash of the input set. A
// function of its input, but the tie-breaking is not consistent across
// inputs, which is exactly what breaks nice-ness.
inline Selector InconsistentTieGreedySelector(uint64_t salt) {
  return {"greedy-inconsistent-ties", true,
          [salt](const SubmodularInstance& inst, const ItemSet& t,
                 size_t kp) {
            uint64_t h = Mix64(salt ^ t.size());
            for (ItemId x : t) h = Mix64(h ^ x);
            return Greedy(inst, t, kp, TieOrder::Random(inst.size(), h));
          }};
}

inline Selector RandomGreedySelector(uint64_t seed) {
  return {"random_greedy", false,
          [seed](const SubmodularInstance& inst, const ItemSet& t,
                 size_t kp) {
            CounterRng rng(seed);
            return RandomGreedy(inst, t, kp, rng);
          }};
}

struct NiceReport {
  double beta_observed = 0;
  uint64_t property1_violations = 0;
  uint64_t property2_violations = 0;
  uint64_t trials = 0;
  bool exhaustive = false;
};

inline constexpr size_t kExhaustiveNiceLimit = 64;

// Checks both nice-ness properties of `alg` on input t. Property 1 is
// checked for every unselected x when there are at most 64 of them,
// otherwise for `trials` sampled ones; Property 2 always for all of them.
inline NiceReport CheckBetaNice(const Selector& alg,
                                const SubmodularInstance& inst,
                                const ItemSet& t, size_t k_prime, double beta,
                                size_t trials, CounterRng& rng) {
  if (!alg.deterministic) {
    throw ContractError("nice-ness is only defined for deterministic "
                        "algorithms; got " + alg.name);
  }
  if (k_prime == 0) throw InputError("k_prime must be positive");
  NiceReport report;
  const Selection sel = alg.run(inst, t, k_prime);
  const ItemSet chosen = sel.AsSet();
  const ItemSet rest = t.Difference(chosen);
  IncrementalState state(inst);
  for (ItemId x : sel.items) state.Add(x);
  const double fs = state.value();
  const double bound = beta * fs / static_cast<double>(k_prime) + 1e-9;
  for (ItemId x : rest) {
    const double g = state.GainUncounted(x);
    if (g > bound) ++report.property2_violations;
    double ratio = 0;
    if (fs > 0) {
      ratio = g * static_cast<double>(k_prime) / fs;
    } else if (g > 0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    report.beta_observed = std::max(report.beta_observed, ratio);
  }
  std::vector<ItemId> probe(rest.begin(), rest.end());
  if (probe.size() <= kExhaustiveNiceLimit) {
    report.exhaustive = true;
  } else {
    const auto picks = SampleWithoutReplacement(
        static_cast<uint32_t>(probe.size()),
        static_cast<uint32_t>(std::min(trials, probe.size())), rng);
    std::vector<ItemId> sampled;
    for (uint32_t p : picks) sampled.push_back(probe[p]);
    probe = std::move(sampled);
  }
  for (ItemId x : probe) {
    ++report.trials;
    const Selection again = alg.run(inst, t.Without(x), k_prime);
    if (!(again.AsSet() == chosen)) ++report.property1_violations;
  }
  return report;
}

}  // namespace coreset

#endif  // CORESET_ALGORITHMS_HPP_
