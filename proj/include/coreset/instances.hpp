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

#ifndef CORESET_INSTANCES_HPP_
#define CORESET_INSTANCES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coreset/clustering.hpp"
#include "coreset/errors.hpp"
#include "coreset/instance.hpp"
#include "coreset/item_set.hpp"
#include "coreset/oracle.hpp"
#include "coreset/random.hpp"

namespace coreset {

struct GeneratedInstance {
  SubmodularInstance instance;
  size_t k = 1;  // the cardinality opt_value refers to
  std::optional<double> opt_value;
  std::optional<ItemSet> opt_set;
  std::optional<Clustering> fixed_clustering;
  std::string generator;
  nlohmann::json params = nlohmann::json::object();
  // Named item groups of a construction, in construction order.
  std::map<std::string, std::vector<ItemId>> groups;
};

namespace internal {

// Builds a coverage instance from logical sets with `copies[s]` copies of
// set s. Element labels are permuted and item ids shuffled with `rng`.
// Returns the item ids of each logical set's copies.
inline std::vector<std::vector<ItemId>> BuildShuffledCoverage(
    uint32_t universe, std::vector<std::vector<uint32_t>> sets,
    const std::vector<uint64_t>& copies, CounterRng& rng,
    SubmodularInstance* out) {
  std::vector<uint32_t> relabel(universe);
  for (uint32_t e = 0; e < universe; ++e) relabel[e] = e;
  Shuffle(relabel, rng);
  for (auto& s : sets) {
    for (auto& e : s) e = relabel[e];
  }
  uint64_t n = 0;
  for (uint64_t c : copies) n += c;
  if (n > UINT32_MAX / 2) throw CapacityError("too many items");
  std::vector<ItemId> ids(n);
  for (ItemId i = 0; i < n; ++i) ids[i] = i;
  Shuffle(ids, rng);
  std::vector<uint32_t> profile_of(n);
  std::vector<std::vector<ItemId>> members(sets.size());
  size_t next = 0;
  for (uint32_t s = 0; s < sets.size(); ++s) {
    for (uint64_t c = 0; c < copies[s]; ++c) {
      const ItemId id = ids[next++];
      profile_of[id] = s;
      members[s].push_back(id);
    }
  }
  *out = SubmodularInstance::CoverageFromProfiles(universe, std::move(sets),
                                                  std::move(profile_of));
  return members;
}

inline std::vector<uint32_t> Iota(uint32_t from, uint32_t count) {
  std::vector<uint32_t> v(count);
  for (uint32_t i = 0; i < count; ++i) v[i] = from + i;
  return v;
}

}  // namespace internal

// k sets A_1..A_k partitioning a universe of k^2 + (k-1)^2 elements (A_1 is
// the first k^2 elements, the rest are blocks of k-1), plus L copies of
// B_i = the i-th k-block of A_1 for each i. L = ceil(m ln(2Ck/eps)).
inline GeneratedInstance GenHalfBarrier(uint32_t k, uint32_t m, uint32_t C,
                                        double epsilon, uint64_t seed) {
  if (k < 2) throw InputError("half-barrier needs k >= 2");
  if (!(epsilon > 0 && epsilon < 1)) throw InputError("need 0 < eps < 1");
  if (m < 1 || C < 1) throw InputError("need m, C >= 1");
  if (static_cast<double>(C) > std::sqrt(epsilon * m / 2.0)) {
    throw InputError("half-barrier needs C <= sqrt(eps m / 2)");
  }
  const uint64_t L = static_cast<uint64_t>(
      std::ceil(m * std::log(2.0 * C * k / epsilon)));
  const uint32_t universe = k * k + (k - 1) * (k - 1);
  std::vector<std::vector<uint32_t>> sets;
  std::vector<uint64_t> copies;
  sets.push_back(internal::Iota(0, k * k));
  copies.push_back(1);
  for (uint32_t i = 2; i <= k; ++i) {
    sets.push_back(internal::Iota(k * k + (k - 1) * (i - 2), k - 1));
    copies.push_back(1);
  }
  for (uint32_t i = 1; i <= k; ++i) {
    sets.push_back(internal::Iota((i - 1) * k, k));
    copies.push_back(L);
  }
  GeneratedInstance g;
  CounterRng rng(SeedTree(seed).Derive(SeedRole::kGenerator, 0));
  auto members = internal::BuildShuffledCoverage(universe, std::move(sets),
                                                 copies, rng, &g.instance);
  std::vector<ItemId> a;
  for (uint32_t i = 0; i < k; ++i) a.push_back(members[i][0]);
  std::vector<ItemId> b;
  for (uint32_t i = 0; i < k; ++i) b.push_back(members[k + i][0]);
  g.k = k;
  g.opt_value = universe;
  g.opt_set = ItemSet(a);
  g.groups["A"] = a;
  g.groups["B"] = b;  // one representative per i
  g.generator = "half-barrier";
  g.params = {{"k", k}, {"m", m}, {"C", C}, {"eps", epsilon},
              {"L", L}, {"seed", seed}};
  return g;
}

// A_1..A_k: a random partition of a universe of k*ell elements into blocks
// of ell; A_{k+1}..A_n: independent uniform ell-subsets.
inline GeneratedInstance GenInfoTheoretic(uint32_t n, uint32_t k,
                                          uint32_t ell, uint64_t seed) {
  if (k < 1 || n <= k) throw InputError("info-theoretic needs n > k >= 1");
  if (ell < 1) throw InputError("info-theoretic needs ell >= 1");
  const uint32_t universe = k * ell;
  CounterRng rng(SeedTree(seed).Derive(SeedRole::kGenerator, 0));
  std::vector<uint32_t> perm = internal::Iota(0, universe);
  Shuffle(perm, rng);
  std::vector<std::vector<uint32_t>> sets;
  for (uint32_t i = 0; i < k; ++i) {
    std::vector<uint32_t> s(perm.begin() + i * ell,
                            perm.begin() + (i + 1) * ell);
    std::sort(s.begin(), s.end());
    sets.push_back(std::move(s));
  }
  for (uint32_t i = k; i < n; ++i) {
    auto s = SampleWithoutReplacement(universe, ell, rng);
    std::sort(s.begin(), s.end());
    sets.push_back(std::move(s));
  }
  std::vector<ItemId> ids = internal::Iota(0, n);
  Shuffle(ids, rng);
  std::vector<std::vector<uint32_t>> placed(n);
  for (uint32_t i = 0; i < n; ++i) placed[ids[i]] = std::move(sets[i]);
  GeneratedInstance g;
  g.instance = SubmodularInstance::Coverage(universe, placed);
  std::vector<ItemId> opt(ids.begin(), ids.begin() + k);
  g.k = k;
  g.opt_value = universe;
  g.opt_set = ItemSet(opt);
  g.groups["A"] = opt;
  g.generator = "info-theoretic";
  g.params = {{"n", n}, {"k", k}, {"ell", ell}, {"seed", seed}};
  return g;
}

struct TightnessShape {
  double alpha = 0;
  double lambda = 0;
  uint64_t k2 = 0;
  uint64_t k3 = 0;
  uint64_t block = 0;         // ceil(alpha / eps), the size of B_{i,j}
  uint64_t b_prime = 0;       // |B'|
  uint64_t copies = 0;        // copies of each X_j and Z_l
  std::vector<uint64_t> x_extra;  // elements of B' inside X_j
};

inline TightnessShape TightnessShapeFor(uint32_t k, double epsilon,
                                        uint32_t m) {
  TightnessShape s;
  s.alpha = std::sqrt(0.5);
  s.lambda = 1.0 - std::sqrt(0.5);
  s.k2 = k - 1;
  s.k3 = static_cast<uint64_t>(std::ceil(s.alpha * s.k2 / s.lambda));
  s.block = static_cast<uint64_t>(std::ceil(s.alpha / epsilon));
  const uint64_t rest = static_cast<uint64_t>(std::ceil((1 - s.alpha) / epsilon));
  const uint64_t printed = static_cast<uint64_t>(
      std::ceil((1 + epsilon) * k * s.k3 * rest));
  uint64_t needed = 0;
  for (uint64_t j = 1; j <= s.k3; ++j) {
    const long long extra =
        (static_cast<long long>(s.k3) - static_cast<long long>(s.k2) -
         static_cast<long long>(j - 1)) *
            static_cast<long long>(s.block) +
        1;
    s.x_extra.push_back(static_cast<uint64_t>(std::max(1LL, extra)));
    needed += s.x_extra.back();
  }
  s.b_prime = std::max(printed, needed);
  s.copies = static_cast<uint64_t>(
      std::ceil(10.0 * m * std::log(static_cast<double>(m) * k)));
  return s;
}

// Rows R_i and columns C_j of a k2 x k3 matrix of disjoint blocks, a big
// set B', column sets X_j = C_j plus a private slice of B', and singletons
// Z_1..Z_k'. One copy of B' and each R_i; many copies of each X_j and Z_l.
inline GeneratedInstance GenTightness585(uint32_t k, double epsilon,
                                         uint32_t m, uint32_t k_prime,
                                         uint32_t C, uint64_t seed) {
  if (!(epsilon > 0 && epsilon < 1)) throw InputError("need 0 < eps < 1");
  if (k < 2 || k < static_cast<uint32_t>(std::ceil(1.0 / epsilon))) {
    throw InputError("tightness instance needs k >= ceil(1/eps)");
  }
  if (m < 1 || C < 1 || static_cast<double>(C) > std::sqrt(epsilon * m)) {
    throw InputError("tightness instance needs C <= sqrt(eps m)");
  }
  if (k_prime < 1) throw InputError("k_prime must be >= 1");
  const TightnessShape s = TightnessShapeFor(k, epsilon, m);
  const uint64_t matrix = s.k2 * s.k3 * s.block;
  const uint64_t universe64 = matrix + s.b_prime + k_prime;
  if (universe64 > (1u << 30)) throw CapacityError("universe too large");
  const uint32_t universe = static_cast<uint32_t>(universe64);
  auto cell = [&](uint64_t i, uint64_t j) {  // 0-based row, column
    return static_cast<uint32_t>((i * s.k3 + j) * s.block);
  };
  std::vector<std::vector<uint32_t>> sets;
  std::vector<uint64_t> copies;
  // B'
  sets.push_back(internal::Iota(static_cast<uint32_t>(matrix),
                                static_cast<uint32_t>(s.b_prime)));
  copies.push_back(1);
  for (uint64_t i = 0; i < s.k2; ++i) {
    std::vector<uint32_t> row;
    for (uint64_t j = 0; j < s.k3; ++j) {
      for (uint64_t e = 0; e < s.block; ++e) row.push_back(cell(i, j) + e);
    }
    sets.push_back(std::move(row));
    copies.push_back(1);
  }
  uint32_t next_b = static_cast<uint32_t>(matrix);
  for (uint64_t j = 0; j < s.k3; ++j) {
    std::vector<uint32_t> x;
    for (uint64_t i = 0; i < s.k2; ++i) {
      for (uint64_t e = 0; e < s.block; ++e) x.push_back(cell(i, j) + e);
    }
    for (uint64_t e = 0; e < s.x_extra[j]; ++e) x.push_back(next_b++);
    sets.push_back(std::move(x));
    copies.push_back(s.copies);
  }
  const uint32_t z0 = static_cast<uint32_t>(matrix + s.b_prime);
  for (uint32_t l = 0; l < k_prime; ++l) {
    sets.push_back({z0 + l});
    copies.push_back(s.copies);
  }
  GeneratedInstance g;
  CounterRng rng(SeedTree(seed).Derive(SeedRole::kGenerator, 0));
  auto members = internal::BuildShuffledCoverage(universe, std::move(sets),
                                                 copies, rng, &g.instance);
  std::vector<ItemId> r, x;
  for (uint64_t i = 0; i < s.k2; ++i) r.push_back(members[1 + i][0]);
  for (uint64_t j = 0; j < s.k3; ++j) x.push_back(members[1 + s.k2 + j][0]);
  std::vector<ItemId> opt = r;
  opt.push_back(members[0][0]);
  g.k = k;
  g.opt_value = static_cast<double>(matrix + s.b_prime);
  g.opt_set = ItemSet(opt);
  g.groups["B_prime"] = {members[0][0]};
  g.groups["R"] = r;
  g.groups["X"] = x;  // one representative per column, in column order
  g.generator = "tightness-585";
  g.params = {{"k", k},          {"eps", epsilon},     {"m", m},
              {"k_prime", k_prime}, {"C", C},          {"seed", seed},
              {"k2", s.k2},      {"k3", s.k3},         {"block", s.block},
              {"b_prime", s.b_prime}, {"copies", s.copies}};
  return g;
}

// Greedy's view on a machine without B': taking X_1..X_{t-1} first, X_t
// still gains strictly more than any row set, for every t. Returns the
// first t (1-based) where that fails, or 0 when it holds throughout.
inline size_t TightnessStructureViolation(const GeneratedInstance& g) {
  const auto& inst = g.instance;
  const auto& xs = g.groups.at("X");
  const auto& rows = g.groups.at("R");
  IncrementalState state(inst);
  for (size_t t = 0; t < xs.size(); ++t) {
    const double gx = state.GainUncounted(xs[t]);
    for (ItemId r : rows) {
      if (!(gx > state.GainUncounted(r))) return t + 1;
    }
    state.Add(xs[t]);
  }
  return 0;
}

// Definition of I^{k,k'}: Gamma = floor(sqrt(k'k)); k - Gamma singletons
// once each, the last Gamma singletons floor(k/k') times each.
inline GeneratedInstance GenSmallHard(uint32_t k, uint32_t k_prime,
                                      uint64_t seed) {
  if (k_prime < 1 || k_prime > k) throw InputError("need 1 <= k' <= k");
  uint32_t gamma = static_cast<uint32_t>(
      std::sqrt(static_cast<double>(k_prime) * k));
  while (static_cast<uint64_t>(gamma + 1) * (gamma + 1) <=
         static_cast<uint64_t>(k_prime) * k) {
    ++gamma;
  }
  while (static_cast<uint64_t>(gamma) * gamma >
         static_cast<uint64_t>(k_prime) * k) {
    --gamma;
  }
  const uint32_t dup = k / k_prime;
  std::vector<std::vector<uint32_t>> sets;
  std::vector<uint64_t> copies;
  for (uint32_t i = 0; i < k; ++i) {
    sets.push_back({i});
    copies.push_back(i < k - gamma ? 1 : dup);
  }
  GeneratedInstance g;
  CounterRng rng(SeedTree(seed).Derive(SeedRole::kGenerator, 0));
  auto members = internal::BuildShuffledCoverage(k, std::move(sets), copies,
                                                 rng, &g.instance);
  std::vector<ItemId> opt;
  for (uint32_t i = 0; i < k; ++i) opt.push_back(members[i][0]);
  g.k = k;
  g.opt_value = k;
  g.opt_set = ItemSet(opt);
  g.generator = "small-hard";
  g.params = {{"k", k}, {"k_prime", k_prime}, {"gamma", gamma},
              {"seed", seed}};
  return g;
}

// f(S) = |S ∩ A| with |A| = k, as coverage with disjoint singletons for A
// and empty sets elsewhere. The fixed clustering puts A on machine 0 and
// deals the rest round-robin over the other machines.
inline GeneratedInstance GenNonRandomizedHard(uint32_t k, uint32_t n,
                                              uint32_t m, uint64_t seed) {
  if (k < 1 || n <= k) throw InputError("need n > k >= 1");
  if (m < 1) throw InputError("need m >= 1");
  std::vector<std::vector<uint32_t>> sets;
  std::vector<uint64_t> copies;
  for (uint32_t i = 0; i < k; ++i) {
    sets.push_back({i});
    copies.push_back(1);
  }
  sets.push_back({});
  copies.push_back(n - k);
  GeneratedInstance g;
  CounterRng rng(SeedTree(seed).Derive(SeedRole::kGenerator, 0));
  auto members = internal::BuildShuffledCoverage(k, std::move(sets), copies,
                                                 rng, &g.instance);
  std::vector<ItemId> a;
  for (uint32_t i = 0; i < k; ++i) a.push_back(members[i][0]);
  std::vector<std::vector<uint32_t>> assignment(n);
  for (ItemId x : a) assignment[x] = {0};
  uint32_t next = 0;
  for (ItemId x : members[k]) {
    assignment[x] = {m == 1 ? 0 : 1 + (next++ % (m - 1))};
  }
  g.fixed_clustering = ClusteringFromAssignment(m, std::move(assignment));
  g.k = k;
  g.opt_value = k;
  g.opt_set = ItemSet(a);
  g.groups["A"] = a;
  g.generator = "nonrandomized-hard";
  g.params = {{"k", k}, {"n", n}, {"m", m}, {"seed", seed}};
  return g;
}

namespace internal {

inline void FillOptIfEnumerable(GeneratedInstance& g) {
  const auto& inst = g.instance;
  if (BruteForceAllowed(inst.size(), g.k)) {
    BestK best = BruteForceBestK(inst, inst.ground(), g.k);
    g.opt_value = best.value;
    g.opt_set = best.set;
  }
}

}  // namespace internal

// Each item holds each element independently with probability `density`.
inline GeneratedInstance GenRandomCoverage(uint32_t n, uint32_t u,
                                           double density, uint32_t k,
                                           uint64_t seed) {
  if (n < 1 || u < 1 || k < 1) throw InputError("need n, u, k >= 1");
  if (!(density >= 0 && density <= 1)) throw InputError("density in [0,1]");
  std::vector<std::vector<uint32_t>> sets(n);
  for (ItemId x = 0; x < n; ++x) {
    CounterRng rng(SeedTree(seed).Derive(SeedRole::kGenerator, x));
    for (uint32_t e = 0; e < u; ++e) {
      if (Bernoulli(rng, density)) sets[x].push_back(e);
    }
  }
  GeneratedInstance g;
  g.instance = SubmodularInstance::Coverage(u, sets);
  g.k = k;
  g.generator = "random-coverage";
  g.params = {{"n", n}, {"u", u}, {"density", density}, {"k", k},
              {"seed", seed}};
  internal::FillOptIfEnumerable(g);
  return g;
}

// Each ordered pair (i, j), i != j, carries an arc with probability
// `arc_prob`, weight uniform in 1..10.
inline GeneratedInstance GenRandomCut(uint32_t n, double arc_prob, uint32_t k,
                                      uint64_t seed) {
  if (n < 1 || k < 1) throw InputError("need n, k >= 1");
  if (!(arc_prob >= 0 && arc_prob <= 1)) throw InputError("arc_prob in [0,1]");
  std::vector<Arc> arcs;
  for (ItemId i = 0; i < n; ++i) {
    CounterRng rng(SeedTree(seed).Derive(SeedRole::kGenerator, i));
    for (ItemId j = 0; j < n; ++j) {
      if (i == j) continue;
      if (Bernoulli(rng, arc_prob)) {
        arcs.push_back({i, j, static_cast<int64_t>(1 + UniformBelow(rng, 10))});
      }
    }
  }
  GeneratedInstance g;
  g.instance = SubmodularInstance::DirectedCut(n, std::move(arcs));
  g.k = k;
  g.generator = "random-cut";
  g.params = {{"n", n}, {"arc_prob", arc_prob}, {"k", k}, {"seed", seed}};
  internal::FillOptIfEnumerable(g);
  return g;
}

inline const std::vector<std::string>& GeneratorNames() {
  static const std::vector<std::string> names = {
      "half-barrier",    "info-theoretic",     "tightness-585",
      "small-hard",      "nonrandomized-hard", "random-coverage",
      "random-cut"};
  return names;
}

// Dispatch by generator name. Parameters missing from `params` take the
// defaults below; unknown names are an input error.
inline GeneratedInstance Generate(const std::string& name,
                                  const nlohmann::json& params,
                                  uint64_t seed) {
  auto u32 = [&](const char* key, uint32_t fallback) {
    if (!params.contains(key)) return fallback;
    const auto& v = params.at(key);
    if (!v.is_number_integer() || v.get<int64_t>() < 0 ||
        v.get<int64_t>() > int64_t{UINT32_MAX}) {
      throw InputError(std::string("parameter ") + key +
                       " must be a non-negative integer");
    }
    return v.get<uint32_t>();
  };
  auto real = [&](const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    if (!params.at(key).is_number()) {
      throw InputError(std::string("parameter ") + key + " must be a number");
    }
    return params.at(key).get<double>();
  };
  if (name == "half-barrier") {
    return GenHalfBarrier(u32("k", 10), u32("m", 100), u32("C", 1),
                          real("eps", 0.1), seed);
  }
  if (name == "info-theoretic") {
    return GenInfoTheoretic(u32("n", 40), u32("k", 5), u32("ell", 20), seed);
  }
  if (name == "tightness-585") {
    const uint32_t k = u32("k", 20);
    return GenTightness585(
        k, real("eps", 0.05), u32("m", 20),
        u32("k_prime", static_cast<uint32_t>(std::ceil(
                           (2 * std::sqrt(2.0) + 1) * k))),
        u32("C", 1), seed);
  }
  if (name == "small-hard") {
    return GenSmallHard(u32("k", 100), u32("k_prime", 4), seed);
  }
  if (name == "nonrandomized-hard") {
    return GenNonRandomizedHard(u32("k", 10), u32("n", 100), u32("m", 10),
                                seed);
  }
  if (name == "random-coverage") {
    return GenRandomCoverage(u32("n", 12), u32("u", 40), real("density", 0.2),
                             u32("k", 3), seed);
  }
  if (name == "random-cut") {
    return GenRandomCut(u32("n", 12), real("arc_prob", 0.3), u32("k", 3),
                        seed);
  }
  throw InputError("unknown generator: " + name);
}

}  // namespace coreset

#endif  // CORESET_INSTANCES_HPP_
