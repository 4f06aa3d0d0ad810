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

#ifndef CORESET_RANDOM_HPP_
#define CORESET_RANDOM_HPP_

// Counter-based randomness. Every random decision in the library is drawn
// from a stream whose seed is derived from (master seed, role, index), so a
// result never depends on the order in which workers happen to run.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace coreset {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr uint64_t Mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class SeedRole : uint64_t {
  kClustering = 1,
  kMachine = 2,
  kPostProcess = 3,
  kGenerator = 4,
  kStream = 5,
  kNiceCheck = 6,
  kSubset = 7,
  kCampaign = 8,
};

// Derivation rule: seed(role, i) = Mix64(Mix64(master ^ Mix64(role)) + i).
// Distinct (role, i) pairs give unrelated streams; the rule is part of the
// file-format contract because clustering dumps must be replayable.
class SeedTree {
 public:
  constexpr SeedTree() = default;
  constexpr explicit SeedTree(uint64_t master_seed) : master_(master_seed) {}

  constexpr uint64_t master_seed() const { return master_; }

  constexpr uint64_t Derive(SeedRole role, uint64_t index) const {
    return Mix64(Mix64(master_ ^ Mix64(static_cast<uint64_t>(role))) + index);
  }

  // A child tree, used when a sub-computation needs its own role space.
  constexpr SeedTree Child(SeedRole role, uint64_t index) const {
    return SeedTree(Derive(role, index));
  }

 private:
  uint64_t master_ = 0;
};

// Output i of the stream is Mix64(seed + i * golden). Satisfies
// UniformRandomBitGenerator so it can feed standard algorithms, but the
// helpers below are preferred because their results are portable.
class CounterRng {
 public:
  using result_type = uint64_t;

  explicit CounterRng(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<uint64_t>::max();
  }

  result_type operator()() {
    const uint64_t out = Mix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return out;
  }

 private:
  uint64_t state_;
};

// Uniform integer in [0, n). n must be positive. Rejection sampling keeps
// the result exactly uniform and identical on every platform.
inline uint64_t UniformBelow(CounterRng& rng, uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double UniformUnit(CounterRng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool Bernoulli(CounterRng& rng, double p) {
  return UniformUnit(rng) < p;
}

template <typename T>
void Shuffle(std::span<T> values, CounterRng& rng) {
  for (size_t i = values.size(); i > 1; --i) {
    const size_t j = UniformBelow(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

template <typename T>
void Shuffle(std::vector<T>& values, CounterRng& rng) {
  Shuffle(std::span<T>(values), rng);
}

// `count` distinct values from [0, n) in the order they were drawn
// (partial Fisher-Yates over a virtual identity array).
inline std::vector<uint32_t> SampleWithoutReplacement(uint32_t n,
                                                      uint32_t count,
                                                      CounterRng& rng) {
  std::vector<uint32_t> out;
  out.reserve(count);
  if (count * 4 >= n) {
    std::vector<uint32_t> pool(n);
    for (uint32_t i = 0; i < n; ++i) pool[i] = i;
    for (uint32_t i = 0; i < count; ++i) {
      const uint32_t j = i + static_cast<uint32_t>(UniformBelow(rng, n - i));
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }
  // Sparse variant: only the displaced positions are stored.
  std::unordered_map<uint32_t, uint32_t> moved;
  auto value_at = [&](uint32_t pos) {
    auto it = moved.find(pos);
    return it == moved.end() ? pos : it->second;
  };
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t j = i + static_cast<uint32_t>(UniformBelow(rng, n - i));
    const uint32_t vi = value_at(i);
    const uint32_t vj = value_at(j);
    moved[i] = vj;
    moved[j] = vi;
    out.push_back(vj);
  }
  return out;
}

}  // namespace coreset

#endif  // CORESET_RANDOM_HPP_
