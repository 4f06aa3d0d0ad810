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

#ifndef CORESET_CLUSTERING_HPP_
#define CORESET_CLUSTERING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "coreset/errors.hpp"
#include "coreset/item_set.hpp"
#include "coreset/random.hpp"

namespace coreset {

// Machine inputs T_1..T_m. assignment[x] lists the machines holding x.
struct Clustering {
  uint32_t m = 0;
  uint32_t C = 0;
  std::vector<ItemSet> parts;
  std::vector<std::vector<uint32_t>> assignment;

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

inline Clustering ClusteringFromAssignment(
    uint32_t m, std::vector<std::vector<uint32_t>> assignment) {
  Clustering c;
  c.m = m;
  c.C = assignment.empty() ? 0 : static_cast<uint32_t>(assignment[0].size());
  std::vector<std::vector<ItemId>> parts(m);
  for (ItemId x = 0; x < assignment.size(); ++x) {
    if (assignment[x].size() != c.C) {
      throw InputError("every item must be on the same number of machines");
    }
    std::vector<char> seen(m, 0);
    for (uint32_t machine : assignment[x]) {
      if (machine >= m) throw InputError("machine index out of range");
      if (seen[machine]) throw InputError("item repeated on one machine");
      seen[machine] = 1;
      parts[machine].push_back(x);
    }
  }
  c.parts.reserve(m);
  for (auto& p : parts) c.parts.emplace_back(std::move(p));
  c.assignment = std::move(assignment);
  return c;
}

// Each item independently goes to C distinct machines chosen uniformly.
// Item x draws from its own stream, so the result does not depend on how
// the work is scheduled.
inline Clustering RandomClustering(uint32_t n, uint32_t m, uint32_t C,
                                   const SeedTree& seeds) {
  if (n < 1) throw InputError("clustering needs n >= 1");
  if (C < 1 || C > m) {
    throw InputError("clustering needs 1 <= C <= m, got C=" +
                     std::to_string(C) + " m=" + std::to_string(m));
  }
  std::vector<std::vector<uint32_t>> assignment(n);
  for (ItemId x = 0; x < n; ++x) {
    CounterRng rng(seeds.Derive(SeedRole::kClustering, x));
    assignment[x] = SampleWithoutReplacement(m, C, rng);
  }
  return ClusteringFromAssignment(m, std::move(assignment));
}

inline uint64_t StreamBlockSize(uint64_t n, uint64_t k) {
  uint64_t b = static_cast<uint64_t>(std::sqrt(static_cast<double>(n * k)));
  while (b * b < n * k) ++b;
  while (b > 1 && (b - 1) * (b - 1) >= n * k) --b;
  return b;
}

// A random permutation of [0, n) cut into blocks of ceil(sqrt(nk)) items.
inline std::vector<std::vector<ItemId>> StreamBlocks(uint32_t n, uint32_t k,
                                                     const SeedTree& seeds) {
  if (k < 1 || n < k) throw InputError("stream blocks need n >= k >= 1");
  std::vector<ItemId> perm(n);
  for (ItemId i = 0; i < n; ++i) perm[i] = i;
  CounterRng rng(seeds.Derive(SeedRole::kStream, 0));
  Shuffle(perm, rng);
  const size_t b = StreamBlockSize(n, k);
  std::vector<std::vector<ItemId>> blocks;
  for (size_t start = 0; start < n; start += b) {
    const size_t end = std::min<size_t>(n, start + b);
    blocks.emplace_back(perm.begin() + start, perm.begin() + end);
  }
  return blocks;
}

inline std::string ClusteringToCsv(const Clustering& c) {
  std::ostringstream out;
  out << "item_id";
  for (uint32_t j = 1; j <= c.C; ++j) out << ",machine_" << j;
  out << '\n';
  for (ItemId x = 0; x < c.assignment.size(); ++x) {
    out << x;
    for (uint32_t machine : c.assignment[x]) out << ',' << machine;
    out << '\n';
  }
  return out.str();
}

inline Clustering ClusteringFromCsv(const std::string& text, uint32_t m) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("item_id", 0) != 0) {
    throw InputError("clustering CSV: missing header");
  }
  std::vector<std::vector<uint32_t>> assignment;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    if (std::stoul(cell) != assignment.size()) {
      throw InputError("clustering CSV: item ids must be 0..n-1 in order");
    }
    std::vector<uint32_t> machines;
    while (std::getline(row, cell, ',')) {
      machines.push_back(static_cast<uint32_t>(std::stoul(cell)));
    }
    assignment.push_back(std::move(machines));
  }
  return ClusteringFromAssignment(m, std::move(assignment));
}

}  // namespace coreset

#endif  // CORESET_CLUSTERING_HPP_
