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


#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "coreset/coreset.hpp"
#include "test_util.hpp"

namespace coreset {
namespace {

PipelineConfig Config(size_t k, size_t kp, uint32_t m, uint64_t seed) {
  PipelineConfig c;
  c.k = k;
  c.k_prime = kp;
  c.m = m;
  c.seeds = SeedTree(seed);
  return c;
}

TEST(CoresetPhaseTest, SingleMachineIsPlainGreedy) {
  const auto inst = GenRandomCoverage(30, 40, 0.1, 4, 1).instance;
  const auto cfg = Config(4, 6, 1, 3);
  const auto c = RandomClustering(inst.size(), 1, 1, cfg.seeds);
  const auto out = RunCoresetPhase(inst, c, cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], Greedy(inst, inst.ground(), 6));
}

TEST(CoresetPhaseTest, EmptyPartsGiveEmptySelections) {
  const auto inst = GenRandomCoverage(10, 20, 0.2, 2, 1).instance;
  std::vector<std::vector<uint32_t>> assignment(10, {2});
  const auto c = ClusteringFromAssignment(3, assignment);
  const auto out = RunCoresetPhase(inst, c, Config(2, 2, 3, 0));
  EXPECT_TRUE(out[0].items.empty());
  EXPECT_TRUE(out[1].items.empty());
  EXPECT_EQ(out[2].size(), 2u);
}

TEST(CoresetPhaseTest, MachinesMatchStandaloneGreedy) {
  const auto inst = GenRandomCoverage(24, 30, 0.15, 3, 5).instance;
  const auto cfg = Config(3, 3, 3, 11);
  const auto c = RandomClustering(inst.size(), 3, 1, cfg.seeds);
  const auto out = RunCoresetPhase(inst, c, cfg);
  for (uint32_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out[i], Greedy(inst, c.parts[i], 3));
    EXPECT_LE(out[i].value, BruteForceBestK(inst, c.parts[i], 3).value);
  }
  PipelineConfig wrong = cfg;
  wrong.m = 4;
  EXPECT_THROW(RunCoresetPhase(inst, c, wrong), InputError);
}

TEST(CoresetPhaseTest, ThreadCountDoesNotMatter) {
  const auto inst = GenRandomCoverage(300, 80, 0.05, 5, 2).instance;
  auto cfg = Config(5, 5, 8, 4);
  cfg.core = CoreAlg::kRandomGreedy;
  const auto c = RandomClustering(inst.size(), 8, 2, cfg.seeds);
  setenv("CORESET_THREADS", "1", 1);
  const auto one = RunCoresetPhase(inst, c, cfg);
  setenv("CORESET_THREADS", "8", 1);
  const auto eight = RunCoresetPhase(inst, c, cfg);
  unsetenv("CORESET_THREADS");
  EXPECT_EQ(one, eight);
}

TEST(ComposeTest, OneMachineReselectsItsOwnValue) {
  const auto inst = GenRandomCoverage(30, 40, 0.1, 5, 3).instance;
  const auto s = Greedy(inst, inst.ground(), 5);
  const auto post = ComposeAndPost(inst, {s}, 5, PostAlg::kGreedy, SeedTree(0));
  EXPECT_EQ(post.final.value, s.value);
}

TEST(ComposeTest, SmallUnionIsTakenWhole) {
  const auto inst = GenRandomCoverage(30, 40, 0.1, 5, 4).instance;
  const auto a = Greedy(inst, ItemSet{1, 2, 3}, 2);
  const auto b = Greedy(inst, ItemSet{4, 5, 6}, 1);
  const auto post = ComposeAndPost(inst, {a, b}, 10, PostAlg::kGreedy,
                                   SeedTree(0));
  EXPECT_EQ(post.final.AsSet(), UnionOf({a, b}));
}

TEST(ComposeTest, DisjointMachinesMatchBruteForce) {
  // Modular instance: items cover disjoint blocks of distinct sizes.
  std::vector<std::vector<uint32_t>> sets;
  uint32_t next = 0;
  for (uint32_t i = 0; i < 12; ++i) {
    std::vector<uint32_t> s;
    for (uint32_t j = 0; j < 1 + (i * 7) % 11; ++j) s.push_back(next++);
    sets.push_back(s);
  }
  const auto inst = SubmodularInstance::Coverage(next, sets);
  const auto cfg = Config(4, 3, 3, 5);
  const auto c = RandomClustering(12, 3, 1, cfg.seeds);
  const auto out = RunCoresetPhase(inst, c, cfg);
  const auto post = ComposeAndPost(inst, out, 4, PostAlg::kGreedy, cfg.seeds);
  EXPECT_EQ(post.final.value,
            BruteForceBestK(inst, UnionOf(out), 4).value);
}

TEST(PseudoGreedyTest, InvariantsOnRandomRuns) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = GenRandomCoverage(120, 200, 0.03, 6, seed).instance;
    auto cfg = Config(6, DkCeil(6), 4, seed);
    cfg.post = PostAlg::kPseudoGreedy;
    const auto c = RandomClustering(inst.size(), 4, 1, cfg.seeds);
    const auto out = RunCoresetPhase(inst, c, cfg);
    const ItemSet pool = UnionOf(out);
    CounterRng rng(seed);
    const auto r = PseudoGreedy(inst, out[0], pool, 6, rng);
    const double plain = Greedy(inst, pool, 6).value;
    EXPECT_LE(r.v.size(), 6u + 128u);
    EXPECT_GE(r.v_value, plain);
    EXPECT_GE(r.final.value, plain);
    EXPECT_LE(r.final.size(), 6u);
    EXPECT_EQ(r.greedy_value, plain);
    EXPECT_EQ(Value(inst, ItemSet(r.v)), r.v_value);
    EXPECT_TRUE(ItemSet(r.v).IsSubsetOf(pool.Union(out[0].AsSet())));
    // k3 = 32 for every k2 <= 6 and k1 < 32, so |I| <= 4.
    EXPECT_EQ(r.candidates, 6u * (1 + 8 + 28 + 56 + 70));
  }
}

TEST(PseudoGreedyTest, EmptySeedCandidateIsPureGreedy) {
  // With one item per element list and disjoint sets, the k2 = k, I = {}
  // candidate takes the 4 k3 = 128 greedy additions: here the whole pool.
  const auto inst = GenRandomCoverage(40, 400, 0.02, 3, 7).instance;
  const auto s1 = Greedy(inst, inst.ground(), 10);
  CounterRng rng(1);
  const auto r = PseudoGreedy(inst, s1, inst.ground(), 3, rng);
  EXPECT_EQ(r.v_value, Value(inst, inst.ground()));
}

TEST(PseudoGreedyTest, ShortFirstMachineIsAllowed) {
  const auto inst = GenRandomCoverage(50, 60, 0.05, 2, 8).instance;
  const auto s1 = Greedy(inst, ItemSet{0, 1, 2}, 3);
  CounterRng rng(2);
  const auto r = PseudoGreedy(inst, s1, inst.ground(), 2, rng);
  EXPECT_GE(r.final.value, Greedy(inst, inst.ground(), 2).value);
}

TEST(PseudoGreedyTest, LargeKUsesExactIBound) {
  // k = 200: for k2 <= 128 k3 = 32, beyond that k3 = 64; the allowed |I|
  // follows (|I| - 4) k3 <= k1 exactly.
  const auto inst = GenRandomCoverage(400, 300, 0.01, 200, 9).instance;
  const auto s1 = Greedy(inst, inst.ground(), 400);
  CounterRng rng(3);
  const auto r = PseudoGreedy(inst, s1, inst.ground(), 200, rng);
  size_t expected = 0;
  for (size_t k2 = 1; k2 <= 200; ++k2) {
    const size_t k3 = 32 * ((k2 + 127) / 128), k1 = 200 - k2;
    for (uint32_t mask = 0; mask < 256; ++mask) {
      const size_t i = std::popcount(mask);
      if (4 * k3 + k1 >= i * k3) ++expected;
    }
  }
  EXPECT_EQ(r.candidates, expected);
  EXPECT_LE(r.v.size(), 200u + 128u);
}

TEST(SmallCoresetTest, HighSetIsBounded) {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = GenRandomCoverage(200, 300, 0.02, 20, seed).instance;
    CounterRng rng(seed);
    const auto r = SmallCoresetMachine(inst, inst.ground(), 20, 4, rng);
    EXPECT_LE(r.high.size(), std::sqrt(4.0 * 20) + 1e-9);
    EXPECT_LE(r.output.size(), 4u);
    const ItemSet source = r.took_greedy_branch ? r.greedy.AsSet()
                                                : ItemSet(r.high);
    EXPECT_TRUE(r.output.AsSet().IsSubsetOf(source));
  }
}

TEST(SmallCoresetTest, FullBudgetStaysInsideGreedy) {
  const auto inst = GenRandomCoverage(60, 80, 0.05, 6, 1).instance;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    CounterRng rng(seed);
    const auto r = SmallCoresetMachine(inst, inst.ground(), 6, 6, rng);
    EXPECT_TRUE(r.output.AsSet().IsSubsetOf(r.greedy.AsSet()));
    EXPECT_LE(r.output.value, r.greedy.value);
    if (r.took_greedy_branch) {
      EXPECT_EQ(r.output.size(), 6u);
    }
  }
}

TEST(SmallCoresetTest, ModularHighSetIsThresholdFilter) {
  // Disjoint sets: f({x}) is every marginal of x.
  std::vector<std::vector<uint32_t>> sets;
  uint32_t next = 0;
  for (uint32_t i = 0; i < 30; ++i) {
    std::vector<uint32_t> s;
    for (uint32_t j = 0; j < 1 + (i * 13) % 17; ++j) s.push_back(next++);
    sets.push_back(s);
  }
  const auto inst = SubmodularInstance::Coverage(next, sets);
  CounterRng rng(4);
  const auto r = SmallCoresetMachine(inst, inst.ground(), 9, 4, rng);
  std::vector<ItemId> expected;
  for (ItemId x : r.greedy.items) {
    if (static_cast<double>(sets[x].size()) >= r.tau) expected.push_back(x);
  }
  EXPECT_EQ(r.high, expected);
  EXPECT_THROW(SmallCoresetMachine(inst, inst.ground(), 3, 4, rng),
               InputError);
}

TEST(RunDistributedTest, ReplayIsIdentical) {
  const auto g = GenRandomCoverage(18, 30, 0.15, 3, 6);
  const auto cfg = Config(3, 3, 3, 21);
  const auto a = RunDistributed(g.instance, cfg, g.opt_value);
  const auto b = RunDistributed(g.instance, cfg, g.opt_value);
  EXPECT_EQ(a.final, b.final);
  EXPECT_EQ(a.per_machine, b.per_machine);
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_EQ(a.value_calls + a.marginal_calls, b.value_calls + b.marginal_calls);
}

TEST(RunDistributedTest, RatioAndBounds) {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = GenRandomCoverage(18, 30, 0.15, 3, seed);
    const auto r = RunDistributed(g.instance, Config(3, 3, 3, seed));
    ASSERT_TRUE(r.opt_value && r.ratio);
    EXPECT_EQ(*r.opt_value, *g.opt_value);  // brute-forced internally
    EXPECT_LE(*r.ratio, 1.0 + 1e-12);
    EXPECT_LE(r.final.value, *r.opt_value);
    EXPECT_LE(r.final.size(), 3u);
    EXPECT_EQ(*r.ratio,
              std::max(r.final.value, r.best_single_machine) / *r.opt_value);
    EXPECT_EQ(r.coreset_method, "exact");
    EXPECT_EQ(*r.coreset_value,
              BruteForceBestK(g.instance, UnionOf(r.per_machine), 3).value);
  }
}

TEST(RunDistributedTest, CountsMatchInstanceCounters) {
  const auto g = GenRandomCoverage(40, 60, 0.1, 4, 2);
  g.instance.stats().Reset();
  const auto r = RunDistributed(g.instance, Config(4, 4, 3, 1), g.opt_value);
  EXPECT_EQ(r.value_calls, g.instance.stats().value_calls());
  EXPECT_EQ(r.marginal_calls, g.instance.stats().marginal_calls());
  EXPECT_GT(r.marginal_calls, 0u);
}

TEST(RunDistributedTest, ConfigValidation) {
  const auto g = GenRandomCoverage(18, 30, 0.15, 3, 1);
  auto cfg = Config(3, 3, 3, 1);
  cfg.post = PostAlg::kPseudoGreedy;
  EXPECT_THROW(RunDistributed(g.instance, cfg), InputError);
  cfg.k_prime = DkCeil(3);
  EXPECT_NO_THROW(RunDistributed(g.instance, cfg));
  cfg = Config(3, 4, 3, 1);
  cfg.core = CoreAlg::kSmall;
  EXPECT_THROW(RunDistributed(g.instance, cfg), InputError);
  cfg = Config(3, 3, 2, 1);
  cfg.C = 3;
  EXPECT_THROW(RunDistributed(g.instance, cfg), InputError);
  EXPECT_EQ(DkCeil(1), 4u);
  EXPECT_EQ(DkCeil(20), 77u);
}

TEST(RunDistributedTest, FixedClusteringIsUsed) {
  const auto g = GenNonRandomizedHard(10, 100, 10, 3);
  auto cfg = Config(10, 2, 10, 1);
  const auto r = RunDistributed(g.instance, cfg, g.opt_value,
                                &*g.fixed_clustering);
  EXPECT_LE(r.final.value, 2);  // everything useful sits on machine 0
  const auto random = RunDistributed(g.instance, cfg, g.opt_value);
  EXPECT_GT(random.final.value, 2);
}

TEST(RunDistributedTest, DistributedRatioOnSmallFamily) {
  double sum = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const auto g = GenRandomCoverage(18, 30, 0.1, 3, 1000 + s);
    sum += *RunDistributed(g.instance, Config(3, 3, 3, s), g.opt_value).ratio;
  }
  EXPECT_GE(sum / seeds, 0.27);
}

TEST(StreamingTest, SingleBlockIsGreedyThenGreedy) {
  const auto inst = GenRandomCoverage(16, 40, 0.1, 16, 1).instance;
  const auto r = RunStreaming(inst, 16, 8, SeedTree(3));
  EXPECT_EQ(r.blocks, 1u);
  const auto first = Greedy(inst, inst.ground(), 8);
  EXPECT_EQ(r.final.value, Greedy(inst, first.AsSet(), 16).value);
}

TEST(StreamingTest, MemoryBound) {
  const auto inst = GenRandomCoverage(400, 200, 0.02, 4, 2).instance;
  const auto r = RunStreaming(inst, 4, 4, SeedTree(5));
  EXPECT_EQ(r.blocks, 10u);  // block size 40
  EXPECT_LE(r.stored, r.blocks * 4);
  EXPECT_LE(r.final.size(), 4u);
}

TEST(StreamingTest, ValueAgainstOptimum) {
  const double bound = (1 - std::exp(-1.0)) / 3;
  double sum = 0;
  const int seeds = 60;
  for (int s = 0; s < seeds; ++s) {
    const auto g = GenRandomCoverage(20, 30, 0.1, 3, 500 + s);
    sum += RunStreaming(g.instance, 3, 3, SeedTree(s)).final.value /
           *g.opt_value;
  }
  EXPECT_GE(sum / seeds, bound);
}

TEST(MeasureTest, LeavesCountersAlone) {
  const auto inst = GenRandomCoverage(200, 100, 0.05, 10, 3).instance;
  inst.stats().Reset();
  const auto [value, method] = MeasureBestK(inst, inst.ground(), 10);
  EXPECT_EQ(method, "greedy-lower-bound");
  EXPECT_EQ(value, Greedy(inst, inst.ground(), 10).value);
  inst.stats().Reset();
  MeasureBestK(inst, inst.ground(), 10);
  EXPECT_EQ(inst.stats().total(), 0u);
}

TEST(BoundBestKTest, SandwichesTheExactValue) {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = GenRandomCoverage(16, 30, 0.15, 4, seed);
    const auto& inst = g.instance;
    const size_t k = 1 + seed % 5;
    const double exact = BruteForceBestK(inst, inst.ground(), k).value;
    const auto b = BoundBestK(inst, inst.ground(), k);
    EXPECT_EQ(b.lower, Greedy(inst, inst.ground(), k).value);
    EXPECT_LE(b.lower, exact);
    EXPECT_GE(b.upper, exact);
    // Never looser than the plain greedy guarantee allows.
    EXPECT_LE(b.upper, b.lower / (1 - std::exp(-1.0)) + 1e-9);
  }
}

TEST(BoundBestKTest, TightOnDisjointSets) {
  // Disjoint sets: greedy is optimal and the bound closes.
  const auto inst = SubmodularInstance::Coverage(
      6, {{0}, {1, 2}, {3, 4, 5}});
  const auto b = BoundBestK(inst, inst.ground(), 2);
  EXPECT_EQ(b.lower, 5);
  EXPECT_EQ(b.upper, 5);
  EXPECT_EQ(BoundBestK(inst, ItemSet(), 2).upper, 0);
}

TEST(BoundBestKTest, UncountedAndMonotoneOnly) {
  const auto inst = GenRandomCoverage(40, 50, 0.1, 3, 1).instance;
  inst.stats().Reset();
  BoundBestK(inst, inst.ground(), 3);
  EXPECT_EQ(inst.stats().total(), 0u);
  const auto cut = GenRandomCut(8, 0.3, 2, 1).instance;
  EXPECT_THROW(BoundBestK(cut, cut.ground(), 2), ContractError);
}

}  // namespace
}  // namespace coreset
