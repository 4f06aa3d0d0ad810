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


// Acceptance run: one PASS/FAIL line per criterion. Exit code is the
// number of failed criteria.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "coreset/coreset.hpp"

namespace coreset {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Stats {
  double mean = 0;
  double se = 0;
};

Stats MeanSe(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  double var = 0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  var /= static_cast<double>(xs.size() - 1);
  s.se = std::sqrt(var / static_cast<double>(xs.size()));
  return s;
}

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

PipelineConfig Config(size_t k, size_t kp, uint32_t m, uint64_t seed) {
  PipelineConfig cfg;
  cfg.k = k;
  cfg.k_prime = kp;
  cfg.m = m;
  cfg.seeds = SeedTree(seed);
  return cfg;
}

// Per-run core-set ratio as an interval: exact when f_k was enumerable,
// otherwise [greedy, prefix upper bound] / OPT.
std::pair<double, double> CoresetRatioBounds(const GeneratedInstance& g,
                                             const RunReport& r, size_t k) {
  if (r.coreset_method == "exact") return {*r.coreset_ratio, *r.coreset_ratio};
  const auto b = BoundBestK(g.instance, UnionOf(r.per_machine), k);
  return {b.lower / *g.opt_value, b.upper / *g.opt_value};
}

Outcome LpCertification() {
  const auto t0 = std::chrono::steady_clock::now();
  const LpRScan scan = ScanLpR(160);
  const Sle2Result s2 = MinimizeSle2();
  const Sle3Result s3 = MinimizeSle3();
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
  const double target = 2 - std::sqrt(2.0);
  const bool min_ok = scan.min_value >= 0.545;
  const bool argmin_ok =
      std::abs(static_cast<double>(scan.argmin) - 127.0) <= 2.0;
  const bool sle2_ok = std::abs(s2.beta - target) <= 1e-4 &&
                       std::abs(s2.lambda - (1 - std::sqrt(0.5))) <= 1e-3 &&
                       std::abs(s2.alpha - std::sqrt(0.5)) <= 1e-3;
  const bool sle3_ok = std::abs(s3.r_star_closed_form - 0.71) <= 0.002;
  const bool time_ok = secs <= 300;
  return {min_ok && argmin_ok && sle2_ok && sle3_ok && time_ok,
          "scan_min=" + Fmt(scan.min_value) + (min_ok ? "" : "(<0.545)") +
              " argmin=" + std::to_string(scan.argmin) + "/160 sle2_beta=" +
              Fmt(s2.beta) + " lambda=" + Fmt(s2.lambda) + " alpha=" +
              Fmt(s2.alpha) + " sle3_r*=" + Fmt(s3.r_star_closed_form) +
              " (printed form " + Fmt(s3.r_star) + ") secs=" + Fmt(secs)};
}

Outcome NiceNess() {
  uint64_t violations = 0;
  size_t exhaustive = 0;
  double worst_greedy = 0, worst_threshold = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    CounterRng pick(SeedTree(seed).Derive(SeedRole::kGenerator, 99));
    const uint32_t n = 8 + static_cast<uint32_t>(UniformBelow(pick, 23));
    const uint32_t u = 10 + static_cast<uint32_t>(UniformBelow(pick, 31));
    const double density = 0.05 + 0.05 * static_cast<double>(UniformBelow(pick, 5));
    const size_t kp = 1 + UniformBelow(pick, 6);
    const auto inst = GenRandomCoverage(n, u, density, 1, seed).instance;
    CounterRng rng(SeedTree(seed).Derive(SeedRole::kNiceCheck, 0));
    const auto g = CheckBetaNice(GreedySelector(), inst, inst.ground(), kp,
                                 1.0, 0, rng);
    const auto t = CheckBetaNice(ThresholdSelector(0.1), inst, inst.ground(),
                                 kp, 1.2, 0, rng);
    violations += g.property1_violations + g.property2_violations +
                  t.property1_violations + t.property2_violations;
    exhaustive += g.exhaustive && t.exhaustive;
    worst_greedy = std::max(worst_greedy, g.beta_observed);
    worst_threshold = std::max(worst_threshold, t.beta_observed);
  }
  return {violations == 0 && exhaustive == 200,
          "violations=" + std::to_string(violations) + " exhaustive=" +
              std::to_string(exhaustive) + "/200 max_beta_greedy=" +
              Fmt(worst_greedy) + " max_beta_threshold=" +
              Fmt(worst_threshold)};
}

// n=18, k=3, m=3, C=1, k'=k random coverage runs, one instance per seed.
std::vector<RunReport> SmallCoverageRuns() {
  return ParallelMap(300, [](size_t i) {
    const auto g = GenRandomCoverage(18, 30, 0.15, 3, i);
    return RunDistributed(g.instance, Config(3, 3, 3, i), g.opt_value);
  });
}

Outcome CoresetThird(const std::vector<RunReport>& runs) {
  std::vector<double> xs;
  bool exact = true;
  for (const auto& r : runs) {
    xs.push_back(*r.coreset_ratio);
    exact = exact && r.coreset_method == "exact";
  }
  const Stats s = MeanSe(xs);
  const double bound = 1.0 / 3 - 3 * s.se;
  return {exact && s.mean >= bound,
          "mean=" + Fmt(s.mean) + " se=" + Fmt(s.se) + " bound=" + Fmt(bound)};
}

Outcome Distributed027(const std::vector<RunReport>& runs) {
  std::vector<double> xs;
  for (const auto& r : runs) xs.push_back(*r.ratio);
  const Stats s = MeanSe(xs);
  const double bound = 0.27 - 3 * s.se;
  return {s.mean >= bound,
          "mean=" + Fmt(s.mean) + " se=" + Fmt(s.se) + " bound=" + Fmt(bound)};
}

Outcome NonMonotoneFloor() {
  const auto runs = ParallelMap(500, [](size_t i) {
    const auto g = GenRandomCut(14, 0.3, 3, i);
    PipelineConfig cfg = Config(3, 3, 3, i);
    cfg.post = PostAlg::kRandomGreedy;
    cfg.measure_coreset = false;
    return RunDistributed(g.instance, cfg, g.opt_value);
  });
  std::vector<double> xs;
  for (const auto& r : runs) xs.push_back(r.ratio.value_or(1.0));
  const Stats s = MeanSe(xs);
  const double bound = (1 - 1.0 / 3) / (2 + std::exp(1.0)) - 3 * s.se;
  return {s.mean >= bound,
          "mean=" + Fmt(s.mean) + " se=" + Fmt(s.se) + " bound=" + Fmt(bound)};
}

Outcome HalfBarrier() {
  const auto rows = ParallelMap(50, [](size_t i) {
    const auto g = GenHalfBarrier(10, 100, 1, 0.1, i);
    const auto r = RunDistributed(g.instance, Config(10, 10, 100, i), g.opt_value);
    return CoresetRatioBounds(g, r, 10);
  });
  std::vector<double> lo, hi;
  for (const auto& [a, b] : rows) {
    lo.push_back(a);
    hi.push_back(b);
  }
  const Stats l = MeanSe(lo), h = MeanSe(hi);
  const double top = 0.5 + 0.1 + 0.1 + 3 * l.se;
  return {l.mean >= 0.45 && h.mean <= top,
          "mean in [" + Fmt(l.mean) + "," + Fmt(h.mean) + "] se=" + Fmt(l.se) +
              " band=[0.45," + Fmt(top) + "]"};
}

Outcome SmallCoreset() {
  bool pass = true;
  std::string detail;
  double ratio_at[2] = {0, 0};
  const size_t k = 100;
  const size_t kps[2] = {4, 16};
  // One shared random-coverage instance; its optimum is bounded above by
  // greedy / (1 - 1/e), so the ratios below are lower bounds.
  const auto big = GenRandomCoverage(2000, 4000, 0.004, k, 12345);
  const double opt_upper =
      LazyGreedy(big.instance, big.instance.ground(), k).value /
      (1 - std::exp(-1.0));
  for (int j = 0; j < 2; ++j) {
    const size_t kp = kps[j];
    const uint32_t m = static_cast<uint32_t>(k / kp);
    const double envelope = 6 * std::sqrt(static_cast<double>(kp) / k);
    const auto hard = ParallelMap(50, [&](size_t i) {
      const auto g = GenSmallHard(k, static_cast<uint32_t>(kp), i);
      PipelineConfig cfg = Config(k, kp, m, i);
      cfg.measure_coreset = false;
      return *RunDistributed(g.instance, cfg, g.opt_value).ratio;
    });
    const Stats h = MeanSe(hard);
    const auto easy = ParallelMap(50, [&](size_t i) {
      SubmodularInstance inst = big.instance;
      PipelineConfig cfg = Config(k, kp, m, i);
      cfg.core = CoreAlg::kSmall;
      cfg.measure_coreset = false;
      return RunDistributed(inst, cfg, opt_upper).final.value / opt_upper;
    });
    const Stats e = MeanSe(easy);
    ratio_at[j] = e.mean;
    const double floor = 0.1 * std::sqrt(static_cast<double>(kp) / k);
    pass = pass && h.mean <= envelope && e.mean >= floor;
    detail += "k'=" + std::to_string(kp) + ": hard=" + Fmt(h.mean) +
              "<=" + Fmt(envelope) + " small_alg=" + Fmt(e.mean) + ">=" +
              Fmt(floor) + "; ";
  }
  // sqrt(16/4) = 2, so the ratio of ratios should sit in [1, 4].
  const double trend = ratio_at[1] / ratio_at[0];
  pass = pass && trend >= 1 && trend <= 4;
  detail += "trend=" + Fmt(trend) + " in [1,4]";
  return {pass, detail};
}

Outcome PseudoInvariants() {
  struct Row {
    bool size_ok, v_ok, final_ok;
  };
  const size_t k = 3;
  const auto rows = ParallelMap(200, [&](size_t i) {
    const auto g = GenRandomCoverage(60, 80, 0.06, k, i);
    PipelineConfig cfg = Config(k, DkCeil(k), 4, i);
    cfg.post = PostAlg::kPseudoGreedy;
    cfg.measure_coreset = false;
    const auto r = RunDistributed(g.instance, cfg, g.opt_value);
    const auto& p = *r.pseudo;
    const double plain =
        Greedy(g.instance, UnionOf(r.per_machine), k).value;
    return Row{p.v.size() <= k + 128, p.v_value >= plain,
               r.final.value >= plain};
  });
  size_t bad_size = 0, bad_v = 0, bad_final = 0;
  for (const auto& row : rows) {
    bad_size += !row.size_ok;
    bad_v += !row.v_ok;
    bad_final += !row.final_ok;
  }
  return {bad_size + bad_v + bad_final == 0,
          "seeds=200 size_violations=" + std::to_string(bad_size) +
              " v_below_greedy=" + std::to_string(bad_v) +
              " final_below_greedy=" + std::to_string(bad_final)};
}

Outcome TightnessBand() {
  const size_t k = 20;
  const size_t kp = DkCeil(k);
  struct Row {
    double lo, hi;
    size_t broken;
  };
  const auto rows = ParallelMap(30, [&](size_t i) {
    const auto g =
        GenTightness585(k, 0.05, 20, static_cast<uint32_t>(kp), 1, i);
    const auto r = RunDistributed(g.instance, Config(k, kp, 20, i), g.opt_value);
    const auto [lo, hi] = CoresetRatioBounds(g, r, k);
    return Row{lo, hi, TightnessStructureViolation(g)};
  });
  std::vector<double> lo, hi;
  size_t broken = 0;
  for (const auto& row : rows) {
    lo.push_back(row.lo);
    hi.push_back(row.hi);
    broken += row.broken;
  }
  const Stats l = MeanSe(lo), h = MeanSe(hi);
  return {l.mean >= 0.5 && h.mean <= 0.7 && broken == 0,
          "mean in [" + Fmt(l.mean) + "," + Fmt(h.mean) + "] se=" +
              Fmt(l.se) + " structure_violations=" + std::to_string(broken)};
}

// Runs the CLI for `args` in `dir` and returns every output file's bytes.
std::string CliSnapshot(const fs::path& dir, const std::string& threads) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  WriteFileAtomic(dir / "c.json", R"({
    "generator": {"name": "random-coverage",
                  "params": {"n": 16, "u": 30, "density": 0.15, "k": 3}},
    "grid": {"k": [3], "k_prime": ["k"], "m": [2, 4], "C": [1, 2],
             "core_alg": ["greedy", "threshold"], "post": ["greedy"]},
    "seeds": {"first": 1, "count": 8}})");
  WriteFileAtomic(dir / "r.json",
                  R"({"k":10,"k_prime":"dk","m":10,"seed":3,)"
                  R"("post":"pseudo_greedy","instance_path":"t.json"})");
  const std::string cli = std::string(CORESET_CLI_PATH) + " --out-dir " +
                          dir.string() + " ";
  const std::string env = "CORESET_THREADS=" + threads + " ";
  const std::vector<std::string> cmds = {
      "gen tightness-585 --k 10 --eps 0.1 --m 10 --out t",
      "gen half-barrier --k 5 --m 20 --seed 4 --out hb",
      "run r.json",
      "campaign c.json",
      "solve-lp --scan --grid 12 --out scan.csv",
      "solve-lp --k 4 --k2 2 --out kk2.json",
      "check-nice t.json --alg threshold --k-prime 30 --beta 1.2 --out nice.json",
  };
  std::string all;
  for (const auto& c : cmds) {
    if (std::system((env + cli + c + " >/dev/null 2>&1").c_str()) != 0) {
      return "command failed: " + c;
    }
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    all += f.filename().string() + "\n" + ReadFile(f);
  }
  return all;
}

Outcome Determinism() {
  const fs::path base = fs::temp_directory_path() /
                        ("coreset_acceptance_" + std::to_string(::getpid()));
  const std::string one = CliSnapshot(base / "t1", "1");
  const std::string eight = CliSnapshot(base / "t8", "8");
  const std::string again = CliSnapshot(base / "t1b", "1");
  fs::remove_all(base);
  const bool ok = one == eight && one == again &&
                  one.find("command failed") == std::string::npos;
  return {ok, "bytes=" + std::to_string(one.size()) +
                  (one == eight ? " threads 1 == 8" : " threads 1 != 8") +
                  (one == again ? ", rerun identical" : ", rerun differs")};
}

Outcome CompactVsEnumerated() {
  double worst = 0;
  size_t pairs = 0;
  for (size_t k = 1; k <= 3; ++k) {
    for (size_t dk = k; dk <= 10; ++dk) {
      for (size_t k2 = 1; k2 <= std::min<size_t>(3, k); ++k2) {
        const double a = SolveLpKk2(k, k2, Kk2Form::kCompact, dk).value;
        const double b = SolveLpKk2(k, k2, Kk2Form::kEnumerated, dk).value;
        worst = std::max(worst, std::abs(a - b));
        ++pairs;
      }
    }
  }
  return {worst <= 1e-6,
          "pairs=" + std::to_string(pairs) + " max_diff=" + Fmt(worst)};
}

}  // namespace
}  // namespace coreset

int main() {
  using namespace coreset;
  int failed = 0;
  auto report = [&](int id, const std::string& name,
                    const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = fn();
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " "
              << name << ": " << o.detail << " [" << Fmt(secs) << "s]"
              << std::endl;
  };
  report(1, "lp_certification", LpCertification);
  report(2, "nice_ness", NiceNess);
  std::vector<RunReport> runs;
  report(3, "coreset_one_third", [&] {
    runs = SmallCoverageRuns();
    return CoresetThird(runs);
  });
  report(4, "distributed_0.27", [&] { return Distributed027(runs); });
  report(5, "non_monotone_floor", NonMonotoneFloor);
  report(6, "half_barrier", HalfBarrier);
  report(7, "small_coreset_order", SmallCoreset);
  report(8, "pseudo_greedy_invariants", PseudoInvariants);
  report(9, "tightness_band", TightnessBand);
  report(10, "determinism", Determinism);
  report(11, "lp_compact_vs_enumerated", CompactVsEnumerated);
  return failed;
}
