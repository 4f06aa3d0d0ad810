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


// coreset_cli: instance generation, pipeline runs, campaigns and the LP
// certification front end. Every relative path is taken relative to
// --out-dir; every random choice flows from an explicit seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "coreset/coreset.hpp"

namespace fs = std::filesystem;

namespace coreset {
namespace {

fs::path Resolve(const fs::path& out_dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : out_dir / path;
}

// "x.json" -> "x.meta.json".
fs::path MetaPathFor(const fs::path& instance_path) {
  fs::path meta = instance_path;
  meta.replace_extension(".meta.json");
  return meta;
}

nlohmann::json ParseJsonFile(const fs::path& path) {
  try {
    return nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void WriteGenerated(const GeneratedInstance& g, const fs::path& base) {
  fs::path json_path = base;
  json_path += ".json";
  fs::path meta_path = base;
  meta_path += ".meta.json";
  WriteFileAtomic(json_path, InstanceToJson(g.instance));
  WriteFileAtomic(meta_path, MetaToJson(g).dump(2) + "\n");
}

GeneratedInstance LoadGenerated(const fs::path& instance_path) {
  GeneratedInstance g;
  g.instance = InstanceFromJson(ReadFile(instance_path));
  const fs::path meta = MetaPathFor(instance_path);
  if (fs::exists(meta)) ApplyMeta(ReadFile(meta), g);
  return g;
}

// ---------------------------------------------------------------- run

struct RunSpec {
  PipelineConfig config;
  bool use_fixed = false;
};

size_t ParseKPrime(const nlohmann::json& v, size_t k) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "dk") return DkCeil(k);
    if (s == "k") return k;
    throw InputError("k_prime must be an integer, \"k\" or \"dk\"");
  }
  if (!v.is_number_integer() || v.get<int64_t>() < 1) {
    throw InputError("k_prime must be a positive integer");
  }
  return v.get<size_t>();
}

template <typename T>
T GetUint(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing key ") + key);
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<int64_t>() < 0) {
    throw InputError(std::string(key) + " must be a non-negative integer");
  }
  return v.get<T>();
}

RunSpec SpecFromJson(const nlohmann::json& j) {
  RunSpec s;
  auto& c = s.config;
  c.k = GetUint<size_t>(j, "k");
  if (!j.contains("k_prime")) throw InputError("missing key k_prime");
  c.k_prime = ParseKPrime(j.at("k_prime"), c.k);
  c.m = GetUint<uint32_t>(j, "m");
  c.C = j.contains("C") ? GetUint<uint32_t>(j, "C") : 1;
  c.core = ParseCoreAlg(j.value("core_alg", std::string("greedy")));
  c.post = ParsePostAlg(j.value("post", std::string("greedy")));
  c.epsilon = j.value("epsilon", 0.1);
  c.seeds = SeedTree(GetUint<uint64_t>(j, "seed"));
  s.use_fixed = j.value("use_fixed_clustering", false);
  c.Validate();
  return s;
}

RunReport Execute(const GeneratedInstance& g, const RunSpec& spec) {
  const Clustering* fixed = nullptr;
  if (spec.use_fixed) {
    if (!g.fixed_clustering) {
      throw InputError("use_fixed_clustering set but the instance has none");
    }
    fixed = &*g.fixed_clustering;
  }
  return RunDistributed(g.instance, spec.config, g.opt_value, fixed);
}

int CmdRun(const fs::path& out_dir, const std::string& config_arg,
           const std::string& name_arg) {
  const fs::path config_path = Resolve(out_dir, config_arg);
  const nlohmann::json j = ParseJsonFile(config_path);
  if (!j.contains("instance_path")) throw InputError("missing instance_path");
  const RunSpec spec = SpecFromJson(j);
  const fs::path instance_path =
      Resolve(out_dir, j.at("instance_path").get<std::string>());
  if (!fs::exists(instance_path)) {
    throw IoError("instance not found: " + instance_path.string());
  }
  GeneratedInstance g = LoadGenerated(instance_path);
  g.instance.stats().Reset();
  const RunReport report = Execute(g, spec);
  const std::string name =
      name_arg.empty() ? config_path.stem().string() : name_arg;
  WriteFileAtomic(out_dir / (name + ".report.json"),
                  ReportToJson(report, spec.config).dump(2) + "\n");
  WriteFileAtomic(out_dir / (name + ".csv"),
                  std::string(kRunCsvHeader) + "\n" +
                      ReportCsvRow(report, spec.config) + "\n");
  std::cout << ReportCsvRow(report, spec.config) << "\n";
  return 0;
}

// ----------------------------------------------------------- campaign

struct GridPoint {
  nlohmann::json run;  // a run config without seed and instance
};

std::vector<nlohmann::json> AsList(const nlohmann::json& grid,
                                   const char* key, nlohmann::json fallback) {
  if (!grid.contains(key)) return {fallback};
  const auto& v = grid.at(key);
  if (!v.is_array()) return {v};
  if (v.empty()) throw InputError(std::string("empty grid list: ") + key);
  return {v.begin(), v.end()};
}

// Cartesian product in a fixed key order, first key outermost.
std::vector<GridPoint> ExpandGrid(const nlohmann::json& grid) {
  const char* keys[] = {"k", "k_prime", "m", "C", "core_alg", "post",
                        "epsilon"};
  const nlohmann::json defaults[] = {nullptr, "k", nullptr, 1, "greedy",
                                     "greedy", 0.1};
  std::vector<GridPoint> points(1);
  for (size_t i = 0; i < std::size(keys); ++i) {
    if (defaults[i].is_null() && !grid.contains(keys[i])) {
      throw InputError(std::string("campaign grid needs ") + keys[i]);
    }
    std::vector<GridPoint> next;
    for (const auto& p : points) {
      for (const auto& v : AsList(grid, keys[i], defaults[i])) {
        GridPoint q = p;
        q.run[keys[i]] = v;
        next.push_back(q);
      }
    }
    points = std::move(next);
  }
  if (grid.contains("use_fixed_clustering")) {
    for (auto& p : points) {
      p.run["use_fixed_clustering"] = grid.at("use_fixed_clustering");
    }
  }
  return points;
}

std::string DetailHeader() {
  return std::string("grid_index,") + kRunCsvHeader;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

using RowKey = std::pair<size_t, uint64_t>;  // (grid_index, seed)

std::map<RowKey, std::string> ReadDetail(const fs::path& path) {
  std::map<RowKey, std::string> rows;
  if (!fs::exists(path)) return rows;
  std::istringstream in(ReadFile(path));
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (line != DetailHeader()) {
    throw InputError(path.string() +
                     ": existing detail CSV has a different header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = SplitCsv(line);
    if (cells.size() < 3) throw InputError("malformed detail row: " + line);
    rows[{std::stoull(cells[0]), std::stoull(cells[2])}] = line;
  }
  return rows;
}

void WriteDetail(const fs::path& path,
                 const std::map<RowKey, std::string>& rows) {
  std::string text = DetailHeader() + "\n";
  for (const auto& [key, line] : rows) text += line + "\n";
  WriteFileAtomic(path, text);
}

struct Moments {
  size_t count = 0;
  double sum = 0;
  double sum_sq = 0;

  void Add(double v) {
    ++count;
    sum += v;
    sum_sq += v * v;
  }
  std::string Mean() const {
    return count ? FormatDouble(sum / count) : std::string();
  }
  // Standard error of the mean, sample variance.
  std::string Se() const {
    if (count < 2) return count ? "0" : std::string();
    const double mean = sum / count;
    const double var =
        std::max(0.0, (sum_sq - count * mean * mean) / (count - 1));
    return FormatDouble(std::sqrt(var / count));
  }
};

std::string Summary(const std::vector<GridPoint>& points,
                    const std::map<RowKey, std::string>& rows) {
  // Column positions inside a detail row (grid_index is column 0).
  const auto header = SplitCsv(DetailHeader());
  auto col = [&](const std::string& name) {
    return static_cast<size_t>(
        std::find(header.begin(), header.end(), name) - header.begin());
  };
  const size_t c_final = col("final_value"), c_ratio = col("ratio"),
               c_core = col("coreset_ratio");
  std::vector<Moments> finals(points.size()), ratios(points.size()),
      cores(points.size());
  for (const auto& [key, line] : rows) {
    if (key.first >= points.size()) continue;
    const auto cells = SplitCsv(line);
    finals[key.first].Add(std::stod(cells[c_final]));
    if (!cells[c_ratio].empty()) ratios[key.first].Add(std::stod(cells[c_ratio]));
    if (c_core < cells.size() && !cells[c_core].empty()) {
      cores[key.first].Add(std::stod(cells[c_core]));
    }
  }
  std::ostringstream out;
  out << "format_version,grid_index,k,k_prime,m,C,core_alg,post,epsilon,runs,"
         "mean_final_value,se_final_value,mean_ratio,se_ratio,"
         "mean_coreset_ratio,se_coreset_ratio\n";
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& r = points[i].run;
    const size_t k = r.at("k").get<size_t>();
    out << kFormatVersion << ',' << i << ',' << k << ','
        << ParseKPrime(r.at("k_prime"), k) << ',' << r.at("m").get<uint32_t>()
        << ',' << r.at("C").get<uint32_t>() << ','
        << r.at("core_alg").get<std::string>() << ','
        << r.at("post").get<std::string>() << ','
        << FormatDouble(r.at("epsilon").get<double>()) << ','
        << finals[i].count << ',' << finals[i].Mean() << ','
        << finals[i].Se() << ',' << ratios[i].Mean() << ',' << ratios[i].Se()
        << ',' << cores[i].Mean() << ',' << cores[i].Se() << '\n';
  }
  return out.str();
}

int CmdCampaign(const fs::path& out_dir, const std::string& campaign_arg,
                size_t max_new) {
  const nlohmann::json j = ParseJsonFile(Resolve(out_dir, campaign_arg));
  if (!j.contains("grid")) throw InputError("campaign needs a grid");
  const auto points = ExpandGrid(j.at("grid"));
  const auto& seeds = j.contains("seeds") ? j.at("seeds") : nlohmann::json{};
  const uint64_t first = seeds.value("first", uint64_t{0});
  const uint64_t count = seeds.value("count", uint64_t{1});
  const fs::path detail_path =
      Resolve(out_dir, j.value("detail_csv", std::string("detail.csv")));
  const fs::path summary_path =
      Resolve(out_dir, j.value("summary_csv", std::string("summary.csv")));

  // Either one instance for the whole campaign or a fresh generated one per
  // seed (generator seed = run seed).
  std::optional<GeneratedInstance> shared;
  std::string gen_name;
  nlohmann::json gen_params;
  if (j.contains("instance_path")) {
    shared = LoadGenerated(
        Resolve(out_dir, j.at("instance_path").get<std::string>()));
  } else if (j.contains("generator")) {
    gen_name = j.at("generator").at("name").get<std::string>();
    gen_params = j.at("generator").value("params", nlohmann::json::object());
  } else {
    throw InputError("campaign needs instance_path or generator");
  }

  std::vector<RunSpec> specs;
  for (const auto& p : points) {
    nlohmann::json r = p.run;
    r["seed"] = 0;
    specs.push_back(SpecFromJson(r));  // validates every grid point up front
  }

  auto rows = ReadDetail(detail_path);
  std::vector<RowKey> todo;
  for (size_t i = 0; i < points.size(); ++i) {
    for (uint64_t s = first; s < first + count; ++s) {
      if (!rows.count({i, s})) todo.push_back({i, s});
    }
  }
  if (max_new > 0 && todo.size() > max_new) todo.resize(max_new);

  // Detail rows are flushed after every batch so an interrupted campaign
  // loses at most one batch.
  const size_t batch = std::max<size_t>(1, 4 * ThreadCount());
  for (size_t start = 0; start < todo.size(); start += batch) {
    const size_t end = std::min(todo.size(), start + batch);
    auto lines = ParallelMap(end - start, [&](size_t t) {
      const auto [grid_index, seed] = todo[start + t];
      RunSpec spec = specs[grid_index];
      spec.config.seeds = SeedTree(seed);
      // A private copy per run: call counters live in the instance.
      const GeneratedInstance g =
          shared ? *shared : Generate(gen_name, gen_params, seed);
      const RunReport report = Execute(g, spec);
      return std::to_string(grid_index) + "," +
             ReportCsvRow(report, spec.config);
    });
    for (size_t t = 0; t < lines.size(); ++t) {
      rows[todo[start + t]] = std::move(lines[t]);
    }
    WriteDetail(detail_path, rows);
  }
  WriteDetail(detail_path, rows);
  WriteFileAtomic(summary_path, Summary(points, rows));
  return 0;
}

// ------------------------------------------------------------- LP side

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

int CmdCertifyLp(bool skip_scan, bool force_fail, uint64_t grid) {
  std::vector<Check> checks;
  auto add = [&](std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  };
  const double two_minus_root2 = 2 - std::sqrt(2.0);
  const double half_root = std::sqrt(0.5);
  const double sle2_tol = force_fail ? 0.0 : 1e-4;

  if (!skip_scan) {
    const LpRScan scan = ScanLpR(grid);
    double worst = 0;
    for (const auto& c : scan.cells) worst = std::max(worst, c.max_violation);
    const auto scaled = [&](long d) {
      return static_cast<long>(std::lround(d * static_cast<double>(grid) / 160));
    };
    add("lp_r_scan_min_at_least_0.545", scan.min_value >= 0.545,
        "min=" + FormatDouble(scan.min_value) + " at d=" +
            std::to_string(scan.argmin) + "/" + std::to_string(grid));
    add("lp_r_argmin_near_127_of_160",
        std::labs(static_cast<long>(scan.argmin) - scaled(127)) <= scaled(2),
        "argmin d=" + std::to_string(scan.argmin));
    add("lp_r_scan_min_at_most_0.60", scan.min_value <= 0.60,
        "min=" + FormatDouble(scan.min_value));
    add("lp_r_constraints_verified", worst <= 1e-7,
        "max violation=" + FormatDouble(worst));
  }

  const Sle2Result s2 = MinimizeSle2();
  add("sle2_beta_is_2_minus_sqrt2",
      std::abs(s2.beta - two_minus_root2) <= sle2_tol,
      "beta=" + FormatDouble(s2.beta));
  add("sle2_minimizer",
      std::abs(s2.lambda - (1 - half_root)) <= 1e-3 &&
          std::abs(s2.alpha - half_root) <= 1e-3 && std::abs(s2.r) <= 1e-3,
      "alpha=" + FormatDouble(s2.alpha) + " lambda=" +
          FormatDouble(s2.lambda) + " r=" + FormatDouble(s2.r));

  const Sle3Result s3 = MinimizeSle3();
  add("sle3_stationary_r_0.71",
      std::abs(s3.r_star_closed_form - 0.71) <= 0.002,
      "r*=" + FormatDouble(s3.r_star_closed_form) +
          " (literal inequality gives " + FormatDouble(s3.r_star) + ")");
  add("sle3_beta_above_2_minus_sqrt2", s3.beta >= two_minus_root2 - 1e-9,
      "beta=" + FormatDouble(s3.beta));
  add("sle3_lambda1_boundary_at_least_1_minus_1_over_e",
      s3.beta_lambda1_min >= 1 - std::exp(-1.0) - 1e-9,
      "min=" + FormatDouble(s3.beta_lambda1_min));
  add("sle3_lambda0_boundary",
      s3.alpha_lambda0_max <= std::sqrt(2.0) - 1 + 1e-9 &&
          s3.beta_lambda0_min >= two_minus_root2 - 1e-9,
      "alpha<=" + FormatDouble(s3.alpha_lambda0_max) + " beta>=" +
          FormatDouble(s3.beta_lambda0_min));

  // LP^{k,k2}: minimum over k2 per k, trend towards 2 - sqrt 2.
  std::vector<double> minima;
  std::string trend;
  for (size_t k : {8, 16, 32}) {
    double lo = 1e9;
    for (size_t k2 = 1; k2 <= k; ++k2) {
      lo = std::min(lo, SolveLpKk2(k, k2).value);
    }
    minima.push_back(lo);
    trend += " k=" + std::to_string(k) + ":" + FormatDouble(lo);
  }
  bool trend_ok = true;
  for (size_t i = 0; i < minima.size(); ++i) {
    trend_ok = trend_ok && minima[i] > 0.33 && minima[i] <= 1 &&
               minima[i] >= two_minus_root2 - 0.02;
    if (i > 0) trend_ok = trend_ok && minima[i] >= minima[i - 1] - 0.02;
  }
  add("lp_kk2_trend", trend_ok, trend.substr(1));

  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail
              << "\n";
    all = all && c.pass;
  }
  return all ? 0 : 1;
}

std::pair<uint64_t, uint64_t> ParseRational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (s == "1") return {1, 1};
      throw InputError("r must be p/q");
    }
    const uint64_t p = std::stoull(s.substr(0, slash));
    const uint64_t q = std::stoull(s.substr(slash + 1));
    if (p == 0 || q == 0 || p > q) throw InputError("r must be in (0, 1]");
    return {p, q};
  } catch (const std::logic_error&) {
    throw InputError("cannot parse r: " + s);
  }
}

OrderedJson SolutionJson(const LpProblem& p, const LpSolution& s) {
  OrderedJson j;
  j["status"] = LpStatusName(s.status);
  j["objective"] = s.objective_value;
  j["max_violation"] = s.max_violation;
  j["iterations"] = s.iterations;
  OrderedJson vars = OrderedJson::object();
  for (size_t i = 0; i < s.x.size() && i < p.names.size(); ++i) {
    vars[p.names[i]] = s.x[i];
  }
  j["argmin"] = vars;
  return j;
}

void Emit(const fs::path& out_dir, const std::string& out,
          const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteFileAtomic(Resolve(out_dir, out), text);
  }
}

int CmdSolveLp(const fs::path& out_dir, const std::string& r, size_t k,
               size_t k2, const std::string& form, bool scan, uint64_t grid,
               const std::string& out) {
  if (scan) {
    const LpRScan s = ScanLpR(grid);
    std::string text = "cell,r,optimum,max_violation\n";
    for (const auto& c : s.cells) {
      text += std::to_string(c.d) + "," + FormatDouble(c.r) + "," +
              FormatDouble(c.value) + "," + FormatDouble(c.max_violation) +
              "\n";
    }
    Emit(out_dir, out, text);
    return 0;
  }
  OrderedJson j;
  LpProblem problem;
  if (!r.empty()) {
    const auto [p, q] = ParseRational(r);
    j["r"] = std::to_string(p) + "/" + std::to_string(q);
    problem = BuildLpR(p, q);
  } else if (k > 0 && k2 > 0) {
    j["k"] = k;
    j["k2"] = k2;
    j["form"] = form;
    Kk2Form f = Kk2Form::kCompact;
    if (form == "enumerated") {
      f = Kk2Form::kEnumerated;
    } else if (form != "compact") {
      throw InputError("form must be compact or enumerated");
    }
    problem = BuildLpKk2(k, k2, f);
  } else {
    throw InputError("solve-lp needs --r, or --k with --k2, or --scan");
  }
  const LpSolution s = SolveLp(problem);
  const OrderedJson solution = SolutionJson(problem, s);
  for (const auto& [key, value] : solution.items()) {
    j[key] = value;
  }
  Emit(out_dir, out, j.dump(2) + "\n");
  return s.status == LpStatus::kOptimal ? 0 : 1;
}

int CmdCheckNice(const fs::path& out_dir, const std::string& instance_arg,
                 const std::string& alg, size_t k_prime, double beta,
                 double epsilon, size_t trials, uint64_t seed,
                 const std::string& out) {
  const GeneratedInstance g = LoadGenerated(Resolve(out_dir, instance_arg));
  Selector selector;
  if (alg == "greedy") {
    selector = GreedySelector();
  } else if (alg == "lazy") {
    selector = LazyGreedySelector();
  } else if (alg == "threshold") {
    selector = ThresholdSelector(epsilon);
  } else if (alg == "random_greedy") {
    selector = RandomGreedySelector(seed);
  } else {
    throw InputError("unknown algorithm: " + alg);
  }
  CounterRng rng(SeedTree(seed).Derive(SeedRole::kNiceCheck, 0));
  const NiceReport r = CheckBetaNice(selector, g.instance, g.instance.ground(),
                                     k_prime, beta, trials, rng);
  OrderedJson j;
  j["algorithm"] = selector.name;
  j["k_prime"] = k_prime;
  j["beta"] = beta;
  j["beta_observed"] = r.beta_observed;
  j["property1_violations"] = r.property1_violations;
  j["property2_violations"] = r.property2_violations;
  j["trials"] = r.trials;
  j["exhaustive"] = r.exhaustive;
  Emit(out_dir, out, j.dump(2) + "\n");
  return 0;
}

}  // namespace
}  // namespace coreset

int main(int argc, char** argv) {
  using namespace coreset;
  CLI::App app{"Randomized composable core-sets for submodular maximization"};
  app.require_subcommand(1);
  std::string out_dir_arg = ".";
  app.add_option("--out-dir", out_dir_arg, "Base directory for all paths");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::string gen_name, gen_out;
  uint64_t gen_seed = 0;
  std::map<std::string, std::optional<double>> reals = {
      {"eps", {}}, {"density", {}}, {"arc-prob", {}}};
  std::map<std::string, std::optional<uint64_t>> ints = {
      {"k", {}}, {"m", {}}, {"C", {}}, {"n", {}},
      {"u", {}}, {"ell", {}}, {"k-prime", {}}};
  gen->add_option("generator", gen_name, "Generator name")
      ->required()
      ->check(CLI::IsMember(GeneratorNames()));
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output base name (default: generator)");
  for (auto& [key, value] : ints) gen->add_option("--" + key, value);
  for (auto& [key, value] : reals) gen->add_option("--" + key, value);

  // run
  auto* run = app.add_subcommand("run", "Run the distributed pipeline");
  std::string run_config, run_name;
  run->add_option("config", run_config, "Run config JSON")->required();
  run->add_option("--name", run_name, "Output base name (default: config)");

  // campaign
  auto* campaign = app.add_subcommand("campaign", "Run a grid of configs");
  std::string campaign_path;
  size_t max_new = 0;
  campaign->add_option("campaign", campaign_path, "Campaign JSON")
      ->required();
  campaign->add_option("--max-new-runs", max_new,
                       "Stop after this many new runs (0: no limit)");

  // certify-lp
  auto* certify = app.add_subcommand("certify-lp", "Check the LP constants");
  bool skip_scan = false, force_fail = false;
  uint64_t certify_grid = 160;
  certify->add_flag("--skip-scan", skip_scan, "Skip the LP^r scan");
  certify->add_flag("--force-fail", force_fail,
                    "Test hook: demand an exact SLE2 minimum");
  certify->add_option("--grid", certify_grid, "LP^r grid size")
      ->check(CLI::Range(2, 100000));

  // solve-lp
  auto* solve = app.add_subcommand("solve-lp", "Solve one factor LP");
  std::string solve_r, solve_form = "compact", solve_out;
  size_t solve_k = 0, solve_k2 = 0;
  bool solve_scan = false;
  uint64_t solve_grid = 160;
  solve->add_option("--r", solve_r, "r as p/q");
  solve->add_option("--k", solve_k);
  solve->add_option("--k2", solve_k2);
  solve->add_option("--form", solve_form, "compact or enumerated");
  solve->add_flag("--scan", solve_scan, "Scan LP^r over the grid (CSV)");
  solve->add_option("--grid", solve_grid)->check(CLI::Range(2, 100000));
  solve->add_option("--out", solve_out, "Output file (default: stdout)");

  // check-nice
  auto* nice = app.add_subcommand("check-nice", "Check beta-niceness");
  std::string nice_instance, nice_alg = "greedy", nice_out;
  size_t nice_kp = 1, nice_trials = 64;
  double nice_beta = 1, nice_eps = 0.1;
  uint64_t nice_seed = 0;
  nice->add_option("instance", nice_instance, "Instance JSON")->required();
  nice->add_option("--alg", nice_alg, "greedy, lazy, threshold");
  nice->add_option("--k-prime", nice_kp)->check(CLI::PositiveNumber);
  nice->add_option("--beta", nice_beta);
  nice->add_option("--eps", nice_eps);
  nice->add_option("--trials", nice_trials);
  nice->add_option("--seed", nice_seed);
  nice->add_option("--out", nice_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const fs::path out_dir(out_dir_arg);
  try {
    fs::create_directories(out_dir);
    if (gen->parsed()) {
      nlohmann::json params = nlohmann::json::object();
      for (const auto& [key, value] : ints) {
        std::string k = key == "k-prime" ? "k_prime" : key;
        if (value) params[k] = *value;
      }
      for (const auto& [key, value] : reals) {
        std::string k = key == "arc-prob" ? "arc_prob" : key;
        if (value) params[k] = *value;
      }
      const GeneratedInstance g = Generate(gen_name, params, gen_seed);
      WriteGenerated(g, out_dir / (gen_out.empty() ? gen_name : gen_out));
      return 0;
    }
    if (run->parsed()) return CmdRun(out_dir, run_config, run_name);
    if (campaign->parsed()) return CmdCampaign(out_dir, campaign_path, max_new);
    if (certify->parsed()) {
      return CmdCertifyLp(skip_scan, force_fail, certify_grid);
    }
    if (solve->parsed()) {
      return CmdSolveLp(out_dir, solve_r, solve_k, solve_k2, solve_form,
                        solve_scan, solve_grid, solve_out);
    }
    if (nice->parsed()) {
      return CmdCheckNice(out_dir, nice_instance, nice_alg, nice_kp,
                          nice_beta, nice_eps, nice_trials, nice_seed,
                          nice_out);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
