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

#ifndef CORESET_LP_SOLVER_HPP_
#define CORESET_LP_SOLVER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "coreset/errors.hpp"

namespace coreset {

enum class Relation { kLe, kGe, kEq };

struct LpConstraint {
  std::vector<double> row;
  Relation rel = Relation::kLe;
  double rhs = 0;
};

// minimize objective . x  subject to the constraints and lo <= x <= hi.
// Infinite bounds are allowed.
struct LpProblem {
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> names;

  size_t num_vars() const { return objective.size(); }

  size_t AddVar(std::string name, double lo, double hi, double cost = 0) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    names.push_back(std::move(name));
    for (auto& c : constraints) c.row.push_back(0);
    return objective.size() - 1;
  }

  LpConstraint& AddConstraint(Relation rel, double rhs) {
    constraints.push_back({std::vector<double>(num_vars(), 0.0), rel, rhs});
    return constraints.back();
  }

  void Validate() const {
    const size_t n = num_vars();
    if (lower.size() != n || upper.size() != n) {
      throw InputError("LP bounds do not match variable count");
    }
    for (double c : objective) {
      if (!std::isfinite(c)) throw InputError("non-finite objective");
    }
    for (const auto& c : constraints) {
      if (c.row.size() != n) throw InputError("LP row has wrong length");
      if (!std::isfinite(c.rhs)) throw InputError("non-finite rhs");
      for (double a : c.row) {
        if (!std::isfinite(a)) throw InputError("non-finite coefficient");
      }
    }
    for (size_t j = 0; j < n; ++j) {
      if (lower[j] > upper[j]) throw InputError("empty bound interval");
      if (std::isnan(lower[j]) || std::isnan(upper[j])) {
        throw InputError("NaN bound");
      }
    }
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* LpStatusName(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective_value = 0;
  std::vector<double> x;
  double max_violation = 0;
  size_t iterations = 0;
};

// Largest violation of any constraint or bound at x.
inline double MaxViolation(const LpProblem& p, const std::vector<double>& x) {
  double worst = 0;
  for (const auto& c : p.constraints) {
    double lhs = 0;
    for (size_t j = 0; j < x.size(); ++j) lhs += c.row[j] * x[j];
    double v = 0;
    switch (c.rel) {
      case Relation::kLe: v = lhs - c.rhs; break;
      case Relation::kGe: v = c.rhs - lhs; break;
      case Relation::kEq: v = std::abs(lhs - c.rhs); break;
    }
    worst = std::max(worst, v);
  }
  for (size_t j = 0; j < x.size(); ++j) {
    worst = std::max(worst, p.lower[j] - x[j]);
    worst = std::max(worst, x[j] - p.upper[j]);
  }
  return worst;
}

namespace internal {

// Dense tableau, two phases. Entering column by most negative reduced
// cost; after a long run of degenerate pivots it switches to Bland's rule
// (smallest index) until the objective moves again. Bland pivots are
// badly conditioned, so the switch comes late.
//
// The original rows are kept. Every few pivots the basic solution is
// checked against them, and when it has drifted the tableau is rebuilt
// from the current basis by Gauss-Jordan elimination with partial
// pivoting. Without this the LP^r family loses feasibility in a few
// thousand pivots.
class Tableau {
 public:
  Tableau(size_t rows, size_t cols)
      : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows),
        cost_(cols, 0.0) {}

  double& at(size_t i, size_t j) { return t_[i * (n_ + 1) + j]; }
  double at(size_t i, size_t j) const { return t_[i * (n_ + 1) + j]; }
  double& rhs(size_t i) { return at(i, n_); }
  size_t& basis(size_t i) { return basis_[i]; }
  size_t rows() const { return m_; }
  size_t cols() const { return n_; }

  // Call once the rows are filled in and before any pivot.
  void Freeze() { original_.assign(t_.begin(), t_.begin() + m_ * (n_ + 1)); }

  // Installs a phase objective and prices it against the current basis.
  void SetCosts(std::vector<double> cost) {
    cost_ = std::move(cost);
    Price();
  }

  void Pivot(size_t pr, size_t pc) {
    const size_t w = n_ + 1;
    double* prow = &t_[pr * w];
    const double inv = 1.0 / prow[pc];
    for (size_t j = 0; j <= n_; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    nz_.clear();
    for (size_t j = 0; j <= n_; ++j) {
      if (prow[j] != 0.0) nz_.push_back(j);
    }
    for (size_t i = 0; i <= m_; ++i) {
      if (i == pr) continue;
      double* r = &t_[i * w];
      const double f = r[pc];
      if (f == 0.0) continue;
      for (size_t j : nz_) r[j] -= f * prow[j];
      r[pc] = 0.0;
      if (i < m_ && r[n_] < 0 && r[n_] > -kFeasTol) r[n_] = 0;
    }
    basis_[pr] = pc;
  }

  // Worst |A x_B - b| over the original rows.
  double Residual() const {
    double worst = 0;
    const size_t w = n_ + 1;
    for (size_t i = 0; i < m_; ++i) {
      const double* r = &original_[i * w];
      double lhs = 0;
      for (size_t k = 0; k < m_; ++k) lhs += r[basis_[k]] * at(k, n_);
      worst = std::max(worst, std::abs(lhs - r[n_]));
    }
    return worst;
  }

  // Rebuilds B^-1 [A | b] from the original rows for the current basis.
  void Refactor() {
    const size_t w = n_ + 1;
    std::vector<double> work = original_;
    std::vector<size_t> row_of(m_);
    std::vector<char> used(m_, 0);
    for (size_t k = 0; k < m_; ++k) {
      const size_t col = basis_[k];
      size_t pr = m_;
      double best = 0;
      for (size_t i = 0; i < m_; ++i) {
        if (!used[i] && std::abs(work[i * w + col]) > best) {
          best = std::abs(work[i * w + col]);
          pr = i;
        }
      }
      if (pr == m_ || best < 1e-12) {
        throw SolverError("simplex basis became singular");
      }
      used[pr] = 1;
      row_of[k] = pr;
      double* prow = &work[pr * w];
      const double inv = 1.0 / prow[col];
      for (size_t j = 0; j < w; ++j) prow[j] *= inv;
      prow[col] = 1.0;
      nz_.clear();
      for (size_t j = 0; j < w; ++j) {
        if (prow[j] != 0.0) nz_.push_back(j);
      }
      for (size_t i = 0; i < m_; ++i) {
        if (i == pr) continue;
        double* r = &work[i * w];
        const double f = r[col];
        if (f == 0.0) continue;
        for (size_t j : nz_) r[j] -= f * prow[j];
        r[col] = 0.0;
      }
    }
    for (size_t k = 0; k < m_; ++k) {
      std::copy(work.begin() + row_of[k] * w, work.begin() + (row_of[k] + 1) * w,
                t_.begin() + k * w);
      // Degenerate rows come back as -1e-17 and the like.
      if (at(k, n_) < 0 && at(k, n_) > -kFeasTol) at(k, n_) = 0;
    }
    Price();
  }

  // Returns false when unbounded. `allowed[j]` masks entering columns.
  bool Optimize(const std::vector<char>& allowed, double tol,
                size_t& iterations, size_t max_iterations) {
    size_t degenerate = 0;
    const size_t bland_after = 500;
    bool fresh = false;  // tableau rebuilt since the last pivot
    for (size_t since_check = 0;; ++since_check) {
      if (since_check >= kCheckEvery) {
        since_check = 0;
        if (Residual() > kDriftTol) Refactor();
      }
      const bool bland = degenerate >= bland_after;
      size_t pc = n_;
      double best = -tol;
      for (size_t j = 0; j < n_; ++j) {
        if (!allowed[j]) continue;
        const double d = at(m_, j);
        if (d < best) {
          pc = j;
          best = d;
          if (bland) break;
        }
      }
      if (pc == n_) {
        // Confirm optimality on a clean tableau.
        if (fresh) return true;
        Refactor();
        fresh = true;
        continue;
      }
      if (++iterations > max_iterations) {
        throw SolverError("simplex iteration limit reached");
      }
      // Harris two-pass ratio test: the tightest ratio with a little slack,
      // then the largest pivot among rows within it. Bland mode takes the
      // smallest basic index instead.
      double bound = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < m_; ++i) {
        const double a = at(i, pc);
        if (a <= kPivotTol) continue;
        bound = std::min(bound, (std::max(at(i, n_), 0.0) + kFeasTol) / a);
      }
      size_t pr = m_;
      double ratio = 0, pivot = 0;
      for (size_t i = 0; i < m_; ++i) {
        const double a = at(i, pc);
        if (a <= kPivotTol) continue;
        const double q = std::max(at(i, n_), 0.0) / a;
        if (q > bound) continue;
        if (pr == m_ || (bland ? basis_[i] < basis_[pr] : a > pivot)) {
          pr = i;
          ratio = q;
          pivot = a;
        }
      }
      if (pr == m_) return false;
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      Pivot(pr, pc);
      fresh = false;
    }
  }

  // Smaller pivots than this wreck the dense tableau within a few
  // thousand iterations on the LP^r family.
  static constexpr double kPivotTol = 1e-7;
  static constexpr double kFeasTol = 1e-9;
  static constexpr double kDriftTol = 1e-9;
  static constexpr size_t kCheckEvery = 50;

 private:
  // Reduced-cost row from cost_ and the current tableau rows.
  void Price() {
    const size_t w = n_ + 1;
    double* c = &t_[m_ * w];
    for (size_t j = 0; j < n_; ++j) c[j] = cost_[j];
    c[n_] = 0.0;
    for (size_t i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* r = &t_[i * w];
      for (size_t j = 0; j <= n_; ++j) c[j] -= cb * r[j];
    }
    for (size_t i = 0; i < m_; ++i) c[basis_[i]] = 0.0;
  }

  size_t m_, n_;
  std::vector<double> t_;
  std::vector<size_t> basis_;
  std::vector<double> cost_;
  std::vector<double> original_;
  std::vector<size_t> nz_;
};

}  // namespace internal

inline constexpr double kMaxResidual = 1e-6;

// Primal simplex on a dense tableau. The returned point is checked against
// the original problem; `max_violation` reports the worst residual.
inline LpSolution SolveLp(const LpProblem& problem, double tol = 1e-8,
                          size_t max_iterations = 200000) {
  problem.Validate();
  const size_t n = problem.num_vars();
  const double inf = std::numeric_limits<double>::infinity();

  // Standard-form columns: each original variable becomes one or two
  // non-negative columns. x = shift + sign * y (or y_plus - y_minus).
  struct Map {
    size_t col;
    double sign;
    double shift;
    bool split;
  };
  std::vector<Map> map(n);
  size_t cols = 0;
  struct Row {
    std::vector<std::pair<size_t, double>> terms;
    Relation rel;
    double rhs;
  };
  std::vector<Row> rows;
  for (size_t j = 0; j < n; ++j) {
    const double lo = problem.lower[j], hi = problem.upper[j];
    if (lo > -inf) {
      map[j] = {cols++, 1.0, lo, false};
      if (hi < inf) rows.push_back({{{map[j].col, 1.0}}, Relation::kLe, hi - lo});
    } else if (hi < inf) {
      map[j] = {cols++, -1.0, hi, false};
    } else {
      map[j] = {cols, 1.0, 0.0, true};
      cols += 2;
    }
  }
  const size_t structural = cols;
  for (const auto& c : problem.constraints) {
    Row r{{}, c.rel, c.rhs};
    for (size_t j = 0; j < n; ++j) {
      const double a = c.row[j];
      if (a == 0.0) continue;
      r.rhs -= a * map[j].shift;
      r.terms.push_back({map[j].col, a * map[j].sign});
      if (map[j].split) r.terms.push_back({map[j].col + 1, -a});
    }
    rows.push_back(std::move(r));
  }
  // Make every rhs non-negative.
  for (auto& r : rows) {
    if (r.rhs < 0) {
      r.rhs = -r.rhs;
      for (auto& t : r.terms) t.second = -t.second;
      if (r.rel == Relation::kLe) {
        r.rel = Relation::kGe;
      } else if (r.rel == Relation::kGe) {
        r.rel = Relation::kLe;
      }
    }
  }
  const size_t m = rows.size();
  size_t slack_count = 0, art_count = 0;
  for (const auto& r : rows) {
    if (r.rel != Relation::kEq) ++slack_count;
    if (r.rel != Relation::kLe) ++art_count;
  }
  const size_t total = structural + slack_count + art_count;
  internal::Tableau tab(m, total);
  std::vector<char> is_art(total, 0);
  size_t next_slack = structural, next_art = structural + slack_count;
  for (size_t i = 0; i < m; ++i) {
    for (const auto& [col, a] : rows[i].terms) tab.at(i, col) += a;
    tab.rhs(i) = rows[i].rhs;
    if (rows[i].rel == Relation::kLe) {
      tab.at(i, next_slack) = 1.0;
      tab.basis(i) = next_slack++;
    } else {
      if (rows[i].rel == Relation::kGe) tab.at(i, next_slack++) = -1.0;
      tab.at(i, next_art) = 1.0;
      is_art[next_art] = 1;
      tab.basis(i) = next_art++;
    }
  }

  tab.Freeze();

  LpSolution sol;
  std::vector<char> allowed(total, 1);
  if (art_count > 0) {
    // Phase 1: minimize the sum of artificials.
    std::vector<double> c1(total, 0.0);
    for (size_t j = 0; j < total; ++j) c1[j] = is_art[j] ? 1.0 : 0.0;
    tab.SetCosts(std::move(c1));
    tab.Optimize(allowed, tol, sol.iterations, max_iterations);
    double w = 0;
    for (size_t i = 0; i < m; ++i) {
      if (is_art[tab.basis(i)]) w += tab.rhs(i);
    }
    if (w > 1e-7) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive remaining artificials out of the basis where possible, on the
    // largest available pivot.
    bool pivoted = false;
    for (size_t i = 0; i < m; ++i) {
      if (!is_art[tab.basis(i)]) continue;
      size_t pc = total;
      double best = 1e-7;
      for (size_t j = 0; j < total; ++j) {
        if (!is_art[j] && std::abs(tab.at(i, j)) > best) {
          best = std::abs(tab.at(i, j));
          pc = j;
        }
      }
      if (pc < total) {
        tab.Pivot(i, pc);
        pivoted = true;
      }
    }
    if (pivoted) tab.Refactor();
    for (size_t j = 0; j < total; ++j) {
      if (is_art[j]) allowed[j] = 0;
    }
  }

  // Phase 2.
  std::vector<double> c2(total, 0.0);
  for (size_t j = 0; j < n; ++j) {
    const double c = problem.objective[j];
    c2[map[j].col] += c * map[j].sign;
    if (map[j].split) c2[map[j].col + 1] -= c;
  }
  tab.SetCosts(std::move(c2));
  if (!tab.Optimize(allowed, tol, sol.iterations, max_iterations)) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  std::vector<double> y(total, 0.0);
  for (size_t i = 0; i < m; ++i) y[tab.basis(i)] = tab.rhs(i);
  sol.x.assign(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    sol.x[j] = map[j].shift + map[j].sign * y[map[j].col];
    if (map[j].split) sol.x[j] -= y[map[j].col + 1];
  }
  sol.objective_value = 0;
  for (size_t j = 0; j < n; ++j) sol.objective_value += problem.objective[j] * sol.x[j];
  sol.max_violation = MaxViolation(problem, sol.x);
  if (sol.max_violation > kMaxResidual) {
    throw SolverError("simplex lost feasibility: residual " +
                      std::to_string(sol.max_violation));
  }
  sol.status = LpStatus::kOptimal;
  return sol;
}

}  // namespace coreset

#endif  // CORESET_LP_SOLVER_HPP_
