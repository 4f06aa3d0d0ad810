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

#ifndef CORESET_FACTOR_LP_HPP_
#define CORESET_FACTOR_LP_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "coreset/errors.hpp"
#include "coreset/lp_solver.hpp"
#include "coreset/oracle.hpp"
#include "coreset/parallel.hpp"

namespace coreset {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// How constraint (1) of LP^{k,k2} is written. kEnumerated lists every
// k2-subset J; kCompact states "the k2 largest a_j + c_j sum to at most
// beta - 1 + alpha" with one free variable u and slacks v_j >= 0, which is
// exactly the maximum over all J.
enum class Kk2Form { kCompact, kEnumerated };

inline constexpr size_t kMaxDk = 512;

inline size_t DkFor(size_t k) {
  return static_cast<size_t>(
      std::ceil((2.0 * std::sqrt(2.0) + 1.0) * static_cast<double>(k)));
}

// Variable 0 is beta, 1 is alpha, then a_j, b_j, c_j for j = 1..Dk.
// `dk_override` replaces ceil((2 sqrt 2 + 1) k) when non-zero.
inline LpProblem BuildLpKk2(size_t k, size_t k2,
                            Kk2Form form = Kk2Form::kCompact,
                            size_t dk_override = 0) {
  if (k < 1 || k2 < 1 || k2 > k) throw InputError("need 1 <= k2 <= k");
  const size_t dk = dk_override ? dk_override : DkFor(k);
  if (dk > kMaxDk) throw CapacityError("Dk above the dense-build limit");
  if (dk < k) throw InputError("Dk must be at least k");
  LpProblem p;
  const size_t beta = p.AddVar("beta", -kInf, kInf, 1.0);
  const size_t alpha = p.AddVar("alpha", 0, 1);
  std::vector<size_t> a(dk), b(dk), c(dk);
  for (size_t j = 0; j < dk; ++j) a[j] = p.AddVar("a" + std::to_string(j + 1), 0, 1);
  for (size_t j = 0; j < dk; ++j) b[j] = p.AddVar("b" + std::to_string(j + 1), 0, 1);
  for (size_t j = 0; j < dk; ++j) c[j] = p.AddVar("c" + std::to_string(j + 1), 0, 1);
  const double inv = 1.0 / static_cast<double>(k2);

  // (1)
  if (form == Kk2Form::kCompact) {
    const size_t u = p.AddVar("u", -kInf, kInf);
    std::vector<size_t> v(dk);
    for (size_t j = 0; j < dk; ++j) {
      v[j] = p.AddVar("v" + std::to_string(j + 1), 0, kInf);
    }
    auto& top = p.AddConstraint(Relation::kLe, -1.0);
    top.row[beta] = -1;
    top.row[alpha] = -1;
    top.row[u] = static_cast<double>(k2);
    for (size_t j = 0; j < dk; ++j) top.row[v[j]] = 1;
    for (size_t j = 0; j < dk; ++j) {
      auto& r = p.AddConstraint(Relation::kGe, 0.0);
      r.row[v[j]] = 1;
      r.row[u] = 1;
      r.row[a[j]] = -1;
      r.row[c[j]] = -1;
    }
  } else {
    if (Binomial(dk, k2) > 1e5) {
      throw CapacityError("too many subsets to enumerate constraint (1)");
    }
    std::vector<size_t> pick(k2);
    for (size_t i = 0; i < k2; ++i) pick[i] = i;
    while (true) {
      auto& r = p.AddConstraint(Relation::kLe, -1.0);
      r.row[beta] = -1;
      r.row[alpha] = -1;
      for (size_t j : pick) {
        r.row[a[j]] = 1;
        r.row[c[j]] = 1;
      }
      size_t i = k2;
      while (i > 0 && pick[i - 1] == dk - k2 + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (size_t t = i; t < k2; ++t) pick[t] = pick[t - 1] + 1;
    }
  }
  // (2) a_j + b_j + c_j >= (alpha - sum_{j' < j} a_j') / k2
  for (size_t j = 0; j < dk; ++j) {
    auto& r = p.AddConstraint(Relation::kGe, 0.0);
    r.row[a[j]] += 1;
    r.row[b[j]] += 1;
    r.row[c[j]] += 1;
    r.row[alpha] -= inv;
    for (size_t jp = 0; jp < j; ++jp) r.row[a[jp]] += inv;
  }
  // (3)
  {
    auto& r = p.AddConstraint(Relation::kLe, 1.0);
    r.row[alpha] = 1;
    for (size_t j = 0; j < dk; ++j) r.row[b[j]] = 1;
  }
  // (5)
  {
    auto& r = p.AddConstraint(Relation::kGe, 0.0);
    r.row[beta] = 1;
    for (size_t j = 0; j < k; ++j) {
      r.row[a[j]] = -1;
      r.row[b[j]] = -1;
      r.row[c[j]] = -1;
    }
  }
  // (6)
  for (size_t j = 0; j + 1 < dk; ++j) {
    auto& r = p.AddConstraint(Relation::kGe, 0.0);
    r.row[a[j]] += 1;
    r.row[b[j]] += 1;
    r.row[c[j]] += 1;
    r.row[a[j + 1]] -= 1;
    r.row[b[j + 1]] -= 1;
    r.row[c[j + 1]] -= 1;
  }
  return p;
}

struct Kk2Result {
  size_t k = 0;
  size_t k2 = 0;
  double value = 0;
  double max_violation = 0;
};

inline Kk2Result SolveLpKk2(size_t k, size_t k2,
                            Kk2Form form = Kk2Form::kCompact,
                            size_t dk_override = 0) {
  const LpSolution s = SolveLp(BuildLpKk2(k, k2, form, dk_override));
  if (s.status != LpStatus::kOptimal) {
    throw SolverError(std::string("LP^{k,k2} not optimal: ") +
                      LpStatusName(s.status));
  }
  return {k, k2, s.objective_value, s.max_violation};
}

// Data of LP^r that depends on r: the largest allowed |I| and the
// coefficient of (1 - alpha - sum b') for each |I|.
struct LpRShape {
  int max_i = 0;
  std::array<double, 9> coef{};
};

// 1 - exp(-1 - (4 - s)/4 * r/(1 - r)) for r = p/q, with the r -> 1 limit.
inline double LpRCoefficient(uint64_t p, uint64_t q, int s) {
  if (p == q) {
    if (s < 4) return 1.0;
    if (s == 4) return 1.0 - std::exp(-1.0);
    return -kInf;
  }
  const double ratio = static_cast<double>(p) / static_cast<double>(q - p);
  return 1.0 - std::exp(-1.0 - (4.0 - s) / 4.0 * ratio);
}

// |I| <= 4 + 4(1 - r)/r for r = p/q, floored exactly, capped at 8.
inline int LpRMaxI(uint64_t p, uint64_t q) {
  const uint64_t extra = 4 * (q - p) / p;
  return static_cast<int>(std::min<uint64_t>(8, 4 + extra));
}

inline LpRShape LpRShapeAt(uint64_t p, uint64_t q) {
  if (p == 0 || p > q) throw InputError("LP^r needs r in (0, 1]");
  LpRShape s;
  s.max_i = LpRMaxI(p, q);
  for (int i = 0; i <= 8; ++i) s.coef[i] = LpRCoefficient(p, q, i);
  return s;
}

// Cell [d/grid, (d+1)/grid]. Every I allowed anywhere in the cell is kept
// (bound taken at the left end), and each coefficient is the smaller of
// its two end values, which only weakens constraint (1).
inline LpRShape LpRShapeForCell(uint64_t d, uint64_t grid) {
  if (d < 1 || d >= grid) throw InputError("cell index out of range");
  LpRShape s;
  s.max_i = LpRMaxI(d, grid);
  for (int i = 0; i <= 8; ++i) {
    s.coef[i] = std::min(LpRCoefficient(d, grid, i),
                         LpRCoefficient(d + 1, grid, i));
  }
  return s;
}

// Variable 0 is beta, 1 is alpha, then a'_l, b'_l, c'_l for l = 1..256.
// Blocks A_i = {32(i-1)+1, ..., 32i}.
inline LpProblem BuildLpRFromShape(const LpRShape& shape) {
  constexpr size_t kL = 256;
  LpProblem p;
  const size_t beta = p.AddVar("beta", -kInf, kInf, 1.0);
  const size_t alpha = p.AddVar("alpha", 0, 1);
  std::vector<size_t> a(kL), b(kL), c(kL);
  for (size_t l = 0; l < kL; ++l) a[l] = p.AddVar("a'" + std::to_string(l + 1), 0, kInf);
  for (size_t l = 0; l < kL; ++l) b[l] = p.AddVar("b'" + std::to_string(l + 1), 0, kInf);
  for (size_t l = 0; l < kL; ++l) c[l] = p.AddVar("c'" + std::to_string(l + 1), 0, kInf);
  // (1) beta >= co (1 - alpha - sum_I b') + sum_I (a' + b' + c')
  for (uint32_t mask = 0; mask < 256; ++mask) {
    const int size = std::popcount(mask);
    if (size > shape.max_i) continue;
    const double co = shape.coef[size];
    // A coefficient of -inf (cells touching r = 1) leaves no constraint.
    if (!std::isfinite(co)) continue;
    auto& r = p.AddConstraint(Relation::kLe, -co);
    r.row[beta] = -1;
    r.row[alpha] = -co;
    for (size_t i = 0; i < 8; ++i) {
      if (!((mask >> i) & 1u)) continue;
      for (size_t l = 32 * i; l < 32 * (i + 1); ++l) {
        r.row[a[l]] = 1;
        r.row[b[l]] = 1 - co;
        r.row[c[l]] = 1;
      }
    }
  }
  // (2) a'_l + b'_l + c'_l >= (alpha - sum_{l' <= l} a'_l') / 128
  for (size_t l = 0; l < kL; ++l) {
    auto& r = p.AddConstraint(Relation::kGe, 0.0);
    r.row[alpha] = -1.0 / 128;
    for (size_t lp = 0; lp <= l; ++lp) r.row[a[lp]] += 1.0 / 128;
    r.row[a[l]] += 1;
    r.row[b[l]] += 1;
    r.row[c[l]] += 1;
  }
  // (3)
  auto& r = p.AddConstraint(Relation::kLe, 1.0);
  r.row[alpha] = 1;
  for (size_t l = 0; l < kL; ++l) r.row[b[l]] = 1;
  return p;
}

inline LpProblem BuildLpR(uint64_t p, uint64_t q) {
  return BuildLpRFromShape(LpRShapeAt(p, q));
}

struct LpRCell {
  uint64_t d = 0;
  double r = 0;
  double value = 0;
  double max_violation = 0;
};

struct LpRScan {
  std::vector<LpRCell> cells;
  double min_value = 0;
  uint64_t argmin = 0;
};

inline LpRScan ScanLpR(uint64_t grid = 160, double tol = 1e-8) {
  if (grid < 2) throw InputError("scan grid must be >= 2");
  LpRScan scan;
  scan.cells = ParallelMap(grid - 1, [&](size_t i) {
    const uint64_t d = i + 1;
    const LpSolution s = SolveLp(BuildLpRFromShape(LpRShapeForCell(d, grid)), tol);
    if (s.status != LpStatus::kOptimal) {
      throw SolverError("LP^r cell " + std::to_string(d) + " not optimal: " +
                        LpStatusName(s.status));
    }
    return LpRCell{d, static_cast<double>(d) / grid, s.objective_value,
                   s.max_violation};
  });
  scan.min_value = kInf;
  for (const auto& c : scan.cells) {
    if (c.value < scan.min_value) {
      scan.min_value = c.value;
      scan.argmin = c.d;
    }
  }
  return scan;
}

namespace internal {

// Minimizes f over [0,1]^2 by repeated grid refinement around the best
// point. Returns (x, y, f).
inline std::array<double, 3> MinimizeOnSquare(
    const std::function<double(double, double)>& f, int grid, double tol) {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double bx = 0, by = 0, bf = kInf;
  while (true) {
    const double hx = (x1 - x0) / grid, hy = (y1 - y0) / grid;
    for (int i = 0; i <= grid; ++i) {
      for (int j = 0; j <= grid; ++j) {
        const double x = x0 + hx * i, y = y0 + hy * j;
        const double v = f(x, y);
        if (v < bf) {
          bf = v;
          bx = x;
          by = y;
        }
      }
    }
    if (std::max(hx, hy) < tol) break;
    x0 = std::max(0.0, bx - 2 * hx);
    x1 = std::min(1.0, bx + 2 * hx);
    y0 = std::max(0.0, by - 2 * hy);
    y1 = std::min(1.0, by + 2 * hy);
  }
  return {bx, by, bf};
}

// Root of a continuous g on [lo, hi] with a sign change, by bisection.
inline double Bisect(const std::function<double(double)>& g, double lo,
                     double hi) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace internal

struct Sle2Result {
  double beta = 0;
  double alpha = 0;
  double lambda = 0;
  double r = 0;
};

// Largest alpha in [0, 1] with 1 - alpha >= (e^-r alpha - lambda)^2/(2 lambda).
inline double Sle2Alpha(double r, double lambda) {
  if (lambda <= 0) return 0;
  const double e = std::exp(-r);
  const double qa = e * e;
  const double qb = 2 * lambda - 2 * e * lambda;
  const double qc = lambda * lambda - 2 * lambda;
  const double disc = std::max(0.0, qb * qb - 4 * qa * qc);
  return std::clamp((-qb + std::sqrt(disc)) / (2 * qa), 0.0, 1.0);
}

inline double Sle2Beta(double r, double lambda, double alpha) {
  return 1 - alpha + (1 - std::exp(-r)) * alpha + (1 - r) * lambda;
}

// min beta over alpha, lambda, r in [0,1] with both inequalities of the
// system. For fixed (r, lambda) beta falls as alpha grows, so alpha is the
// larger root of the quadratic constraint.
inline Sle2Result MinimizeSle2(double tol = 1e-10, int grid = 200) {
  auto f = [](double r, double lambda) {
    return Sle2Beta(r, lambda, Sle2Alpha(r, lambda));
  };
  const auto [r, lambda, beta] = internal::MinimizeOnSquare(f, grid, tol);
  return {beta, Sle2Alpha(r, lambda), lambda, r};
}

struct Sle3Result {
  double d_prime = 0;
  // Minimum of the system as printed: 1 - alpha >= D'(e^-r alpha - lambda).
  double beta = 0;
  double alpha = 0;
  double lambda = 0;
  double r = 0;
  // Interior stationary point of the printed system:
  // D' e^-r / (1 + D' e^-r) = 1 - r.
  double r_star = 0;
  double beta_at_r_star = 0;
  // The closed form alpha = (1 + lambda) /
  // (1 + D' e^-r), whose stationary equation is e^-r / (1 + D' e^-r) = 1 - r.
  double r_star_closed_form = 0;
  double beta_closed_form_min = 0;
  // Boundaries.
  double beta_lambda1_min = 0;  // min over r of beta at lambda = 1
  double alpha_lambda0_max = 0; // largest alpha at lambda = 0
  double beta_lambda0_min = 0;
};

inline Sle3Result MinimizeSle3(double d = 2 * std::sqrt(2.0) + 1,
                               double tol = 1e-10, int grid = 200) {
  Sle3Result s;
  const double dp = (d - 1) / 2;
  s.d_prime = dp;
  auto alpha_printed = [dp](double r, double lambda) {
    return std::clamp((1 + dp * lambda) / (1 + dp * std::exp(-r)), 0.0, 1.0);
  };
  auto alpha_closed = [dp](double r, double lambda) {
    return std::clamp((1 + lambda) / (1 + dp * std::exp(-r)), 0.0, 1.0);
  };
  auto beta_of = [](double r, double lambda, double alpha) {
    return 1 - std::exp(-r) * alpha + (1 - r) * lambda;
  };
  const auto [r, lambda, beta] = internal::MinimizeOnSquare(
      [&](double r, double l) { return beta_of(r, l, alpha_printed(r, l)); },
      grid, tol);
  s.beta = beta;
  s.r = r;
  s.lambda = lambda;
  s.alpha = alpha_printed(r, lambda);
  s.beta_closed_form_min =
      internal::MinimizeOnSquare(
          [&](double r, double l) { return beta_of(r, l, alpha_closed(r, l)); },
          grid, tol)[2];
  s.r_star = internal::Bisect(
      [dp](double r) {
        const double e = std::exp(-r);
        return dp * e / (1 + dp * e) - (1 - r);
      },
      0, 1);
  s.beta_at_r_star = 1 - (1 - s.r_star) / dp;
  s.r_star_closed_form = internal::Bisect(
      [dp](double r) {
        const double e = std::exp(-r);
        return e / (1 + dp * e) - (1 - r);
      },
      0, 1);
  s.beta_lambda1_min = kInf;
  s.beta_lambda0_min = kInf;
  for (int i = 0; i <= 100000; ++i) {
    const double rr = i / 100000.0;
    s.beta_lambda1_min =
        std::min(s.beta_lambda1_min, beta_of(rr, 1, alpha_printed(rr, 1)));
    s.beta_lambda0_min =
        std::min(s.beta_lambda0_min, beta_of(rr, 0, alpha_printed(rr, 0)));
  }
  s.alpha_lambda0_max = alpha_printed(0, 0);
  return s;
}

}  // namespace coreset

#endif  // CORESET_FACTOR_LP_HPP_
