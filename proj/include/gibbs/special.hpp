// Copyright 2026 The gibbs-tpa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/logmath.hpp"

namespace gibbs {

namespace detail {
/// ln j! for j < 4096, computed once.
inline long double log_factorial(long j) {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(4096);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::lgamma((long double)(i) + 1.0L);
    return t;
  }();
  if (j < long(table.size())) return table[std::size_t(j)];
  return std::lgamma((long double)(j) + 1.0L);
}
}  // namespace detail

/// ln Gamma(a, b) for integer a >= 1, b >= 0, from the finite series
///   Gamma(a, b) = (a-1)! e^{-b} sum_{j<a} b^j / j!
/// summed in log space with extended precision.
inline double log_upper_incomplete_gamma(long a, double b) {
  detail::require(a >= 1, "incomplete gamma requires integer a >= 1");
  detail::require(b >= 0.0 && std::isfinite(b), "incomplete gamma requires finite b >= 0");
  using ld = long double;
  const ld head = detail::log_factorial(a - 1);
  if (b == 0.0) return double(head);
  const ld lb = std::log(ld(b));
  std::vector<ld> terms(static_cast<std::size_t>(a));
  for (long j = 0; j < a; ++j) terms[std::size_t(j)] = ld(j) * lb - detail::log_factorial(j);
  return double(head - ld(b) + log_sum_exp<ld>(terms));
}

struct TauResult {
  double value;       ///< min over tau of the objective
  double argmin_tau;  ///< minimizing tau
};

/// tau + Gamma(d+2, tau d) / ((1 - rho) d d!).
inline double tau_objective(long d, double rho, double tau) {
  const double log_tail = log_upper_incomplete_gamma(d + 2, tau * double(d)) -
                          std::log1p(-rho) - std::log(double(d)) - std::lgamma(double(d) + 1.0);
  return tau + std::exp(log_tail);
}

/// tau_rho(d) = min_{tau >= 0} tau_objective(d, rho, tau).
///
/// A 2048-point log-spaced grid over [1e-3, 64] locates the basin, then
/// golden-section search refines it to 1e-5.
inline TauResult tau_rho(long d, double rho) {
  detail::require(d >= 1, "tau_rho requires d >= 1");
  detail::require(rho > 0.0 && rho < 1.0, "tau_rho requires rho in (0, 1)");
  constexpr int kGrid = 2048;
  constexpr double kLo = 1e-3, kHi = 64.0;
  const double step = std::log(kHi / kLo) / (kGrid - 1);
  auto grid = [&](int i) { return kLo * std::exp(step * i); };
  int best = 0;
  double best_f = tau_objective(d, rho, grid(0));
  for (int i = 1; i < kGrid; ++i) {
    const double f = tau_objective(d, rho, grid(i));
    if (f < best_f) {
      best_f = f;
      best = i;
    }
  }
  double lo = grid(std::max(best - 1, 0));
  double hi = grid(std::min(best + 1, kGrid - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = tau_objective(d, rho, x1), f2 = tau_objective(d, rho, x2);
  while (hi - lo > 1e-5) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = tau_objective(d, rho, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = tau_objective(d, rho, x2);
    }
  }
  const double tau = 0.5 * (lo + hi);
  const double f = tau_objective(d, rho, tau);
  if (f <= best_f) return {f, tau};
  return {best_f, grid(best)};
}

}  // namespace gibbs
