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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/instance.hpp"
#include "gibbs/logmath.hpp"

namespace gibbs {

/// Adversarial instance with product-form partition function
///   Z(beta) = e^{-beta} prod_{k=1}^{N} (a_k + e^{-beta / m}),
/// a_k = 2^{1-k}, beta_min = 0, beta_max = -m ln(eta), eta = 2^{1-N}.
/// Expanding the product places the support on h = 1 + j / m, j = 0..N.
struct LowerBoundInstance {
  std::uint64_t N;
  std::uint64_t m_grid;
  std::vector<double> a;  ///< non-increasing, positive
  double eta;
  double beta_max;
  CountInstance expanded;

  /// Closed-form z(beta) from the product.
  double product_log_partition(double beta) const {
    const double u = std::exp(-beta / double(m_grid));
    double z = -beta;
    for (double ak : a) z += std::log(ak + u);
    return z;
  }

  /// Closed-form z''(beta) = sum_k a_k u / (m^2 (a_k + u)^2).
  double product_curvature(double beta) const {
    const double u = std::exp(-beta / double(m_grid));
    const double m2 = double(m_grid) * double(m_grid);
    double s = 0.0;
    for (double ak : a) s += ak * u / ((ak + u) * (ak + u));
    return s / m2;
  }
};

/// Coefficients of prod_k (a_k + u) in log space, lowest power first.
inline std::vector<double> expand_product_log(const std::vector<double>& a) {
  std::vector<double> coef{0.0};
  for (double ak : a) {
    detail::require(ak > 0.0, "product factors need a_k > 0");
    const double la = std::log(ak);
    std::vector<double> next(coef.size() + 1, kNegInf);
    for (std::size_t j = 0; j < coef.size(); ++j) {
      next[j] = log_add_exp(next[j], coef[j] + la);
      next[j + 1] = log_add_exp(next[j + 1], coef[j]);
    }
    coef = std::move(next);
  }
  return coef;
}

/// The family member with N factors on the grid of spacing 1/m_grid.
/// The declared n is the smallest integer with N <= m_grid (n - 1).
inline LowerBoundInstance build_lower_bound(std::uint64_t N, std::uint64_t m_grid) {
  detail::require(N >= 1, "lower-bound instance needs N >= 1");
  detail::require(m_grid >= 1, "lower-bound instance needs m >= 1");
  std::vector<double> a(N);
  for (std::uint64_t k = 1; k <= N; ++k) a[k - 1] = std::ldexp(1.0, 1 - int(k));
  // N = 1 would give eta = 1 and an empty interval; use eta = 1/2 there.
  const double eta = N == 1 ? 0.5 : std::ldexp(1.0, 1 - int(N));
  const double md = double(m_grid);
  const double beta_max = -md * std::log(eta);
  const auto coef = expand_product_log(a);
  std::vector<Level> levels;
  levels.reserve(coef.size());
  for (std::size_t j = 0; j < coef.size(); ++j) levels.push_back({1.0 + double(j) / md, coef[j]});
  const double n = 1.0 + std::ceil(double(N) / md);
  return {N, m_grid, std::move(a), eta, beta_max,
          CountInstance(std::move(levels), 0.0, beta_max, n)};
}

/// Instance of target size q_bar for integer energy bound n:
/// N = ceil(sqrt(2 q_bar / ln 2)), m = ceil(c2 sqrt(q_bar) / n).
inline LowerBoundInstance build_lower_bound_for_q(double q_bar, std::uint64_t n, double c2 = 1.8) {
  detail::require(q_bar > 0.0, "q_bar must be positive");
  detail::require(n >= 2, "n must be >= 2");
  detail::require(c2 > std::sqrt(2.0 / std::log(2.0)), "c2 must exceed sqrt(2 / ln 2)");
  const auto N = static_cast<std::uint64_t>(std::ceil(std::sqrt(2.0 / std::log(2.0) * q_bar)));
  const auto m = static_cast<std::uint64_t>(std::ceil(c2 * std::sqrt(q_bar) / double(n)));
  if (N > m * (n - 1))
    throw InvalidArgument("N = " + std::to_string(N) + " exceeds the grid capacity m (n - 1) = " +
                          std::to_string(m * (n - 1)));
  auto lb = build_lower_bound(N, m);
  lb.expanded = CountInstance(lb.expanded.support(), 0.0, lb.beta_max, double(n));
  return lb;
}

enum class PerturbSign { plus, minus };

/// c_h -> c_h e^{+h nu} (plus) or c_h e^{-h nu} (minus), so that
/// Z_plus(beta) = Z(beta - nu) and Z_minus(beta) = Z(beta + nu).
inline CountInstance perturb(const CountInstance& inst, double nu, PerturbSign sign) {
  detail::require(nu >= 0.0, "perturbation nu must be non-negative");
  const double s = sign == PerturbSign::plus ? 1.0 : -1.0;
  std::vector<Level> levels;
  levels.reserve(inst.size());
  for (const Level& lv : inst.support()) levels.push_back({lv.h, lv.log_c + s * lv.h * nu});
  return CountInstance(std::move(levels), inst.beta_min(), inst.beta_max(), inst.n());
}

inline CountInstance perturb(const LowerBoundInstance& lb, double nu, PerturbSign sign) {
  return perturb(lb.expanded, nu, sign);
}

/// z_diff(beta) = z(beta) - z(beta_max + beta).
inline double z_diff(const CountInstance& inst, double beta) {
  return log_partition(inst, beta) - log_partition(inst, inst.beta_max() + beta);
}

/// |z_diff'(0)| = (1/m) sum_k [1/(a_k + 1) - eta/(a_k + eta)].
inline double sensitivity(const LowerBoundInstance& lb) {
  double s = 0.0;
  for (double ak : lb.a) s += 1.0 / (ak + 1.0) - lb.eta / (ak + lb.eta);
  return s / double(lb.m_grid);
}

/// max over r in [1, N-1] of (1/m^2)[sum_{k<=r} a_r/a_k + sum_{k>r} a_k/a_{r+1}].
inline double kappa_ell_bound(const LowerBoundInstance& lb) {
  const auto& a = lb.a;
  const double m2 = double(lb.m_grid) * double(lb.m_grid);
  if (a.size() < 2) return 0.25 / m2;  // sup of a u / (a + u)^2
  double best = 0.0;
  for (std::size_t r = 1; r < a.size(); ++r) {
    double s = 0.0;
    for (std::size_t k = 1; k <= r; ++k) s += a[r - 1] / a[k - 1];
    for (std::size_t k = r + 1; k <= a.size(); ++k) s += a[k - 1] / a[r];
    best = std::max(best, s);
  }
  return best / m2;
}

struct CurvatureReport {
  double numeric_sup;      ///< max of energy_variance(expanded, beta)
  double argmax_beta;
  double kappa_ell_bound;  ///< analytic upper bound
};

/// sup_beta z''(beta). The maximum lies where u = e^{-beta/m} is in
/// [a_N, a_1]; a grid over that beta range is refined by golden section.
inline CurvatureReport curvature_sup(const LowerBoundInstance& lb) {
  const double md = double(lb.m_grid);
  const double b_lo = -md * std::log(lb.a.front()) - md;
  const double b_hi = -md * std::log(lb.a.back()) + md;
  auto f = [&](double b) { return energy_variance(lb.expanded, b); };
  constexpr int kGrid = 1024;
  const double step = (b_hi - b_lo) / (kGrid - 1);
  int best = 0;
  double best_f = f(b_lo);
  for (int i = 1; i < kGrid; ++i) {
    const double v = f(b_lo + step * i);
    if (v > best_f) {
      best_f = v;
      best = i;
    }
  }
  double lo = b_lo + step * std::max(best - 1, 0);
  double hi = b_lo + step * std::min(best + 1, kGrid - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-9 * std::max(1.0, std::abs(hi))) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double fm = f(mid);
  CurvatureReport out{best_f, b_lo + step * best, kappa_ell_bound(lb)};
  if (fm > best_f) {
    out.numeric_sup = fm;
    out.argmax_beta = mid;
  }
  return out;
}

struct HardnessCheck {
  std::string name;
  double observed;
  double bound;
  bool upper;  ///< true: observed < bound is required; false: observed > bound
  bool pass;
};

struct HardnessReport {
  std::uint64_t N;
  std::uint64_t m_grid;
  double q_star;
  double q_lower;  ///< (m + N/2)(N-1) ln 2 - N ln 2
  double q_upper;  ///< (m + N/2)(N-1) ln 2 + 2
  double sensitivity;
  double kappa_bound;
  double kappa_numeric;
  double ratio;      ///< sensitivity^2 / kappa_bound
  double threshold;  ///< (N/4 - 1)^2
  std::vector<HardnessCheck> checks;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
};

/// Checks the quantitative claims on q*, sensitivity and curvature as strict
/// inequalities.
inline HardnessReport verify_hardness(const LowerBoundInstance& lb) {
  HardnessReport rep{};
  rep.N = lb.N;
  rep.m_grid = lb.m_grid;
  const double N = double(lb.N), m = double(lb.m_grid), ln2 = std::log(2.0);
  rep.q_star = log_ratio_true(lb.expanded);
  rep.q_lower = (m + N / 2.0) * (N - 1.0) * ln2 - N * ln2;
  rep.q_upper = (m + N / 2.0) * (N - 1.0) * ln2 + 2.0;
  rep.sensitivity = sensitivity(lb);
  const auto curv = curvature_sup(lb);
  rep.kappa_bound = curv.kappa_ell_bound;
  rep.kappa_numeric = curv.numeric_sup;
  rep.ratio = rep.sensitivity * rep.sensitivity / rep.kappa_bound;
  rep.threshold = (N / 4.0 - 1.0) * (N / 4.0 - 1.0);
  auto add = [&](std::string name, double obs, double bound, bool upper) {
    rep.checks.push_back({std::move(name), obs, bound, upper, upper ? obs < bound : obs > bound});
  };
  add("q_star > lower sandwich", rep.q_star, rep.q_lower, false);
  add("q_star < upper sandwich", rep.q_star, rep.q_upper, true);
  add("sensitivity > (N/2 - 2)/m", rep.sensitivity, (N / 2.0 - 2.0) / m, false);
  add("kappa_bound < 4/m^2", rep.kappa_bound, 4.0 / (m * m), true);
  add("kappa_numeric <= kappa_bound", rep.kappa_numeric, rep.kappa_bound * (1 + 1e-12), true);
  add("sensitivity^2/kappa > (N/4 - 1)^2", rep.ratio, rep.threshold, false);
  return rep;
}

}  // namespace gibbs
