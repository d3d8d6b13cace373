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
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/instance.hpp"
#include "gibbs/logmath.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/special.hpp"
#include "gibbs/tpa.hpp"

namespace gibbs {

/// Case I: H in [1, n]. Case II: H in {0} U [1, n].
enum class EnergyCase { I, II };

inline std::string_view to_string(EnergyCase c) { return c == EnergyCase::I ? "I" : "II"; }

inline EnergyCase parse_energy_case(std::string_view s) {
  if (s == "I" || s == "i" || s == "1") return EnergyCase::I;
  if (s == "II" || s == "ii" || s == "2") return EnergyCase::II;
  throw InvalidArgument("unknown case '" + std::string(s) + "' (expected I or II)");
}

inline EnergyCase detect_case(const CountInstance& inst) {
  return inst.has_zero_level() ? EnergyCase::II : EnergyCase::I;
}

/// eps~ = 1 - (1 + eps)^{-1/2}.
inline double epsilon_tilde(double epsilon) {
  detail::require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
  return -std::expm1(-0.5 * std::log1p(epsilon));
}

/// Success threshold rho = 0.75 / (1 - gamma) for the schedule stage.
inline double schedule_success_target(double gamma) { return 0.75 / (1.0 - gamma); }

/// ln(1 + gamma r eps~^2 / 2): the largest schedule delta for which the
/// paired product meets its Chebyshev guarantee.
inline double delta_threshold(double gamma, std::uint64_t r, double epsilon) {
  const double et = epsilon_tilde(epsilon);
  return std::log1p(0.5 * gamma * double(r) * et * et);
}

/// Smallest rate m = k / d admissible for the given parameters.
inline double min_m(std::uint64_t d, double gamma, std::uint64_t r, double epsilon, double n,
                    EnergyCase energy_case, double lambda = std::exp(-7.0)) {
  detail::require(d >= 1, "d must be >= 1");
  detail::require(gamma > 0.0 && gamma < 0.25, "gamma must lie in (0, 0.25)");
  detail::require(r >= 1, "r must be >= 1");
  const double tau = tau_rho(long(d), schedule_success_target(gamma)).value;
  const double denom = delta_threshold(gamma, r, epsilon);
  if (energy_case == EnergyCase::I) {
    detail::require(n > 1.0, "case I requires n > 1");
    return tau * std::log(n) / (2.0 * denom);
  }
  detail::require(n >= 1.0, "case II requires n >= 1");
  detail::require(lambda > 0.0 && lambda < 1.0, "lambda must lie in (0, 1)");
  const double denom2 = denom + std::log1p(-lambda);
  if (!(denom2 > 0.0))
    throw InvalidArgument("infeasible parameters: (1 + gamma r eps~^2/2)(1 - lambda) <= 1");
  return tau * (2.0 + std::log(n / lambda)) / (2.0 * denom2);
}

struct EstimatorConfig {
  double epsilon = 0.5;
  double gamma = 0.24;
  double rho = 0.75 / 0.76;
  std::uint64_t d = 64;
  double m = 0.0;  ///< always k / d
  std::uint64_t k = 0;
  std::uint64_t r = 1;
  double lambda = std::exp(-7.0);
  EnergyCase energy_case = EnergyCase::II;
  double n = 1.0;  ///< energy bound the config was derived for

  double epsilon_tilde() const { return gibbs::epsilon_tilde(epsilon); }
  double delta_threshold() const { return gibbs::delta_threshold(gamma, r, epsilon); }
  double min_m() const { return gibbs::min_m(d, gamma, r, epsilon, n, energy_case, lambda); }
  bool satisfies_min_m() const { return m >= min_m(); }

  /// m q (r + d) + 2r + k: expected calls with one terminal draw per TPA run.
  double predicted_oracle_calls(double q) const {
    return m * q * double(r + d) + 2.0 * double(r) + double(k);
  }
  /// m q (r + d) + 2r + 1: the single-terminal-draw accounting.
  double baseline_oracle_calls(double q) const {
    return m * q * double(r + d) + 2.0 * double(r) + 1.0;
  }
};

namespace detail {
inline void set_rate(EstimatorConfig& cfg, double m) {
  require(m > 0.0 && std::isfinite(m), "rate m must be positive");
  cfg.k = static_cast<std::uint64_t>(std::ceil(m * double(cfg.d)));
  cfg.m = double(cfg.k) / double(cfg.d);
}
}  // namespace detail

/// d = 64, gamma = 0.24, lambda = e^-7, r = ceil(2 / eps~^2),
/// m = 3.6 ln n (case I) or 3.6 (9 + ln n) (case II), k = ceil(m d), m = k / d.
inline EstimatorConfig default_config(double epsilon, double n, EnergyCase energy_case) {
  EstimatorConfig cfg;
  cfg.epsilon = epsilon;
  cfg.energy_case = energy_case;
  cfg.n = n;
  const double et = epsilon_tilde(epsilon);
  cfg.r = static_cast<std::uint64_t>(std::ceil(2.0 / (et * et)));
  cfg.rho = schedule_success_target(cfg.gamma);
  if (energy_case == EnergyCase::I) {
    detail::require(n > 1.0, "case I requires n > 1");
    detail::set_rate(cfg, 3.6 * std::log(n));
  } else {
    detail::require(n >= 1.0, "case II requires n >= 1");
    detail::set_rate(cfg, 3.6 * (9.0 + std::log(n)));
  }
  return cfg;
}

/// Field-by-field overrides of the default configuration.
struct ConfigOverrides {
  std::optional<std::uint64_t> d;
  std::optional<double> gamma;
  std::optional<std::uint64_t> r;
  std::optional<double> m;
  std::optional<double> lambda;
};

/// Defaults with overrides applied. When d, gamma, r or lambda change and m
/// is not given, m is recomputed as min_m for the new parameters. The result
/// always satisfies min_m.
inline EstimatorConfig make_config(double epsilon, double n, EnergyCase energy_case,
                                   const ConfigOverrides& o = {}) {
  EstimatorConfig cfg = default_config(epsilon, n, energy_case);
  const bool changed = o.d || o.gamma || o.r || o.lambda;
  if (o.d) cfg.d = *o.d;
  if (o.gamma) cfg.gamma = *o.gamma;
  if (o.r) cfg.r = *o.r;
  if (o.lambda) cfg.lambda = *o.lambda;
  detail::require(cfg.d >= 1, "d must be >= 1");
  detail::require(cfg.r >= 1, "r must be >= 1");
  detail::require(cfg.gamma > 0.0 && cfg.gamma < 0.25, "gamma must lie in (0, 0.25)");
  detail::require(cfg.lambda > 0.0 && cfg.lambda < 1.0, "lambda must lie in (0, 1)");
  cfg.rho = schedule_success_target(cfg.gamma);
  if (o.m)
    detail::set_rate(cfg, *o.m);
  else if (changed)
    detail::set_rate(cfg, cfg.min_m());
  if (!cfg.satisfies_min_m())
    throw InvalidArgument("rate m = " + std::to_string(cfg.m) + " is below the admissible minimum " +
                          std::to_string(cfg.min_m()));
  return cfg;
}

struct EstimateResult {
  double log_w_bar = 0.0;
  double log_v_bar = 0.0;
  double q_hat = 0.0;  ///< log_v_bar - log_w_bar
  std::size_t schedule_len = 0;  ///< l
  std::uint64_t oracle_calls = 0;
  std::uint64_t seed = 0;
  std::size_t tpa_points = 0;
  std::vector<double> schedule;

  double Q_hat() const { return std::exp(q_hat); }
};

/// Paired product estimator on a fixed schedule with r independent runs.
///
/// Each run draws X_i ~ mu_{beta_i} for i = 0..l and forms
///   ln W = -sum_i (db_i / 2) H(X_i),  ln V = sum_i (db_i / 2) H(X_{i+1}).
/// The sample means are taken in log space. Uses (l + 1) r oracle calls.
template <class URBG>
EstimateResult paired_product(Oracle& oracle, const Schedule& sched, std::uint64_t r,
                              URBG& rng) {
  detail::require(r >= 1, "paired product requires r >= 1");
  require_matching(sched, oracle.instance());
  const std::size_t levels = sched.betas().size();
  std::vector<LevelTable> tables;
  tables.reserve(levels);
  for (double b : sched.betas()) tables.push_back(oracle.level(b));
  std::vector<double> half(levels - 1);
  for (std::size_t i = 0; i + 1 < levels; ++i) half[i] = 0.5 * (sched[i + 1] - sched[i]);

  const std::uint64_t before = oracle.call_count();
  std::vector<double> log_w(r), log_v(r);
  for (std::uint64_t j = 0; j < r; ++j) {
    double lw = 0.0, lv = 0.0;
    for (std::size_t i = 0; i < levels; ++i) {
      const double h = oracle.sample(tables[i], rng);
      if (i + 1 < levels) lw -= half[i] * h;
      if (i > 0) lv += half[i - 1] * h;
    }
    log_w[j] = lw;
    log_v[j] = lv;
  }
  EstimateResult out;
  out.log_w_bar = log_mean_exp<double>(log_w);
  out.log_v_bar = log_mean_exp<double>(log_v);
  out.q_hat = out.log_v_bar - out.log_w_bar;
  out.schedule_len = sched.length();
  out.oracle_calls = oracle.call_count() - before;
  out.schedule = sched.betas();
  return out;
}

namespace detail {
inline void check_config_for(const EstimatorConfig& cfg, const CountInstance& inst) {
  require(cfg.k >= 1 && cfg.d >= 1 && cfg.r >= 1, "config requires k, d, r >= 1");
  require(inst.in_energy_range(),
          "instance energies must lie in {0} U [1, n]; normalize the range first");
  require(inst.max_energy() <= cfg.n, "instance energies exceed the config's n");
  if (cfg.energy_case == EnergyCase::I && inst.has_zero_level())
    throw InvalidArgument("case I config used on an instance with an H = 0 level");
}
}  // namespace detail

/// Schedule from TPA(k) thinned by d, then the paired product with r runs.
template <class URBG>
EstimateResult estimate(Oracle& oracle, const EstimatorConfig& cfg, URBG& rng) {
  const CountInstance& inst = oracle.instance();
  detail::check_config_for(cfg, inst);
  const std::uint64_t before = oracle.call_count();
  auto tpa = tpa_multi(oracle, cfg.k, rng);
  const std::size_t points = tpa.points.size();
  const Schedule sched =
      thin_points(std::move(tpa.points), cfg.d, inst.beta_min(), inst.beta_max(), rng);
  EstimateResult out = paired_product(oracle, sched, cfg.r, rng);
  out.tpa_points = points;
  out.oracle_calls = oracle.call_count() - before;
  return out;
}

template <class URBG>
EstimateResult estimate(const CountInstance& inst, const EstimatorConfig& cfg, URBG& rng) {
  Oracle oracle(inst);
  return estimate(oracle, cfg, rng);
}

/// Median of t independent estimates (t odd). The returned record is the
/// median run, except that oracle_calls is the total over all t runs.
template <class URBG>
EstimateResult median_boost(Oracle& oracle, const EstimatorConfig& cfg, std::uint64_t t,
                            URBG& rng) {
  detail::require(t >= 1 && t % 2 == 1, "median boosting needs an odd number of runs");
  std::vector<EstimateResult> runs;
  runs.reserve(t);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < t; ++i) {
    runs.push_back(estimate(oracle, cfg, rng));
    total += runs.back().oracle_calls;
  }
  std::vector<std::size_t> order(t);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return runs[a].q_hat < runs[b].q_hat; });
  EstimateResult out = std::move(runs[order[t / 2]]);
  out.oracle_calls = total;
  return out;
}

template <class URBG>
EstimateResult median_boost(const CountInstance& inst, const EstimatorConfig& cfg,
                            std::uint64_t t, URBG& rng) {
  Oracle oracle(inst);
  return median_boost(oracle, cfg, t, rng);
}

/// P(Binomial(t, p_fail) >= ceil(t / 2)): failure bound of the median of t runs.
inline double boosted_failure_bound(std::uint64_t t, double p_fail) {
  double total = 0.0;
  for (std::uint64_t j = (t + 1) / 2; j <= t; ++j) {
    const double log_binom = std::lgamma(double(t) + 1) - std::lgamma(double(j) + 1) -
                             std::lgamma(double(t - j) + 1);
    total += std::exp(log_binom + double(j) * std::log(p_fail) +
                      double(t - j) * std::log1p(-p_fail));
  }
  return total;
}

/// Success test |q_hat - q| <= ln(1 + eps).
inline bool within_tolerance(double q_hat, double q_true, double epsilon) {
  return std::abs(q_hat - q_true) <= std::log1p(epsilon);
}

}  // namespace gibbs
