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
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/estimator.hpp"
#include "gibbs/harness.hpp"
#include "gibbs/instance.hpp"
#include "gibbs/io.hpp"
#include "gibbs/lowerbound.hpp"
#include "gibbs/models.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/special.hpp"
#include "gibbs/stats.hpp"
#include "gibbs/tpa.hpp"

namespace gibbs {

struct SuiteCheck {
  std::string name;
  double observed;
  double expected;
  double tolerance;
  bool pass;
};

struct SuiteReport {
  std::string name;
  std::vector<SuiteCheck> checks;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
  }
  void add(std::string check, double observed, double expected, double tol, bool ok) {
    checks.push_back({std::move(check), observed, expected, tol, ok});
  }
  /// |observed - expected| <= tol.
  void add_near(std::string check, double observed, double expected, double tol) {
    add(std::move(check), observed, expected, tol, std::abs(observed - expected) <= tol);
  }
};

inline std::string format_report(const SuiteReport& rep) {
  std::string out;
  char buf[512];
  for (const auto& c : rep.checks) {
    std::snprintf(buf, sizeof buf, "[%s] %-52s observed=%.10g expected=%.10g tol=%.3g\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.observed, c.expected, c.tolerance);
    out += buf;
  }
  out += std::string("suite ") + rep.name + ": " + (rep.pass() ? "PASS" : "FAIL") + "\n";
  return out;
}

/// Tabulated tau_rho(d) upper bounds and minimizers for rho = 75/76.
struct TauTableRow {
  long d;
  double value;
  double argmin;
};
inline constexpr std::array<TauTableRow, 10> kTauTable{{{1, 9.903, 8.645},
                                                        {2, 6.052, 5.384},
                                                        {4, 4.000, 3.634},
                                                        {8, 2.860, 2.653},
                                                        {16, 2.197, 2.075},
                                                        {32, 1.794, 1.720},
                                                        {64, 1.539, 1.492},
                                                        {128, 1.372, 1.342},
                                                        {256, 1.260, 1.241},
                                                        {512, 1.184, 1.170}}};

inline SuiteReport suite_tau_table() {
  SuiteReport rep{"tau_table", {}};
  const double rho = 75.0 / 76.0;
  for (const auto& row : kTauTable) {
    const auto t = tau_rho(row.d, rho);
    const std::string d = std::to_string(row.d);
    rep.add("tau_rho(" + d + ") in [table - 5e-3, table + 1e-3]", t.value, row.value, 1e-3,
            t.value <= row.value + 1e-3 && t.value >= row.value - 5e-3);
    rep.add_near("argmin tau(" + d + ")", t.argmin_tau, row.argmin, 0.01);
  }
  return rep;
}

inline SuiteReport suite_distribution(std::uint64_t seed = 20260101) {
  SuiteReport rep{"distribution", {}};
  const CountInstance singleton({{1.0, 0.0}}, 0.0, 5.0);
  const CountInstance two({{0.0, 0.0}, {1.0, 0.0}}, 0.0, std::log(3.0));
  {
    Rng rng = make_stream(seed, 0);
    Oracle o(singleton);
    std::vector<double> counts;
    for (int i = 0; i < 2000; ++i) counts.push_back(double(tpa_multi(o, 10, rng).points.size()));
    const double mu = stats::mean(counts);
    rep.add_near("|TPA(10)| mean on q=5", mu, 50.0, 3.0 * std::sqrt(50.0 / 2000.0));
    const double ratio = stats::variance(counts) / mu;
    rep.add("|TPA(10)| variance/mean in [0.9, 1.1]", ratio, 1.0, 0.1, ratio >= 0.9 && ratio <= 1.1);
  }
  {
    Rng rng = make_stream(seed, 1);
    Oracle o(singleton);
    std::vector<double> counts;
    for (int i = 0; i < 2000; ++i) counts.push_back(double(tpa_run(o, rng).size()));
    rep.add_near("|TPA(1)| mean on q=5", stats::mean(counts), 5.0, 3.0 * std::sqrt(5.0 / 2000.0));
  }
  {
    Rng rng = make_stream(seed, 2);
    Oracle o(two);
    constexpr int kDraws = 100000;
    const std::array<double, 5> alphas{0.2, 0.5, std::log(2.0), 1.0, 1.5};
    std::array<int, 5> hits{};
    for (int i = 0; i < kDraws; ++i) {
      const double b = tpa_step(o, 0.0, rng);
      for (std::size_t a = 0; a < alphas.size(); ++a) hits[a] += b >= alphas[a];
    }
    const double z0 = log_partition(two, 0.0);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const double p = std::exp(log_partition(two, alphas[a]) - z0);
      const double se = std::sqrt(p * (1 - p) / kDraws);
      char name[64];
      std::snprintf(name, sizeof name, "P(TPAstep >= %.4f) = Z(a)/Z(0)", alphas[a]);
      rep.add_near(name, double(hits[a]) / kDraws, p, 4.0 * se);
    }
  }
  {
    // Downward gaps of z(TPA(k)) against the reference Poisson process.
    Rng rng = make_stream(seed, 3);
    Oracle o(two);
    const std::uint64_t k = 10;
    const double z_top = log_partition(two, two.beta_min());
    const double q = log_ratio_true(two);
    auto gaps_of = [](std::vector<double> zs, double top) {
      std::sort(zs.begin(), zs.end(), std::greater<>());
      std::vector<double> g;
      double prev = top;
      for (double z : zs) {
        g.push_back(prev - z);
        prev = z;
      }
      return g;
    };
    std::vector<double> tpa_gaps, ppp_gaps;
    while (tpa_gaps.size() < 5000) {
      std::vector<double> zs;
      for (double b : tpa_multi(o, k, rng).points) zs.push_back(log_partition(two, b));
      for (double g : gaps_of(zs, z_top)) tpa_gaps.push_back(g);
    }
    while (ppp_gaps.size() < 5000)
      for (double g : gaps_of(ppp_reference(q, k, rng, z_top), z_top)) ppp_gaps.push_back(g);
    const double d = stats::ks_statistic(tpa_gaps, ppp_gaps);
    const double crit = stats::ks_critical(tpa_gaps.size(), ppp_gaps.size(), 1e-3);
    rep.add("KS z(TPA(10)) gaps vs reference PPP gaps", d, 0.0, crit, d <= crit);
  }
  {
    Rng rng = make_stream(seed, 4);
    std::vector<double> counts;
    for (int i = 0; i < 2000; ++i) counts.push_back(double(ppp_reference(5.0, 1, rng).size()));
    rep.add_near("reference PPP count mean q=5 k=1", stats::mean(counts), 5.0,
                 3.0 * std::sqrt(5.0 / 2000.0));
  }
  return rep;
}

inline SuiteReport suite_accounting(std::uint64_t seed = 20260102) {
  SuiteReport rep{"accounting", {}};
  const CountInstance inst = two_level_instance(10.0, 8.0);
  const EstimatorConfig cfg = default_config(0.5, inst.n(), EnergyCase::II);
  std::uint64_t mismatches = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng = make_stream(seed, t);
    Oracle o(inst);
    const auto res = estimate(o, cfg, rng);
    const std::uint64_t structural = (res.tpa_points + cfg.k) + (res.schedule_len + 1) * cfg.r;
    mismatches += structural != res.oracle_calls || o.call_count() != res.oracle_calls;
  }
  rep.add("estimate calls == (|TPA| + k) + (l + 1) r, 20 trials", double(mismatches), 0.0, 0.0,
          mismatches == 0);
  mismatches = 0;
  Rng rng = make_stream(seed, 100);
  Oracle o(inst);
  for (int t = 0; t < 100; ++t) {
    const auto before = o.call_count();
    const auto tpa = tpa_multi(o, 7, rng);
    mismatches += o.call_count() - before != tpa.points.size() + 7;
  }
  rep.add("tpa_multi calls == |points| + k, 100 runs", double(mismatches), 0.0, 0.0, mismatches == 0);
  mismatches = 0;
  for (int t = 0; t < 20; ++t) {
    const Schedule sched = generate_schedule(o, 64, 8, rng);
    const auto before = o.call_count();
    paired_product(o, sched, 13, rng);
    mismatches += o.call_count() - before != (sched.length() + 1) * 13;
  }
  rep.add("paired_product calls == (l + 1) r, 20 runs", double(mismatches), 0.0, 0.0, mismatches == 0);
  return rep;
}

inline SuiteReport suite_hardness() {
  SuiteReport rep{"hardness", {}};
  for (auto [N, m] : {std::pair<std::uint64_t, std::uint64_t>{16, 2}, {32, 3}}) {
    const auto lb = build_lower_bound(N, m);
    const auto r = verify_hardness(lb);
    const std::string tag = "(N=" + std::to_string(N) + ", m=" + std::to_string(m) + ") ";
    for (const auto& c : r.checks)
      rep.add(tag + c.name, c.observed, c.bound, 0.0, c.pass);
    double worst = 0.0;
    for (double nu : {0.01, 0.1, 1.0})
      for (int i = 0; i < 10; ++i) {
        const double beta = -2.0 + 0.3 * lb.beta_max * i / 9.0 + i;
        const double zp = log_partition(perturb(lb, nu, PerturbSign::plus), beta);
        const double zm = log_partition(perturb(lb, nu, PerturbSign::minus), beta);
        worst = std::max({worst, std::abs(zp - log_partition(lb.expanded, beta - nu)),
                          std::abs(zm - log_partition(lb.expanded, beta + nu))});
      }
    rep.add(tag + "Z_pm(beta) = Z(beta -+ nu)", worst, 0.0, 1e-9, worst <= 1e-9);
  }
  return rep;
}

inline SuiteReport run_suite(const std::string& name) {
  if (name == "tau_table") return suite_tau_table();
  if (name == "distribution") return suite_distribution();
  if (name == "accounting") return suite_accounting();
  if (name == "hardness") return suite_hardness();
  throw InvalidArgument("unknown suite '" + name + "' (expected distribution, accounting, hardness, tau_table)");
}

}  // namespace gibbs
