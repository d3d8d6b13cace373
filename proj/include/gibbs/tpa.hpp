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
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/instance.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

/// Multiset of TPA points in [beta_min, beta_max], in generation order.
struct TpaOutput {
  std::vector<double> points;
  std::uint64_t runs = 0;
  std::uint64_t terminal_calls = 0;  ///< one out-of-range draw per run
};

/// One TPA step from beta: draw X ~ mu_beta and U ~ (0,1), return
/// beta - ln(U) / H(X), or +inf when H(X) = 0.
///
/// P(step >= alpha) = Z(alpha) / Z(beta) for every alpha >= beta.
template <class URBG>
double tpa_step(Oracle& oracle, double beta, URBG& rng) {
  const double h = oracle.sample(beta, rng);
  const double u = uniform_open(rng);
  if (h == 0.0) return kInf;
  return beta - std::log(u) / h;
}

namespace detail {
inline void require_nonnegative(const CountInstance& inst) {
  require(inst.min_energy() >= 0.0, "TPA requires a non-negative Hamiltonian");
}
}  // namespace detail

/// One run of TPA started at beta_min; appends the in-range points to `out`.
/// Consumes |points| + 1 oracle calls.
template <class URBG>
void tpa_run(Oracle& oracle, URBG& rng, std::vector<double>& out) {
  const CountInstance& inst = oracle.instance();
  detail::require_nonnegative(inst);
  double beta = inst.beta_min();
  while (true) {
    beta = tpa_step(oracle, beta, rng);
    if (!(beta <= inst.beta_max())) return;
    out.push_back(beta);
  }
}

template <class URBG>
std::vector<double> tpa_run(Oracle& oracle, URBG& rng) {
  std::vector<double> out;
  tpa_run(oracle, rng, out);
  return out;
}

/// Union of k independent runs. |points| ~ Poisson(k q).
template <class URBG>
TpaOutput tpa_multi(Oracle& oracle, std::uint64_t k, URBG& rng) {
  detail::require(k >= 1, "TPA(k) requires k >= 1");
  TpaOutput out;
  for (std::uint64_t i = 0; i < k; ++i) tpa_run(oracle, rng, out.points);
  out.runs = k;
  out.terminal_calls = k;
  return out;
}

/// Sorts the points, keeps every d-th starting at an index drawn uniformly
/// from {1, ..., d}, and closes the sequence with beta_min and beta_max.
/// Kept points that would break strict monotonicity are dropped.
template <class URBG>
Schedule thin_points(std::vector<double> points, std::uint64_t d, double beta_min,
                     double beta_max, URBG& rng) {
  detail::require(d >= 1, "thinning stride d must be >= 1");
  std::stable_sort(points.begin(), points.end());
  const std::uint64_t offset = 1 + uniform_index(rng, d);
  std::vector<double> betas{beta_min};
  betas.reserve(points.size() / d + 2);
  for (std::uint64_t idx = offset - 1; idx < points.size(); idx += d) {
    const double b = points[idx];
    if (b > betas.back() && b < beta_max) betas.push_back(b);
  }
  betas.push_back(beta_max);
  return Schedule(std::move(betas));
}

/// TPA(k) followed by thinning with stride d. E[l] = (k / d) q + 1.
template <class URBG>
Schedule generate_schedule(Oracle& oracle, std::uint64_t k, std::uint64_t d, URBG& rng) {
  detail::require(d >= 1, "thinning stride d must be >= 1");
  auto tpa = tpa_multi(oracle, k, rng);
  const CountInstance& inst = oracle.instance();
  return thin_points(std::move(tpa.points), d, inst.beta_min(), inst.beta_max(), rng);
}

/// Reference Poisson point process of rate k running downward from z_top
/// and stopping below z_top - q. This is the law of z(TPA(k)) when
/// z_top = z(beta_min) and q = z(beta_min) - z(beta_max).
template <class URBG>
std::vector<double> ppp_reference(double q, std::uint64_t k, URBG& rng, double z_top = 0.0) {
  detail::require(q > 0.0, "ppp_reference requires q > 0");
  detail::require(k >= 1, "ppp_reference requires k >= 1");
  std::vector<double> out;
  const double floor = z_top - q;
  double z = z_top;
  while (true) {
    z -= exponential(rng, double(k));
    if (z < floor) return out;
    out.push_back(z);
  }
}

}  // namespace gibbs
