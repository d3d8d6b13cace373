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
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/logmath.hpp"

namespace gibbs {

/// One energy level of a count instance: c_h states share energy h.
struct Level {
  double h;
  double log_c;  ///< ln c_h, finite
};

/// A Gibbs problem described by its energy histogram.
///
/// Z(beta) = sum_h c_h exp(-beta h). The support is kept sorted by h with
/// distinct energies; duplicate energies passed to the constructor are merged
/// by adding their counts in log space. Instances are immutable.
class CountInstance {
 public:
  /// `n` is the declared energy bound; NaN means max(1, max h).
  CountInstance(std::vector<Level> support, double beta_min, double beta_max,
                double n = std::nan(""))
      : support_(std::move(support)), beta_min_(beta_min), beta_max_(beta_max) {
    detail::require(!support_.empty(), "instance support must be non-empty");
    detail::require(std::isfinite(beta_min_) && std::isfinite(beta_max_),
                    "instance bounds must be finite");
    detail::require(beta_min_ < beta_max_, "instance requires beta_min < beta_max");
    for (const Level& lv : support_) {
      detail::require(std::isfinite(lv.h), "energy values must be finite");
      detail::require(std::isfinite(lv.log_c), "log counts must be finite");
    }
    std::stable_sort(support_.begin(), support_.end(),
                     [](const Level& a, const Level& b) { return a.h < b.h; });
    std::vector<Level> merged;
    merged.reserve(support_.size());
    for (const Level& lv : support_) {
      if (!merged.empty() && merged.back().h == lv.h)
        merged.back().log_c = log_add_exp(merged.back().log_c, lv.log_c);
      else
        merged.push_back(lv);
    }
    support_ = std::move(merged);
    n_ = std::isnan(n) ? std::max(1.0, support_.back().h) : n;
    detail::require(std::isfinite(n_) && n_ >= support_.back().h,
                    "declared n must bound every energy value");
  }

  /// Convenience constructor from integer counts.
  static CountInstance from_counts(std::span<const std::pair<double, double>> h_and_count,
                                   double beta_min, double beta_max,
                                   double n = std::nan("")) {
    std::vector<Level> levels;
    levels.reserve(h_and_count.size());
    for (auto [h, c] : h_and_count) {
      detail::require(c > 0, "counts must be strictly positive");
      levels.push_back({h, std::log(c)});
    }
    return CountInstance(std::move(levels), beta_min, beta_max, n);
  }

  const std::vector<Level>& support() const noexcept { return support_; }
  std::size_t size() const noexcept { return support_.size(); }
  double beta_min() const noexcept { return beta_min_; }
  double beta_max() const noexcept { return beta_max_; }
  double n() const noexcept { return n_; }
  double min_energy() const noexcept { return support_.front().h; }
  double max_energy() const noexcept { return support_.back().h; }
  bool has_zero_level() const noexcept { return support_.front().h == 0.0; }

  /// Every energy lies in {0} U [1, n].
  bool in_energy_range() const noexcept {
    return std::all_of(support_.begin(), support_.end(), [this](const Level& lv) {
      return lv.h == 0.0 || (lv.h >= 1.0 && lv.h <= n_);
    });
  }

  CountInstance with_bounds(double beta_min, double beta_max) const {
    return CountInstance(support_, beta_min, beta_max, n_);
  }

  friend bool operator==(const CountInstance& a, const CountInstance& b) {
    if (a.beta_min_ != b.beta_min_ || a.beta_max_ != b.beta_max_ || a.n_ != b.n_ ||
        a.support_.size() != b.support_.size())
      return false;
    for (std::size_t i = 0; i < a.support_.size(); ++i)
      if (a.support_[i].h != b.support_[i].h || a.support_[i].log_c != b.support_[i].log_c)
        return false;
    return true;
  }

 private:
  std::vector<Level> support_;
  double beta_min_;
  double beta_max_;
  double n_;
};

/// Unnormalized log weights ln c_h - beta h, in support order.
inline std::vector<double> log_weights(const CountInstance& inst, double beta) {
  std::vector<double> w;
  w.reserve(inst.size());
  for (const Level& lv : inst.support()) w.push_back(lv.log_c - beta * lv.h);
  return w;
}

/// z(beta) = ln Z(beta).
inline double log_partition(const CountInstance& inst, double beta) {
  const auto w = log_weights(inst, beta);
  return log_sum_exp<double>(w);
}

/// Normalized Gibbs probabilities of each support level at beta.
inline std::vector<double> level_probabilities(const CountInstance& inst, double beta) {
  auto w = log_weights(inst, beta);
  const double z = log_sum_exp<double>(w);
  for (double& x : w) x = std::exp(x - z);
  return w;
}

/// q = ln(Z(beta_min) / Z(beta_max)).
inline double log_ratio_true(const CountInstance& inst) {
  if (inst.size() == 1) return (inst.beta_max() - inst.beta_min()) * inst.support()[0].h;
  return log_partition(inst, inst.beta_min()) - log_partition(inst, inst.beta_max());
}

/// E[H] under mu_beta, which equals -z'(beta).
inline double mean_energy(const CountInstance& inst, double beta) {
  if (inst.size() == 1) return inst.support()[0].h;
  const auto p = level_probabilities(inst, beta);
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) mean += p[i] * inst.support()[i].h;
  return std::clamp(mean, inst.min_energy(), inst.max_energy());
}

/// Var[H] under mu_beta, which equals z''(beta).
inline double energy_variance(const CountInstance& inst, double beta) {
  if (inst.size() == 1) return 0.0;
  const auto p = level_probabilities(inst, beta);
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) mean += p[i] * inst.support()[i].h;
  double var = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double dev = inst.support()[i].h - mean;
    var += p[i] * dev * dev;
  }
  return var;
}

/// Strictly increasing inverse temperatures beta_0 < ... < beta_l, l >= 1.
class Schedule {
 public:
  explicit Schedule(std::vector<double> betas) : betas_(std::move(betas)) {
    detail::require(betas_.size() >= 2, "schedule needs at least two temperatures");
    for (std::size_t i = 0; i < betas_.size(); ++i) {
      detail::require(std::isfinite(betas_[i]), "schedule temperatures must be finite");
      if (i > 0)
        detail::require(betas_[i - 1] < betas_[i], "schedule must be strictly increasing");
    }
  }

  const std::vector<double>& betas() const noexcept { return betas_; }
  /// Number of intervals l.
  std::size_t length() const noexcept { return betas_.size() - 1; }
  double front() const noexcept { return betas_.front(); }
  double back() const noexcept { return betas_.back(); }
  double operator[](std::size_t i) const { return betas_[i]; }

  bool matches(const CountInstance& inst) const noexcept {
    return front() == inst.beta_min() && back() == inst.beta_max();
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<double> betas_;
};

inline void require_matching(const Schedule& sched, const CountInstance& inst) {
  detail::require(sched.matches(inst), "schedule endpoints must equal the instance bounds");
}

struct DeltaReport {
  double delta = 0.0;
  std::vector<double> per_interval;
};

/// delta = ln Vrel(W) decomposed over intervals:
/// delta_i = z(b_i) - 2 z((b_i + b_{i+1}) / 2) + z(b_{i+1}) >= 0.
inline DeltaReport schedule_delta(const CountInstance& inst, const Schedule& sched) {
  require_matching(sched, inst);
  DeltaReport out;
  out.per_interval.reserve(sched.length());
  if (inst.size() == 1) {
    out.per_interval.assign(sched.length(), 0.0);
    return out;
  }
  double z_lo = log_partition(inst, sched[0]);
  for (std::size_t i = 0; i < sched.length(); ++i) {
    const double z_hi = log_partition(inst, sched[i + 1]);
    const double z_mid = log_partition(inst, 0.5 * (sched[i] + sched[i + 1]));
    const double d = z_lo - 2.0 * z_mid + z_hi;
    out.per_interval.push_back(d);
    out.delta += d;
    z_lo = z_hi;
  }
  return out;
}

struct PairedMoments {
  double log_ew;    ///< ln E[W_i] = z(mid) - z(lo)
  double log_ev;    ///< ln E[V_i] = z(mid) - z(hi)
  double log_vrel;  ///< ln Vrel(W_i) = z(lo) + z(hi) - 2 z(mid)
};

inline PairedMoments paired_moments(const CountInstance& inst, double beta_lo, double beta_hi) {
  detail::require(beta_lo < beta_hi, "paired_moments requires beta_lo < beta_hi");
  if (inst.size() == 1) {
    const double half = 0.5 * (beta_hi - beta_lo) * inst.support()[0].h;
    return {-half, half, 0.0};
  }
  const double z_lo = log_partition(inst, beta_lo);
  const double z_hi = log_partition(inst, beta_hi);
  const double z_mid = log_partition(inst, 0.5 * (beta_lo + beta_hi));
  return {z_mid - z_lo, z_mid - z_hi, z_lo + z_hi - 2.0 * z_mid};
}

}  // namespace gibbs
