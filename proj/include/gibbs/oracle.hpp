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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/instance.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

enum class CorruptionMode { uniform, adversarial_max_h, adversarial_min_h };

inline std::string_view to_string(CorruptionMode m) {
  switch (m) {
    case CorruptionMode::uniform: return "uniform";
    case CorruptionMode::adversarial_max_h: return "adversarial_max_h";
    case CorruptionMode::adversarial_min_h: return "adversarial_min_h";
  }
  return "?";
}

inline CorruptionMode parse_corruption_mode(std::string_view s) {
  if (s == "uniform") return CorruptionMode::uniform;
  if (s == "adversarial_max_h") return CorruptionMode::adversarial_max_h;
  if (s == "adversarial_min_h") return CorruptionMode::adversarial_min_h;
  throw InvalidArgument("unknown corruption mode '" + std::string(s) + "'");
}

/// Mixture corruption: with probability tv_budget the draw comes from the
/// corruption distribution instead of mu_beta, so the output law stays
/// within tv_budget of mu_beta in total variation.
struct Corruption {
  double tv_budget = 0.0;
  CorruptionMode mode = CorruptionMode::uniform;
};

/// Cumulative distribution of mu_beta over the support, for repeated draws
/// at one temperature.
class LevelTable {
 public:
  LevelTable(const CountInstance& inst, double beta) : beta_(beta) { fill(inst, beta, cdf_); }

  double beta() const noexcept { return beta_; }
  const std::vector<double>& cdf() const noexcept { return cdf_; }

  /// Index of the level selected by u in [0, 1).
  std::size_t pick(double u) const noexcept { return pick(cdf_, u); }

  static void fill(const CountInstance& inst, double beta, std::vector<double>& cdf) {
    const auto& s = inst.support();
    cdf.resize(s.size());
    double hi = kNegInf;
    for (std::size_t i = 0; i < s.size(); ++i) {
      cdf[i] = s[i].log_c - beta * s[i].h;
      hi = std::max(hi, cdf[i]);
    }
    double acc = 0.0;
    for (double& x : cdf) {
      acc += std::exp(x - hi);
      x = acc;
    }
    for (double& x : cdf) x /= acc;
  }

  static std::size_t pick(const std::vector<double>& cdf, double u) noexcept {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return it == cdf.end() ? cdf.size() - 1 : std::size_t(it - cdf.begin());
  }

 private:
  double beta_;
  std::vector<double> cdf_;
};

/// Sampling oracle returning energies H(X), X ~ mu_beta, with call counting.
///
/// Handles share the underlying instance read-only; a handle itself is not
/// meant to be used from two threads at once.
class Oracle {
 public:
  explicit Oracle(CountInstance inst)
      : inst_(std::make_shared<const CountInstance>(std::move(inst))) {}
  explicit Oracle(std::shared_ptr<const CountInstance> inst) : inst_(std::move(inst)) {
    detail::require(inst_ != nullptr, "oracle needs an instance");
  }

  const CountInstance& instance() const noexcept { return *inst_; }
  const std::shared_ptr<const CountInstance>& shared_instance() const noexcept { return inst_; }
  const std::optional<Corruption>& corruption() const noexcept { return corruption_; }

  /// A fresh handle (call count 0) on the same instance whose draws are
  /// corrupted with probability tv_budget.
  Oracle with_corruption(double tv_budget, CorruptionMode mode) const {
    detail::require(tv_budget >= 0.0 && tv_budget < 1.0, "tv_budget must lie in [0, 1)");
    Oracle out(inst_);
    out.corruption_ = Corruption{tv_budget, mode};
    return out;
  }

  LevelTable level(double beta) const { return LevelTable(*inst_, beta); }

  template <class URBG>
  double sample(double beta, URBG& rng) {
    ++calls_;
    if (auto h = corrupted_draw(rng)) return *h;
    LevelTable::fill(*inst_, beta, scratch_);
    return inst_->support()[LevelTable::pick(scratch_, uniform_unit(rng))].h;
  }

  template <class URBG>
  double sample(const LevelTable& table, URBG& rng) {
    ++calls_;
    if (auto h = corrupted_draw(rng)) return *h;
    return inst_->support()[table.pick(uniform_unit(rng))].h;
  }

  std::uint64_t call_count() const noexcept { return calls_; }
  void reset_count() noexcept { calls_ = 0; }

 private:
  template <class URBG>
  std::optional<double> corrupted_draw(URBG& rng) {
    if (!corruption_ || corruption_->tv_budget == 0.0) return std::nullopt;
    if (uniform_unit(rng) >= corruption_->tv_budget) return std::nullopt;
    const auto& s = inst_->support();
    switch (corruption_->mode) {
      case CorruptionMode::uniform: return s[uniform_index(rng, s.size())].h;
      case CorruptionMode::adversarial_max_h: return s.back().h;
      case CorruptionMode::adversarial_min_h: return s.front().h;
    }
    return std::nullopt;
  }

  std::shared_ptr<const CountInstance> inst_;
  std::optional<Corruption> corruption_;
  std::uint64_t calls_ = 0;
  std::vector<double> scratch_;
};

}  // namespace gibbs
