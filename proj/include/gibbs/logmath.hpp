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
#include <limits>
#include <span>

namespace gibbs {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// ln(e^a + e^b) without overflow. Either argument may be -inf.
template <typename T>
inline T log_add_exp(T a, T b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<T>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

/// Max-shifted log-sum-exp. Returns -inf for an empty range.
template <typename T>
inline T log_sum_exp(std::span<const T> xs) {
  if (xs.empty()) return -std::numeric_limits<T>::infinity();
  const T hi = *std::max_element(xs.begin(), xs.end());
  if (hi == -std::numeric_limits<T>::infinity()) return hi;
  if (hi == std::numeric_limits<T>::infinity()) return hi;
  T acc = 0;
  for (T x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

/// ln((1/n) sum_j e^{x_j}).
template <typename T>
inline T log_mean_exp(std::span<const T> xs) {
  return log_sum_exp(xs) - std::log(static_cast<T>(xs.size()));
}

}  // namespace gibbs
