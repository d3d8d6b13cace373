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
#include <cstdint>
#include <random>

namespace gibbs {

/// The library's generator. Its output sequence is fixed by the C++ standard,
/// and all variates below are derived from raw 64-bit draws, so results are
/// reproducible across platforms.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for stream `index` of a run keyed by `master`:
/// splitmix64(splitmix64(master) ^ splitmix64(index + 1)).
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 1));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
  return Rng(stream_seed(master, index));
}

/// Uniform on the open interval (0, 1), 53-bit resolution.
template <class URBG>
inline double uniform_open(URBG& rng) {
  return (double(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform on [0, 1).
template <class URBG>
inline double uniform_unit(URBG& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in {0, ..., n-1}, n >= 1.
template <class URBG>
inline std::uint64_t uniform_index(URBG& rng, std::uint64_t n) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do x = rng(); while (x >= limit);
  return x % n;
}

/// Exponential with the given rate.
template <class URBG>
inline double exponential(URBG& rng, double rate) {
  return -std::log(uniform_open(rng)) / rate;
}

}  // namespace gibbs
