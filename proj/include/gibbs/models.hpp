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
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/instance.hpp"

namespace gibbs {

/// Exhaustive enumeration visits at most this many states.
inline constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 26;
inline constexpr int kMaxVertices = 24;
inline constexpr int kMaxMatchingEdges = 24;

/// Simple undirected graph: no self-loops, no duplicate edges.
class GraphSpec {
 public:
  GraphSpec(int vertices, std::vector<std::pair<int, int>> edges)
      : vertices_(vertices), edges_(std::move(edges)) {
    detail::require(vertices_ >= 0, "vertex count must be non-negative");
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : edges_) {
      detail::require(u >= 0 && v >= 0 && u < vertices_ && v < vertices_,
                      "edge references a vertex outside the graph");
      detail::require(u != v, "self-loops are not allowed");
      if (u > v) std::swap(u, v);
      detail::require(seen.insert({u, v}).second, "duplicate edge");
    }
  }

  int vertices() const noexcept { return vertices_; }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

  int components() const {
    std::vector<int> parent(vertices_);
    for (int i = 0; i < vertices_; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int count = vertices_;
    for (auto [u, v] : edges_) {
      const int a = find(u), b = find(v);
      if (a != b) {
        parent[a] = b;
        --count;
      }
    }
    return count;
  }

  static GraphSpec cycle(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return GraphSpec(n, std::move(e));
  }

  static GraphSpec path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return GraphSpec(n, std::move(e));
  }

  static GraphSpec grid(int rows, int cols) {
    std::vector<std::pair<int, int>> e;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        const int v = r * cols + c;
        if (c + 1 < cols) e.emplace_back(v, v + 1);
        if (r + 1 < rows) e.emplace_back(v, v + cols);
      }
    return GraphSpec(rows * cols, std::move(e));
  }

 private:
  int vertices_;
  std::vector<std::pair<int, int>> edges_;
};

/// Parses `u v` lines (0-indexed). Blank lines and `#` comments are skipped.
/// The vertex count is max index + 1 unless `vertices` is larger.
inline GraphSpec read_edge_list(std::istream& in, int vertices = 0) {
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int max_index = -1;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    int u, v;
    if (!(ls >> u >> v)) throw ParseError("edge list: cannot parse '" + line + "'");
    edges.emplace_back(u, v);
    max_index = std::max({max_index, u, v});
  }
  return GraphSpec(std::max(vertices, max_index + 1), std::move(edges));
}

inline GraphSpec read_edge_list(const std::string& text, int vertices = 0) {
  std::istringstream in(text);
  return read_edge_list(in, vertices);
}

namespace detail {

inline CountInstance histogram_to_instance(const std::vector<std::uint64_t>& counts,
                                           double beta_min, double beta_max, double n) {
  std::vector<Level> levels;
  for (std::size_t h = 0; h < counts.size(); ++h)
    if (counts[h] > 0)
      levels.push_back({static_cast<double>(h), std::log(static_cast<double>(counts[h]))});
  return CountInstance(std::move(levels), beta_min, beta_max, n);
}

inline double declared_n(std::size_t edges) { return std::max<double>(1.0, double(edges)); }

}  // namespace detail

/// Ising model: Omega = {-1,+1}^V, H(x) = #{edges with x_i != x_j}.
inline CountInstance enumerate_ising(const GraphSpec& g, double beta_min = 0.0,
                                     double beta_max = 1.0) {
  if (g.vertices() > kMaxVertices)
    throw BudgetExceeded("ising enumeration limited to " + std::to_string(kMaxVertices) +
                         " vertices");
  std::vector<std::uint64_t> counts(g.edges().size() + 1, 0);
  const std::uint64_t states = std::uint64_t{1} << g.vertices();
  for (std::uint64_t s = 0; s < states; ++s) {
    std::size_t h = 0;
    for (auto [u, v] : g.edges()) h += ((s >> u) ^ (s >> v)) & 1u;
    ++counts[h];
  }
  return detail::histogram_to_instance(counts, beta_min, beta_max,
                                       detail::declared_n(g.edges().size()));
}

/// Colorings: Omega = {1..k}^V, H(x) = #{monochromatic edges}; c_0 counts
/// the proper colorings.
inline CountInstance enumerate_colorings(const GraphSpec& g, int kcolors, double beta_min = 0.0,
                                         double beta_max = 1.0) {
  detail::require(kcolors >= 2, "colorings need at least two colors");
  const double total = std::pow(double(kcolors), double(g.vertices()));
  if (total > double(kEnumerationBudget))
    throw BudgetExceeded("k^|V| exceeds the enumeration budget");
  std::vector<std::uint64_t> counts(g.edges().size() + 1, 0);
  std::vector<int> color(g.vertices(), 0);
  while (true) {
    std::size_t h = 0;
    for (auto [u, v] : g.edges()) h += color[u] == color[v];
    ++counts[h];
    int i = 0;
    while (i < g.vertices() && ++color[i] == kcolors) color[i++] = 0;
    if (i == g.vertices()) break;
  }
  return detail::histogram_to_instance(counts, beta_min, beta_max,
                                       detail::declared_n(g.edges().size()));
}

/// Matchings: Omega = matchings M of E, H(M) = |M|.
inline CountInstance enumerate_matchings(const GraphSpec& g, double beta_min = 0.0,
                                         double beta_max = 1.0) {
  const auto& edges = g.edges();
  if (edges.size() > std::size_t(kMaxMatchingEdges))
    throw BudgetExceeded("matching enumeration limited to " +
                         std::to_string(kMaxMatchingEdges) + " edges");
  std::vector<std::uint64_t> counts(edges.size() + 1, 0);
  // Depth-first over edges, tracking covered vertices as a bitmask.
  auto recurse = [&](auto&& self, std::size_t next, std::uint32_t covered, std::size_t size) -> void {
    ++counts[size];
    for (std::size_t e = next; e < edges.size(); ++e) {
      const std::uint32_t mask = (1u << edges[e].first) | (1u << edges[e].second);
      if ((covered & mask) == 0) self(self, e + 1, covered | mask, size + 1);
    }
  };
  if (g.vertices() > 32) throw BudgetExceeded("matching enumeration limited to 32 vertices");
  recurse(recurse, 0, 0u, 0);
  return detail::histogram_to_instance(counts, beta_min, beta_max,
                                       detail::declared_n(edges.size()));
}

/// Finite stand-in for beta = +inf on colorings: the returned beta makes
/// (Z(beta) - c_0) / c_0 <= tol.
inline double coloring_beta_max(const CountInstance& inst, double tol = 1e-3) {
  detail::require(inst.has_zero_level(), "graph has no proper coloring with this many colors");
  detail::require(tol > 0.0, "tolerance must be positive");
  std::vector<double> rest;
  for (const Level& lv : inst.support())
    if (lv.h >= 1.0) rest.push_back(lv.log_c);
  if (rest.empty()) return inst.beta_min() + 1.0;
  const double beta = log_sum_exp<double>(rest) - std::log(tol) - inst.support().front().log_c;
  return std::max(beta, inst.beta_min() + 1.0);
}

enum class RangeMode { shift, reflect };

/// Affine map back from the normalized problem: q = scale * q' + offset.
struct RangeMap {
  double scale = 1.0;
  double offset = 0.0;
  double apply(double q_normalized) const noexcept { return scale * q_normalized + offset; }
};

struct NormalizedInstance {
  CountInstance instance;
  RangeMap map;
};

/// Moves an integer-valued support into {0, 1, ..., h_max - h_min}.
///
/// shift:   H' = H - h_min, same bounds, q' = q - (b_max - b_min) h_min.
/// reflect: H' = h_max - H, bounds (-b_max, -b_min), q' = (b_max - b_min) h_max - q.
inline NormalizedInstance normalize_range(const CountInstance& inst, RangeMode mode) {
  for (const Level& lv : inst.support())
    if (lv.h != std::round(lv.h))
      throw InvalidArgument("range normalization requires integer energies");
  const double h_min = inst.min_energy();
  const double h_max = inst.max_energy();
  const double width = inst.beta_max() - inst.beta_min();
  const double n = std::max(1.0, h_max - h_min);
  std::vector<Level> levels;
  levels.reserve(inst.size());
  if (mode == RangeMode::shift) {
    for (const Level& lv : inst.support()) levels.push_back({lv.h - h_min, lv.log_c});
    return {CountInstance(std::move(levels), inst.beta_min(), inst.beta_max(), n),
            RangeMap{1.0, width * h_min}};
  }
  for (const Level& lv : inst.support()) levels.push_back({h_max - lv.h, lv.log_c});
  return {CountInstance(std::move(levels), -inst.beta_max(), -inst.beta_min(), n),
          RangeMap{-1.0, width * h_max}};
}

/// beta_max > beta_min with log_ratio_true = target_q, by bisection.
inline double solve_beta_max(const CountInstance& inst, double target_q) {
  detail::require(target_q > 0.0, "target q must be positive");
  const double b0 = inst.beta_min();
  const double z0 = log_partition(inst, b0);
  auto q_at = [&](double b) { return z0 - log_partition(inst, b); };
  double hi = b0 + 1.0;
  for (int i = 0; q_at(hi) < target_q; ++i) {
    if (i > 200) throw InvalidArgument("target q is not reachable on this instance");
    hi = b0 + 2.0 * (hi - b0);
  }
  double lo = b0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (q_at(mid) < target_q ? lo : hi) = mid;
  }
  return hi;
}

/// Two-level case-II instance {(0, 1), (1, e^{log_c1})} with beta_max set
/// so that q = target_q. Requires target_q < ln(1 + e^{log_c1}).
inline CountInstance two_level_instance(double log_c1, double target_q) {
  CountInstance base({{0.0, 0.0}, {1.0, log_c1}}, 0.0, 1.0, 1.0);
  return base.with_bounds(0.0, solve_beta_max(base, target_q));
}

}  // namespace gibbs
