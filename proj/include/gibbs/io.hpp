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
#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbs/error.hpp"
#include "gibbs/instance.hpp"

namespace gibbs {

/// Decimal text with 17 significant digits (round-trips any double).
/// Infinities and NaN are written as JSON-compatible strings.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// {"n": .., "beta_min": .., "beta_max": .., "support": [[h, log_c], ...]}
inline std::string write_instance(const CountInstance& inst) {
  std::string out = "{\"n\": " + format_double(inst.n()) +
                    ", \"beta_min\": " + format_double(inst.beta_min()) +
                    ", \"beta_max\": " + format_double(inst.beta_max()) + ", \"support\": [";
  bool first = true;
  for (const Level& lv : inst.support()) {
    if (!first) out += ", ";
    first = false;
    out += "[" + format_double(lv.h) + ", " + format_double(lv.log_c) + "]";
  }
  out += "]}";
  return out;
}

inline CountInstance read_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  try {
    std::vector<Level> levels;
    for (const auto& pair : j.at("support")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("instance: support entries must be [h, log_c] pairs");
      levels.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    const double n = j.contains("n") ? j.at("n").get<double>() : std::nan("");
    return CountInstance(std::move(levels), j.at("beta_min").get<double>(),
                         j.at("beta_max").get<double>(), n);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

/// One beta per line.
inline std::string write_schedule(const Schedule& sched) {
  std::string out;
  for (double b : sched.betas()) out += format_double(b) + "\n";
  return out;
}

inline Schedule read_schedule(std::istream& in) {
  std::vector<double> betas;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    double b;
    if (!(ls >> b)) throw ParseError("schedule: cannot parse '" + line + "'");
    betas.push_back(b);
  }
  return Schedule(std::move(betas));
}

inline Schedule read_schedule(const std::string& text) {
  std::istringstream in(text);
  return read_schedule(in);
}

}  // namespace gibbs
