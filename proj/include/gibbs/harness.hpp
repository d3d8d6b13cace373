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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gibbs/error.hpp"
#include "gibbs/estimator.hpp"
#include "gibbs/instance.hpp"
#include "gibbs/io.hpp"
#include "gibbs/lowerbound.hpp"
#include "gibbs/models.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

enum class ModelKind { synthetic, ising, colorings, matchings, lowerbound };

inline ModelKind parse_model_kind(std::string_view s) {
  if (s == "synthetic") return ModelKind::synthetic;
  if (s == "ising") return ModelKind::ising;
  if (s == "colorings") return ModelKind::colorings;
  if (s == "matchings") return ModelKind::matchings;
  if (s == "lowerbound") return ModelKind::lowerbound;
  throw InvalidArgument("unknown model '" + std::string(s) + "'");
}

/// Which instance to build. Synthetic models come from an instance file or
/// a named preset: `singleton` {(1,1)} on [0,5], `twolevel` {(0,1),(1,1)}
/// on [0, ln 3], `twolevel-q8` {(0,1),(1,e^10)} with q = 8.
struct ModelSpec {
  ModelKind kind = ModelKind::synthetic;
  std::string preset = "twolevel";
  std::string instance_path;
  std::string graph_path;
  int vertices = 0;
  int kcolors = 3;
  std::uint64_t lb_N = 16;
  std::uint64_t lb_m = 2;
  std::optional<double> beta_min;
  std::optional<double> beta_max;
  std::optional<double> target_q;  ///< solve beta_max for this q instead
};

inline CountInstance synthetic_preset(const std::string& name) {
  if (name == "singleton") return CountInstance({{1.0, 0.0}}, 0.0, 5.0, 1.0);
  if (name == "twolevel") return CountInstance({{0.0, 0.0}, {1.0, 0.0}}, 0.0, std::log(3.0), 1.0);
  if (name == "twolevel-q8") return two_level_instance(10.0, 8.0);
  throw InvalidArgument("unknown synthetic preset '" + name + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CountInstance build_model(const ModelSpec& spec) {
  auto rebound = [&](const CountInstance& inst, double default_max) {
    const double lo = spec.beta_min.value_or(inst.beta_min());
    CountInstance out = inst.with_bounds(lo, std::max(spec.beta_max.value_or(default_max), lo + 1e-12));
    if (spec.target_q) out = out.with_bounds(lo, solve_beta_max(out, *spec.target_q));
    return out;
  };
  switch (spec.kind) {
    case ModelKind::synthetic: {
      CountInstance inst = spec.instance_path.empty()
                               ? synthetic_preset(spec.preset)
                               : read_instance(read_text_file(spec.instance_path));
      if (!spec.beta_min && !spec.beta_max && !spec.target_q) return inst;
      return rebound(inst, inst.beta_max());
    }
    case ModelKind::lowerbound:
      return build_lower_bound(spec.lb_N, spec.lb_m).expanded;
    case ModelKind::ising:
    case ModelKind::colorings:
    case ModelKind::matchings: {
      detail::require(!spec.graph_path.empty(), "graph models need --graph");
      std::ifstream in(spec.graph_path);
      if (!in) throw InvalidArgument("cannot open '" + spec.graph_path + "'");
      const GraphSpec g = read_edge_list(in, spec.vertices);
      if (spec.kind == ModelKind::ising) return rebound(enumerate_ising(g), 1.0);
      if (spec.kind == ModelKind::matchings) return rebound(enumerate_matchings(g), 1.0);
      const CountInstance col = enumerate_colorings(g, spec.kcolors);
      return rebound(col, coloring_beta_max(col));
    }
  }
  throw InvalidArgument("unhandled model kind");
}

struct ExperimentConfig {
  std::shared_ptr<const CountInstance> instance;
  double epsilon = 0.5;
  std::optional<EnergyCase> energy_case;  ///< detected from the support when unset
  ConfigOverrides overrides;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<Corruption> corruption;
  std::optional<std::uint64_t> boost_t;
  unsigned workers = 1;  ///< 0 = hardware concurrency
};

/// The estimator configuration an experiment runs with. Case I needs
/// n > 1; any larger bound is also valid for H in [1, n], so n is raised to
/// 2 when the instance declares n = 1.
inline EstimatorConfig resolve_estimator_config(const ExperimentConfig& cfg) {
  detail::require(cfg.instance != nullptr, "experiment has no instance");
  const EnergyCase c = cfg.energy_case.value_or(detect_case(*cfg.instance));
  double n = cfg.instance->n();
  if (c == EnergyCase::I) n = std::max(n, 2.0);
  return make_config(cfg.epsilon, n, c, cfg.overrides);
}

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;  ///< seed of the trial's mt19937_64 stream
  double q_true = 0.0;
  double q_hat = 0.0;
  bool success = false;
  std::uint64_t oracle_calls = 0;
  std::size_t schedule_len = 0;
  std::size_t tpa_points = 0;
  double schedule_delta = 0.0;
  bool delta_ok = false;  ///< schedule_delta <= ln(1 + gamma r eps~^2 / 2)
  double wall_time = 0.0;  ///< seconds
};

struct WilsonInterval {
  double lo, hi;
};

/// 95% Wilson score interval for a binomial proportion.
inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054) {
  if (n == 0) return {0.0, 1.0};
  const double p = double(successes) / double(n), nn = double(n);
  const double denom = 1.0 + z * z / nn;
  const double center = (p + z * z / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
  // The bounds at p = 0 and p = 1 are exactly 0 and 1; avoid rounding there.
  return {successes == 0 ? 0.0 : std::max(0.0, center - half),
          successes == n ? 1.0 : std::min(1.0, center + half)};
}

struct Summary {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double success_rate = 0.0;
  WilsonInterval wilson{0.0, 1.0};
  double mean_calls = 0.0;
  double sd_calls = 0.0;
  double predicted_calls = 0.0;  ///< m q (r + d) + 2r + k  (times t when boosted)
  double baseline_calls = 0.0;   ///< m q (r + d) + 2r + 1  (times t when boosted)
  double mean_schedule_len = 0.0;
  double expected_schedule_len = 0.0;  ///< m q + 1
  double mean_delta = 0.0;
  double delta_threshold = 0.0;
  double frac_delta_ok = 0.0;
};

struct ExperimentResult {
  EstimatorConfig estimator;
  double q_true = 0.0;
  std::optional<Corruption> corruption;
  std::uint64_t master_seed = 0;
  std::optional<std::uint64_t> boost_t;
  std::vector<TrialRecord> records;
  Summary summary;
};

inline Summary summarize(const std::vector<TrialRecord>& recs, const EstimatorConfig& est,
                         double q_true, std::uint64_t runs_per_trial) {
  Summary s;
  s.trials = recs.size();
  s.delta_threshold = est.delta_threshold();
  s.predicted_calls = double(runs_per_trial) * est.predicted_oracle_calls(q_true);
  s.baseline_calls = double(runs_per_trial) * est.baseline_oracle_calls(q_true);
  s.expected_schedule_len = est.m * q_true + 1.0;
  if (recs.empty()) return s;
  double sum = 0, sum2 = 0, len = 0, delta = 0;
  std::uint64_t ok = 0;
  for (const auto& r : recs) {
    s.successes += r.success;
    sum += double(r.oracle_calls);
    sum2 += double(r.oracle_calls) * double(r.oracle_calls);
    len += double(r.schedule_len);
    delta += r.schedule_delta;
    ok += r.delta_ok;
  }
  const double n = double(recs.size());
  s.success_rate = double(s.successes) / n;
  s.wilson = wilson_interval(s.successes, recs.size());
  s.mean_calls = sum / n;
  s.sd_calls = recs.size() > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / n) / (n - 1))) : 0.0;
  s.mean_schedule_len = len / n;
  s.mean_delta = delta / n;
  s.frac_delta_ok = double(ok) / n;
  return s;
}

/// Runs one trial on its own stream derived from (master_seed, trial).
inline TrialRecord run_trial(const ExperimentConfig& cfg, const EstimatorConfig& est,
                             double q_true, std::uint64_t trial) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = stream_seed(cfg.master_seed, trial);
  Rng rng(rec.seed);
  Oracle oracle(cfg.instance);
  if (cfg.corruption) oracle = oracle.with_corruption(cfg.corruption->tv_budget, cfg.corruption->mode);
  const EstimateResult res = cfg.boost_t ? median_boost(oracle, est, *cfg.boost_t, rng)
                                         : estimate(oracle, est, rng);
  rec.q_true = q_true;
  rec.q_hat = res.q_hat;
  rec.success = within_tolerance(res.q_hat, q_true, est.epsilon);
  rec.oracle_calls = res.oracle_calls;
  rec.schedule_len = res.schedule_len;
  rec.tpa_points = res.tpa_points;
  rec.schedule_delta = schedule_delta(*cfg.instance, Schedule(res.schedule)).delta;
  rec.delta_ok = rec.schedule_delta <= est.delta_threshold();
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// Runs all trials on a worker pool. Records depend only on the config and
/// master seed, never on scheduling.
inline ExperimentResult run_trials(const ExperimentConfig& cfg) {
  detail::require(cfg.trials >= 1, "trials must be >= 1");
  if (cfg.boost_t) detail::require(*cfg.boost_t % 2 == 1, "boost count must be odd");
  ExperimentResult out;
  out.estimator = resolve_estimator_config(cfg);
  out.q_true = log_ratio_true(*cfg.instance);
  out.corruption = cfg.corruption;
  out.master_seed = cfg.master_seed;
  out.boost_t = cfg.boost_t;
  out.records.resize(cfg.trials);
  unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
  workers = unsigned(std::min<std::uint64_t>(workers, cfg.trials));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    try {
      for (std::uint64_t i; !failed && (i = next.fetch_add(1)) < cfg.trials;)
        out.records[i] = run_trial(cfg, out.estimator, out.q_true, i);
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  out.summary = summarize(out.records, out.estimator, out.q_true, cfg.boost_t.value_or(1));
  return out;
}

// Output ----------------------------------------------------------------------

inline std::string config_json(const EstimatorConfig& c) {
  return "{\"epsilon\": " + format_double(c.epsilon) + ", \"gamma\": " + format_double(c.gamma) +
         ", \"rho\": " + format_double(c.rho) + ", \"d\": " + std::to_string(c.d) +
         ", \"m\": " + format_double(c.m) + ", \"k\": " + std::to_string(c.k) +
         ", \"r\": " + std::to_string(c.r) + ", \"lambda\": " + format_double(c.lambda) +
         ", \"case\": \"" + std::string(to_string(c.energy_case)) + "\"" +
         ", \"n\": " + format_double(c.n) + "}";
}

inline std::string record_json(const TrialRecord& r, const std::string& config, bool timing) {
  std::string s = "{\"trial\": " + std::to_string(r.trial) + ", \"seed\": " + std::to_string(r.seed) +
                  ", \"q_true\": " + format_double(r.q_true) + ", \"q_hat\": " + format_double(r.q_hat) +
                  ", \"success\": " + (r.success ? "true" : "false") +
                  ", \"oracle_calls\": " + std::to_string(r.oracle_calls) +
                  ", \"schedule_len\": " + std::to_string(r.schedule_len) +
                  ", \"tpa_points\": " + std::to_string(r.tpa_points) +
                  ", \"schedule_delta\": " + format_double(r.schedule_delta) +
                  ", \"delta_ok\": " + (r.delta_ok ? "true" : "false");
  if (timing) s += ", \"wall_time\": " + format_double(r.wall_time);
  return s + ", \"config\": " + config + "}";
}

inline std::string summary_json(const ExperimentResult& res) {
  const Summary& s = res.summary;
  std::string out = "{\"summary\": {\"trials\": " + std::to_string(s.trials) +
                    ", \"successes\": " + std::to_string(s.successes) +
                    ", \"success_rate\": " + format_double(s.success_rate) +
                    ", \"wilson95\": [" + format_double(s.wilson.lo) + ", " + format_double(s.wilson.hi) + "]" +
                    ", \"mean_oracle_calls\": " + format_double(s.mean_calls) +
                    ", \"sd_oracle_calls\": " + format_double(s.sd_calls) +
                    ", \"predicted_oracle_calls\": " + format_double(s.predicted_calls) +
                    ", \"baseline_oracle_calls\": " + format_double(s.baseline_calls) +
                    ", \"mean_schedule_len\": " + format_double(s.mean_schedule_len) +
                    ", \"expected_schedule_len\": " + format_double(s.expected_schedule_len) +
                    ", \"mean_schedule_delta\": " + format_double(s.mean_delta) +
                    ", \"delta_threshold\": " + format_double(s.delta_threshold) +
                    ", \"frac_delta_ok\": " + format_double(s.frac_delta_ok) +
                    ", \"q_true\": " + format_double(res.q_true) +
                    ", \"master_seed\": " + std::to_string(res.master_seed);
  if (res.corruption)
    out += ", \"tv_budget\": " + format_double(res.corruption->tv_budget) + ", \"corruption_mode\": \"" +
           std::string(to_string(res.corruption->mode)) + "\"";
  if (res.boost_t) out += ", \"boost\": " + std::to_string(*res.boost_t);
  return out + ", \"config\": " + config_json(res.estimator) + "}}";
}

/// One JSON record per line followed by a summary line.
inline std::string write_ndjson(const ExperimentResult& res, bool timing = false) {
  const std::string config = config_json(res.estimator);
  std::string out;
  for (const auto& r : res.records) out += record_json(r, config, timing) + "\n";
  return out + summary_json(res) + "\n";
}

/// Comma-separated rows; the summary follows as `#` comment lines.
inline std::string write_csv(const ExperimentResult& res, bool timing = false) {
  std::string out = "trial,seed,q_true,q_hat,success,oracle_calls,schedule_len,tpa_points,schedule_delta,delta_ok";
  out += timing ? ",wall_time\n" : "\n";
  for (const auto& r : res.records) {
    out += std::to_string(r.trial) + "," + std::to_string(r.seed) + "," + format_double(r.q_true) + "," +
           format_double(r.q_hat) + "," + (r.success ? "1" : "0") + "," + std::to_string(r.oracle_calls) +
           "," + std::to_string(r.schedule_len) + "," + std::to_string(r.tpa_points) + "," +
           format_double(r.schedule_delta) + "," + (r.delta_ok ? "1" : "0");
    if (timing) out += "," + format_double(r.wall_time);
    out += "\n";
  }
  return out + "# " + summary_json(res) + "\n";
}

}  // namespace gibbs
