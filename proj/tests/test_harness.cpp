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

#include "gibbs/harness.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "gibbs/suites.hpp"

namespace gibbs {
namespace {

ExperimentConfig preset_config(const std::string& preset, std::uint64_t trials, std::uint64_t seed) {
  ModelSpec spec;
  spec.preset = preset;
  ExperimentConfig cfg;
  cfg.instance = std::make_shared<const CountInstance>(build_model(spec));
  cfg.trials = trials;
  cfg.master_seed = seed;
  return cfg;
}

TEST(ModelSpec, Presets) {
  EXPECT_EQ(log_ratio_true(synthetic_preset("singleton")), 5.0);
  EXPECT_NEAR(log_ratio_true(synthetic_preset("twolevel")), std::log(1.5), 1e-15);
  EXPECT_NEAR(log_ratio_true(synthetic_preset("twolevel-q8")), 8.0, 1e-12);
  EXPECT_THROW(synthetic_preset("nope"), InvalidArgument);
  EXPECT_THROW(parse_model_kind("potts"), InvalidArgument);
}

TEST(ModelSpec, GraphModelsFromFile) {
  const std::string path = ::testing::TempDir() + "c4.edges";
  {
    std::ofstream f(path);
    f << "0 1\n1 2\n2 3\n3 0\n";
  }
  ModelSpec spec;
  spec.kind = ModelKind::ising;
  spec.graph_path = path;
  spec.beta_max = 2.0;
  const auto ising = build_model(spec);
  EXPECT_NEAR(log_ratio_true(ising), 1.9748749747516305, 1e-13);
  spec.kind = ModelKind::colorings;
  spec.beta_max.reset();
  const auto col = build_model(spec);
  EXPECT_NEAR(std::exp(log_partition(col, col.beta_max()) - std::log(18.0)), 1.0, 1.1e-3);
  spec.kind = ModelKind::matchings;
  spec.target_q = 1.0;
  EXPECT_NEAR(log_ratio_true(build_model(spec)), 1.0, 1e-12);
  spec.graph_path = path + ".missing";
  EXPECT_THROW(build_model(spec), InvalidArgument);
  std::remove(path.c_str());
}

TEST(ModelSpec, InstanceFileRoundTrip) {
  const std::string path = ::testing::TempDir() + "inst.json";
  const auto inst = synthetic_preset("twolevel-q8");
  {
    std::ofstream f(path);
    f << write_instance(inst);
  }
  ModelSpec spec;
  spec.instance_path = path;
  EXPECT_EQ(build_model(spec), inst);
  std::remove(path.c_str());
}

TEST(ResolveConfig, CaseSelection) {
  auto cfg = preset_config("singleton", 1, 0);
  const auto est = resolve_estimator_config(cfg);
  EXPECT_EQ(est.energy_case, EnergyCase::I);
  EXPECT_EQ(est.n, 2.0);
  cfg.energy_case = EnergyCase::II;
  EXPECT_EQ(resolve_estimator_config(cfg).energy_case, EnergyCase::II);
  EXPECT_EQ(resolve_estimator_config(preset_config("twolevel", 1, 0)).energy_case, EnergyCase::II);
}

TEST(RunTrials, SingletonAlwaysSucceeds) {
  const auto res = run_trials(preset_config("singleton", 20, 3));
  EXPECT_EQ(res.summary.success_rate, 1.0);
  for (const auto& r : res.records) EXPECT_NEAR(r.q_hat, 5.0, 1e-9);
}

TEST(RunTrials, ByteIdenticalAcrossRunsAndWorkerCounts) {
  auto cfg = preset_config("twolevel", 12, 42);
  const std::string a = write_ndjson(run_trials(cfg));
  const std::string b = write_ndjson(run_trials(cfg));
  cfg.workers = 3;
  const std::string c = write_ndjson(run_trials(cfg));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  cfg.master_seed = 43;
  EXPECT_NE(a, write_ndjson(run_trials(cfg)));
}

TEST(RunTrials, RecordsAreConsistent) {
  auto cfg = preset_config("twolevel-q8", 10, 5);
  const auto res = run_trials(cfg);
  const auto& est = res.estimator;
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const auto& r = res.records[i];
    EXPECT_EQ(r.trial, i);
    EXPECT_EQ(r.seed, stream_seed(5, i));
    EXPECT_EQ(r.success, within_tolerance(r.q_hat, r.q_true, est.epsilon));
    EXPECT_EQ(r.delta_ok, r.schedule_delta <= est.delta_threshold());
    EXPECT_EQ(r.oracle_calls, r.tpa_points + est.k + (r.schedule_len + 1) * est.r);
  }
  EXPECT_LE(res.summary.wilson.lo, res.summary.success_rate);
  EXPECT_GE(res.summary.wilson.hi, res.summary.success_rate);
}

TEST(RunTrials, CorruptionAndBoostAreApplied) {
  auto cfg = preset_config("twolevel", 4, 6);
  cfg.boost_t = 3;
  const auto boosted = run_trials(cfg);
  EXPECT_NEAR(boosted.summary.mean_calls, boosted.summary.predicted_calls,
              0.2 * boosted.summary.predicted_calls);
  cfg.boost_t = 2;
  EXPECT_THROW(run_trials(cfg), InvalidArgument);
  cfg.boost_t.reset();
  cfg.corruption = Corruption{0.3, CorruptionMode::adversarial_max_h};
  const auto corrupted = write_ndjson(run_trials(cfg));
  EXPECT_NE(corrupted.find("\"corruption_mode\": \"adversarial_max_h\""), std::string::npos);
  cfg.trials = 0;
  EXPECT_THROW(run_trials(cfg), InvalidArgument);
}

TEST(Output, CsvAndTimingFlag) {
  const auto res = run_trials(preset_config("singleton", 3, 1));
  const std::string csv = write_csv(res);
  EXPECT_EQ(csv.rfind("trial,seed,q_true,q_hat,success", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(write_ndjson(res).find("wall_time"), std::string::npos);
  EXPECT_NE(write_ndjson(res, true).find("wall_time"), std::string::npos);
  // Every ndjson line parses as JSON.
  std::istringstream in(write_ndjson(res));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    nlohmann::json j;
    EXPECT_NO_THROW(j = nlohmann::json::parse(line));
    ++lines;
  }
  EXPECT_EQ(lines, 4);
}

TEST(Wilson, KnownValues) {
  const auto w = wilson_interval(8, 10);
  EXPECT_NEAR(w.lo, 0.49016247153664183, 1e-12);
  EXPECT_NEAR(w.hi, 0.9433178485456247, 1e-12);
  const auto all = wilson_interval(10, 10);
  EXPECT_EQ(all.hi, 1.0);
  EXPECT_GT(all.lo, 0.69);
}

TEST(Suites, AllPassWithPinnedSeeds) {
  for (const char* name : {"tau_table", "distribution", "accounting", "hardness"}) {
    const auto rep = run_suite(name);
    EXPECT_TRUE(rep.pass()) << format_report(rep);
    EXPECT_FALSE(rep.checks.empty());
  }
  EXPECT_THROW(run_suite("all"), InvalidArgument);
}

}  // namespace
}  // namespace gibbs
