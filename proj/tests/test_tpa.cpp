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

#include "gibbs/tpa.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gibbs/models.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/stats.hpp"

namespace gibbs {
namespace {

const CountInstance kSingleton({{1.0, 0.0}}, 0.0, 5.0);
const CountInstance kTwoLevel({{0.0, 0.0}, {1.0, 0.0}}, 0.0, std::log(3.0), 1.0);

TEST(TpaStep, ZeroEnergyJumpsToInfinity) {
  Oracle o(CountInstance({{0.0, 0.0}}, 0.0, 1.0));
  Rng rng(1);
  EXPECT_EQ(tpa_step(o, 0.0, rng), kInf);
  EXPECT_EQ(o.call_count(), 1u);
}

TEST(TpaStep, SingletonIsExponential) {
  Oracle o(kSingleton);
  Rng rng(2);
  std::vector<double> steps;
  for (int i = 0; i < 20000; ++i) steps.push_back(tpa_step(o, 0.0, rng));
  EXPECT_NEAR(stats::mean(steps), 1.0, 4.0 / std::sqrt(20000.0));
  for (double s : steps) EXPECT_GT(s, 0.0);
}

TEST(TpaRun, RejectsNegativeEnergies) {
  Oracle o(CountInstance({{-1.0, 0.0}, {1.0, 0.0}}, 0.0, 1.0));
  Rng rng(3);
  EXPECT_THROW(tpa_run(o, rng), InvalidArgument);
}

TEST(TpaRun, PointsIncreaseAndStayInRange) {
  const auto inst = enumerate_ising(GraphSpec::grid(3, 3), 0.0, 2.0);
  Oracle o(inst);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    o.reset_count();
    const auto pts = tpa_run(o, rng);
    EXPECT_EQ(o.call_count(), pts.size() + 1);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      EXPECT_GE(pts[j], inst.beta_min());
      EXPECT_LE(pts[j], inst.beta_max());
      if (j) {
        EXPECT_GT(pts[j], pts[j - 1]);
      }
    }
  }
}

TEST(TpaMulti, CallsAndValidation) {
  Oracle o(kSingleton);
  Rng rng(5);
  EXPECT_THROW(tpa_multi(o, 0, rng), InvalidArgument);
  const auto out = tpa_multi(o, 10, rng);
  EXPECT_EQ(out.runs, 10u);
  EXPECT_EQ(o.call_count(), out.points.size() + 10);
}

TEST(TpaMulti, PoissonCount) {
  Oracle o(kSingleton);
  Rng rng = make_stream(8, 0);
  std::vector<double> counts;
  for (int i = 0; i < 2000; ++i) counts.push_back(double(tpa_multi(o, 10, rng).points.size()));
  const double mu = stats::mean(counts);
  EXPECT_NEAR(mu, 50.0, 3.0 * std::sqrt(50.0 / 2000.0));
  const double ratio = stats::variance(counts) / mu;
  EXPECT_GE(ratio, 0.9);
  EXPECT_LE(ratio, 1.1);
}

// Under z, TPA(k) points form a rate-k Poisson process: gaps are Exp(k).
TEST(TpaMulti, GapsInLogPartitionAreExponential) {
  const auto inst = enumerate_ising(GraphSpec::cycle(6), 0.0, 1.5);
  Oracle o(inst);
  Rng rng = make_stream(8, 1);
  std::vector<double> zs;
  for (int rep = 0; rep < 400; ++rep)
    for (double b : tpa_multi(o, 4, rng).points) zs.push_back(log_partition(inst, b));
  std::sort(zs.begin(), zs.end());
  // Pooled points across reps form a rate-(4 * 400) process on the z range.
  const double q = log_ratio_true(inst);
  EXPECT_NEAR(double(zs.size()), 1600.0 * q, 4.0 * std::sqrt(1600.0 * q));
  // Uniformity of pooled z positions on [z(b_max), z(b_min)] checks the shape.
  const double z_lo = log_partition(inst, inst.beta_max());
  std::vector<double> unif;
  for (double z : zs) unif.push_back((z - z_lo) / q);
  Rng ur(12);
  std::vector<double> ref;
  for (std::size_t i = 0; i < unif.size(); ++i) ref.push_back(uniform_unit(ur));
  EXPECT_LT(stats::ks_statistic(unif, ref), stats::ks_critical(unif.size(), ref.size(), 1e-3));
}

TEST(ThinPoints, KeepsEveryDthFromRandomOffset) {
  std::vector<double> pts;
  for (int i = 1; i <= 20; ++i) pts.push_back(i * 0.1);
  Rng rng(6);
  for (int rep = 0; rep < 50; ++rep) {
    const Schedule s = thin_points(pts, 4, 0.0, 2.5, rng);
    EXPECT_EQ(s.front(), 0.0);
    EXPECT_EQ(s.back(), 2.5);
    EXPECT_EQ(s.length(), 6u);  // 5 kept points for any offset in 1..4
    const double gap = s[2] - s[1];
    EXPECT_NEAR(gap, 0.4, 1e-12);
  }
}

TEST(ThinPoints, OffsetIsUniform) {
  std::vector<double> pts{0.1, 0.2, 0.3};
  Rng rng(7);
  std::array<int, 3> seen{};
  for (int rep = 0; rep < 3000; ++rep) {
    const Schedule s = thin_points(pts, 3, 0.0, 1.0, rng);
    ASSERT_EQ(s.length(), 2u);
    seen[std::size_t(std::lround(s[1] * 10.0)) - 1]++;
  }
  for (int c : seen) EXPECT_NEAR(c, 1000, 4 * std::sqrt(3000 * (1.0 / 3) * (2.0 / 3)));
}

TEST(ThinPoints, HandlesEmptyAndTiesAndStrideErrors) {
  Rng rng(8);
  const Schedule empty = thin_points({}, 5, 0.0, 1.0, rng);
  EXPECT_EQ(empty.length(), 1u);
  const Schedule ties = thin_points({0.5, 0.5, 0.5, 1.0, 0.0}, 1, 0.0, 1.0, rng);
  EXPECT_EQ(ties.betas(), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_THROW(thin_points({0.5}, 0, 0.0, 1.0, rng), InvalidArgument);
}

TEST(GenerateSchedule, ExpectedLength) {
  const auto inst = two_level_instance(10.0, 8.0);
  Oracle o(inst);
  Rng rng = make_stream(9, 0);
  std::vector<double> lens;
  const std::uint64_t k = 640, d = 64;
  for (int i = 0; i < 300; ++i) lens.push_back(double(generate_schedule(o, k, d, rng).length()));
  // E[l] = (k / d) q + 1 = 81, Var ~ (k / d) q / ... bounded by the Poisson count.
  EXPECT_NEAR(stats::mean(lens), 81.0, 4.0 * std::sqrt(81.0 / 300.0));
}

TEST(PppReference, MeanCountAndValidation) {
  Rng rng(10);
  std::vector<double> counts;
  for (int i = 0; i < 4000; ++i) counts.push_back(double(ppp_reference(2.0, 3, rng).size()));
  EXPECT_NEAR(stats::mean(counts), 6.0, 4.0 * std::sqrt(6.0 / 4000.0));
  EXPECT_THROW(ppp_reference(0.0, 1, rng), InvalidArgument);
  EXPECT_THROW(ppp_reference(1.0, 0, rng), InvalidArgument);
}

}  // namespace
}  // namespace gibbs
