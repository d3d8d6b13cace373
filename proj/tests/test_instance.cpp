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

#include "gibbs/instance.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "gibbs/models.hpp"

namespace gibbs {
namespace {

// Ising on the 4-cycle: {0: 2, 2: 12, 4: 2}. Reference values from
// tests/oracles/compute_oracles.py.
CountInstance ising_c4(double bmin = 0.0, double bmax = 2.0) {
  const std::vector<std::pair<double, double>> c{{0, 2}, {2, 12}, {4, 2}};
  return CountInstance::from_counts(c, bmin, bmax, 4.0);
}

CountInstance two_level() { return CountInstance({{0.0, 0.0}, {1.0, 0.0}}, 0.0, std::log(3.0), 1.0); }

TEST(CountInstance, RejectsInvalidInput) {
  EXPECT_THROW(CountInstance({}, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(CountInstance({{1.0, 0.0}}, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(CountInstance({{1.0, 0.0}}, 2.0, 1.0), InvalidArgument);
  EXPECT_THROW(CountInstance({{1.0, 0.0}}, 0.0, INFINITY), InvalidArgument);
  EXPECT_THROW(CountInstance({{1.0, -INFINITY}}, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(CountInstance({{NAN, 0.0}}, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(CountInstance({{3.0, 0.0}}, 0.0, 1.0, 2.0), InvalidArgument);
  const std::vector<std::pair<double, double>> zero{{1.0, 0.0}};
  EXPECT_THROW(CountInstance::from_counts(zero, 0.0, 1.0), InvalidArgument);
}

TEST(CountInstance, SortsAndMergesDuplicates) {
  CountInstance inst({{2.0, std::log(3.0)}, {0.0, 0.0}, {2.0, std::log(5.0)}}, 0.0, 1.0);
  ASSERT_EQ(inst.size(), 2u);
  EXPECT_EQ(inst.support()[0].h, 0.0);
  EXPECT_NEAR(inst.support()[1].log_c, std::log(8.0), 1e-15);
  EXPECT_EQ(inst.n(), 2.0);
  EXPECT_TRUE(inst.has_zero_level());
}

TEST(CountInstance, DefaultNAtLeastOne) {
  CountInstance inst({{0.0, 0.0}}, 0.0, 1.0);
  EXPECT_EQ(inst.n(), 1.0);
}

TEST(CountInstance, EnergyRange) {
  EXPECT_TRUE(ising_c4().in_energy_range());
  CountInstance half({{0.5, 0.0}, {1.0, 0.0}}, 0.0, 1.0);
  EXPECT_FALSE(half.in_energy_range());
}

TEST(LogPartition, IsingCycleReference) {
  const auto inst = ising_c4();
  EXPECT_NEAR(log_partition(inst, 0.7), 1.6254655198789205, 1e-13);
  EXPECT_NEAR(mean_energy(inst, 0.7), 1.2605944325069554, 1e-13);
  EXPECT_NEAR(log_ratio_true(inst), 1.9748749747516305, 1e-13);
  EXPECT_NEAR(log_partition(inst, 0.0), std::log(16.0), 1e-15);
}

TEST(LogPartition, SingletonIsExact) {
  CountInstance s({{1.0, 0.0}}, 0.0, 5.0);
  EXPECT_EQ(log_ratio_true(s), 5.0);
  EXPECT_EQ(energy_variance(s, 1.3), 0.0);
}

TEST(LogPartition, StableForLargeBeta) {
  const auto inst = ising_c4(0.0, 1e4);
  EXPECT_NEAR(log_partition(inst, 1e4), std::log(2.0), 1e-12);
  EXPECT_NEAR(log_partition(inst, -1e4), std::log(2.0) + 4e4, 1e-9);
}

TEST(Derivatives, MeanAndVarianceMatchFiniteDifferences) {
  const auto inst = ising_c4();
  for (double b : {-1.0, 0.0, 0.3, 0.7, 1.5}) {
    const double h = 1e-4;
    const double d1 = (log_partition(inst, b + h) - log_partition(inst, b - h)) / (2 * h);
    const double d2 = (log_partition(inst, b + h) - 2 * log_partition(inst, b) +
                       log_partition(inst, b - h)) / (h * h);
    EXPECT_NEAR(mean_energy(inst, b), -d1, 1e-7);
    EXPECT_NEAR(energy_variance(inst, b), d2, 1e-5);
  }
}

TEST(Schedule, Validation) {
  EXPECT_THROW(Schedule({0.0}), InvalidArgument);
  EXPECT_THROW(Schedule({0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(Schedule({0.0, 1.0, 0.5}), InvalidArgument);
  EXPECT_THROW(Schedule({0.0, NAN}), InvalidArgument);
  Schedule s({0.0, 0.5, 2.0});
  EXPECT_EQ(s.length(), 2u);
  EXPECT_TRUE(s.matches(ising_c4()));
  EXPECT_FALSE(Schedule({0.0, 1.0}).matches(ising_c4()));
  EXPECT_THROW(schedule_delta(ising_c4(), Schedule({0.0, 1.0})), InvalidArgument);
}

TEST(ScheduleDelta, TwoLevelReference) {
  const auto inst = two_level();
  const auto rep = schedule_delta(inst, Schedule({0.0, std::log(3.0)}));
  EXPECT_NEAR(rep.delta, 0.069336464195073916, 1e-14);
  ASSERT_EQ(rep.per_interval.size(), 1u);
}

TEST(ScheduleDelta, NonNegativeAndAdditive) {
  const auto inst = ising_c4();
  Schedule s({0.0, 0.2, 0.9, 1.1, 2.0});
  const auto rep = schedule_delta(inst, s);
  double sum = 0.0;
  for (double d : rep.per_interval) {
    EXPECT_GE(d, 0.0);
    sum += d;
  }
  EXPECT_NEAR(sum, rep.delta, 1e-15);
}

// Property: convexity of z makes every interval's delta non-negative, and
// inserting the midpoint of any interval never increases delta.
TEST(ScheduleDelta, MidpointRefinementDecreases) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto grid = enumerate_ising(GraphSpec::grid(3, 3), 0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> b{0.0};
    const int inner = 1 + trial % 6;
    std::vector<double> cuts;
    for (int i = 0; i < inner; ++i) cuts.push_back(3.0 * u(rng));
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts)
      if (c > b.back() && c < 3.0) b.push_back(c);
    b.push_back(3.0);
    const Schedule s(b);
    const double before = schedule_delta(grid, s).delta;
    const std::size_t at = std::size_t(trial) % s.length();
    auto refined = b;
    refined.insert(refined.begin() + long(at) + 1, 0.5 * (b[at] + b[at + 1]));
    const double after = schedule_delta(grid, Schedule(refined)).delta;
    EXPECT_GE(before, 0.0);
    EXPECT_LE(after, before + 1e-12);
  }
}

TEST(PairedMoments, TwoLevelClosedForms) {
  const auto inst = two_level();
  const auto pm = paired_moments(inst, 0.0, std::log(3.0));
  EXPECT_NEAR(pm.log_ev - pm.log_ew, std::log(1.5), 1e-12);
  EXPECT_NEAR(pm.log_vrel, 0.069336464195073916, 1e-14);
  EXPECT_THROW(paired_moments(inst, 1.0, 1.0), InvalidArgument);
}

TEST(PairedMoments, TelescopesToQ) {
  const auto inst = ising_c4();
  Schedule s({0.0, 0.4, 1.0, 2.0});
  double sum = 0.0;
  for (std::size_t i = 0; i < s.length(); ++i) {
    const auto pm = paired_moments(inst, s[i], s[i + 1]);
    sum += pm.log_ev - pm.log_ew;
  }
  EXPECT_NEAR(sum, log_ratio_true(inst), 1e-13);
}

}  // namespace
}  // namespace gibbs
