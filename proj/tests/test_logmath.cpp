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

#include "gibbs/logmath.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace gibbs {
namespace {

TEST(LogAddExp, MatchesDirectSum) {
  EXPECT_NEAR(log_add_exp(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
  EXPECT_DOUBLE_EQ(log_add_exp(1.0, kNegInf), 1.0);
  EXPECT_DOUBLE_EQ(log_add_exp(kNegInf, -4.0), -4.0);
  EXPECT_EQ(log_add_exp(kNegInf, kNegInf), kNegInf);
}

TEST(LogAddExp, NoOverflowAtLargeArguments) {
  const double x = log_add_exp(1000.0, 1000.0);
  EXPECT_NEAR(x, 1000.0 + std::log(2.0), 1e-12);
}

TEST(LogSumExp, EmptyIsNegInf) {
  std::vector<double> xs;
  EXPECT_EQ(log_sum_exp<double>(xs), kNegInf);
}

TEST(LogSumExp, ShiftInvariance) {
  std::vector<double> xs{-800.0, -801.0, -799.5};
  std::vector<double> ys{0.0, -1.0, 0.5};
  EXPECT_NEAR(log_sum_exp<double>(xs), log_sum_exp<double>(ys) - 800.0, 1e-12);
  EXPECT_TRUE(std::isfinite(log_sum_exp<double>(xs)));
}

TEST(LogSumExp, AllNegInf) {
  std::vector<double> xs{kNegInf, kNegInf};
  EXPECT_EQ(log_sum_exp<double>(xs), kNegInf);
}

TEST(LogMeanExp, ConstantInput) {
  std::vector<double> xs(7, -3.25);
  EXPECT_NEAR(log_mean_exp<double>(xs), -3.25, 1e-15);
}

TEST(LogSumExp, LongDouble) {
  std::vector<long double> xs{1.0L, 2.0L, 3.0L};
  const long double direct = std::log(std::exp(1.0L) + std::exp(2.0L) + std::exp(3.0L));
  EXPECT_NEAR(double(log_sum_exp<long double>(xs)), double(direct), 1e-15);
}

}  // namespace
}  // namespace gibbs
