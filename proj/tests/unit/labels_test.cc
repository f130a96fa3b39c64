// Copyright 2026 The lstext Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "lstext/error.h"
#include "lstext/labels.h"
#include "test_util.h"

namespace lstext {
namespace {

TEST(OneHotTest, Examples) {
  EXPECT_EQ(one_hot(1, 3), LabelDistribution({0, 1, 0}));
  EXPECT_EQ(one_hot(0, 2), LabelDistribution({1, 0}));
  EXPECT_EQ(one_hot(4, 5), LabelDistribution({0, 0, 0, 0, 1}));
}

TEST(OneHotTest, OutOfRange) { EXPECT_THROW(one_hot(3, 3), RangeError); }

TEST(LabelDistributionTest, RejectsInvalidVectors) {
  EXPECT_THROW(LabelDistribution({1.0}), InvalidInputError);
  EXPECT_THROW(LabelDistribution({0.5, 0.6}), InvalidInputError);
  EXPECT_THROW(LabelDistribution({1.5, -0.5}), InvalidInputError);
}

TEST(SmoothTest, ThreeClassLevels) {
  const auto d = one_hot(1, 3);
  const auto ls2 = smooth(d, 0.01);
  EXPECT_DOUBLE_EQ(ls2[0], 0.01);
  EXPECT_DOUBLE_EQ(ls2[1], 0.98);
  EXPECT_DOUBLE_EQ(ls2[2], 0.01);
  const auto ls5 = smooth(d, 0.1);
  EXPECT_NEAR(ls5[0], 0.1, 1e-15);
  EXPECT_NEAR(ls5[1], 0.8, 1e-15);
  EXPECT_NEAR(ls5[2], 0.1, 1e-15);
}

TEST(SmoothTest, TwoClassLS5) {
  const auto s = smooth(one_hot(0, 2), 0.15);
  EXPECT_DOUBLE_EQ(s[0], 0.85);
  EXPECT_DOUBLE_EQ(s[1], 0.15);
}

TEST(SmoothTest, ZeroLambdaIsIdentity) {
  Rng rng(1);
  const LabelDistribution d(testing::random_simplex(4, rng));
  EXPECT_EQ(smooth(d, 0.0), d);
}

TEST(SmoothTest, RejectsLambdaAtOrAboveUniform) {
  EXPECT_THROW(smooth(one_hot(0, 3), 1.0 / 3.0), ConfigError);
  EXPECT_THROW(smooth(one_hot(0, 2), 0.6), ConfigError);
  EXPECT_THROW(smooth(one_hot(0, 2), -0.1), ConfigError);
}

TEST(LevelToLambdaTest, TabulatedValues) {
  EXPECT_EQ(level_to_lambda(SmoothingLevel::LS3, 3), 0.025);
  EXPECT_EQ(level_to_lambda(SmoothingLevel::LS4, 2), 0.1);
  EXPECT_EQ(level_to_lambda(SmoothingLevel::LS1, 3), 0.0);
  EXPECT_EQ(level_to_lambda(SmoothingLevel::Baseline, 7), 0.0);
  const double three[] = {0.01, 0.025, 0.05, 0.1};
  const double two[] = {0.01, 0.05, 0.1, 0.15};
  const SmoothingLevel named[] = {SmoothingLevel::LS2, SmoothingLevel::LS3, SmoothingLevel::LS4,
                                  SmoothingLevel::LS5};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(level_to_lambda(named[i], 3), three[i]);
    EXPECT_EQ(level_to_lambda(named[i], 2), two[i]);
  }
}

TEST(LevelToLambdaTest, UnsupportedClassCountAsksForExplicitLambda) {
  try {
    level_to_lambda(SmoothingLevel::LS2, 5);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("explicit lambda"), std::string::npos);
  }
}

TEST(SmoothingSpecTest, ResolvesAndKeepsTargetDominant) {
  const SmoothingSpec s(SmoothingLevel::LS5, 2);
  EXPECT_EQ(s.lambda(), 0.15);
  EXPECT_GT(1.0 - 2 * s.lambda(), s.lambda());
  EXPECT_EQ(SmoothingSpec(SmoothingLevel::LS1, 3).lambda(), 0.0);
  EXPECT_EQ(SmoothingSpec::explicit_lambda(0.05, 5).lambda(), 0.05);
  EXPECT_THROW(SmoothingSpec::explicit_lambda(0.2, 5), ConfigError);
}

TEST(SmoothingLevelTest, ParsesNames) {
  EXPECT_EQ(parse_smoothing_level("baseline"), SmoothingLevel::Baseline);
  EXPECT_EQ(parse_smoothing_level("LS4"), SmoothingLevel::LS4);
  EXPECT_THROW(parse_smoothing_level("LS6"), ConfigError);
}

TEST(ArgmaxTest, Examples) {
  EXPECT_EQ(argmax_label(LabelDistribution({0.01, 0.98, 0.01})), 1u);
  EXPECT_EQ(argmax_label(LabelDistribution({0.5, 0.5})), 0u);
}

TEST(ArgmaxTest, MatchesLinearScanOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + rng.below(8);
    const auto p = testing::random_simplex(k, rng);
    std::size_t oracle = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < k; ++i)
      if (p[i] > best) best = p[i], oracle = i;
    EXPECT_EQ(argmax_label(LabelDistribution(p)), oracle);
  }
}

TEST(SmoothPropertyTest, NormalizationClosure) {
  Rng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 2 + rng.below(6);
    const LabelDistribution d(testing::random_simplex(k, rng));
    const double lambda = rng.uniform(0.0, 1.0 / static_cast<double>(k)) * 0.999;
    const auto s = smooth(d, lambda);
    double sum = 0.0;
    for (double x : s.probs()) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(SmoothPropertyTest, ArgmaxInvariantForOneHot) {
  Rng rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 2 + rng.below(6);
    const std::size_t c = rng.below(k);
    const double lambda = rng.uniform(0.0, 1.0 / static_cast<double>(k)) * 0.999;
    EXPECT_EQ(argmax_label(smooth(one_hot(c, k), lambda)), c);
  }
}

TEST(SmoothPropertyTest, AffineInTheDistribution) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + rng.below(6);
    const auto p1 = testing::random_simplex(k, rng);
    const auto p2 = testing::random_simplex(k, rng);
    const double alpha = rng.uniform();
    const double lambda = rng.uniform(0.0, 1.0 / static_cast<double>(k)) * 0.999;
    std::vector<double> mix(k);
    for (std::size_t i = 0; i < k; ++i) mix[i] = alpha * p1[i] + (1 - alpha) * p2[i];
    const auto lhs = smooth(LabelDistribution(mix), lambda);
    const auto s1 = smooth(LabelDistribution(p1), lambda);
    const auto s2 = smooth(LabelDistribution(p2), lambda);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_NEAR(lhs[i], alpha * s1[i] + (1 - alpha) * s2[i], 1e-12);
    }
  }
}

}  // namespace
}  // namespace lstext
