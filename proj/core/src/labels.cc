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

#include "lstext/labels.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "lstext/error.h"

namespace lstext {

LabelDistribution::LabelDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw InvalidInputError("label distribution needs at least 2 classes, got " +
                            std::to_string(probs_.size()));
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidInputError("label distribution entries must be finite and >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidInputError("label distribution sums to " + std::to_string(sum) + ", not 1");
  }
}

std::string_view to_string(SmoothingLevel level) {
  switch (level) {
    case SmoothingLevel::Baseline: return "Baseline";
    case SmoothingLevel::LS1: return "LS1";
    case SmoothingLevel::LS2: return "LS2";
    case SmoothingLevel::LS3: return "LS3";
    case SmoothingLevel::LS4: return "LS4";
    case SmoothingLevel::LS5: return "LS5";
    case SmoothingLevel::Custom: return "Custom";
  }
  return "?";
}

SmoothingLevel parse_smoothing_level(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "baseline") return SmoothingLevel::Baseline;
  if (lower == "ls1") return SmoothingLevel::LS1;
  if (lower == "ls2") return SmoothingLevel::LS2;
  if (lower == "ls3") return SmoothingLevel::LS3;
  if (lower == "ls4") return SmoothingLevel::LS4;
  if (lower == "ls5") return SmoothingLevel::LS5;
  throw ConfigError("unknown smoothing level '" + std::string(name) +
                    "' (expected Baseline or LS1..LS5)");
}

double level_to_lambda(SmoothingLevel level, std::size_t k) {
  if (level == SmoothingLevel::Baseline || level == SmoothingLevel::LS1) return 0.0;
  if (level == SmoothingLevel::Custom) {
    throw ConfigError("level_to_lambda: Custom level has no tabulated lambda");
  }
  const int idx = static_cast<int>(level) - static_cast<int>(SmoothingLevel::LS2);
  static constexpr double kThreeClass[] = {0.01, 0.025, 0.05, 0.1};
  static constexpr double kTwoClass[] = {0.01, 0.05, 0.1, 0.15};
  if (k == 3) return kThreeClass[idx];
  if (k == 2) return kTwoClass[idx];
  throw ConfigError(std::string(to_string(level)) + " is only defined for 2 or 3 classes (got " +
                    std::to_string(k) + "); set an explicit lambda (smooth.lambda) instead");
}

SmoothingSpec::SmoothingSpec(SmoothingLevel level, std::size_t k)
    : level_(level), k_(k), lambda_(level_to_lambda(level, k)) {
  if (k < 2) throw ConfigError("smoothing needs k >= 2");
}

SmoothingSpec SmoothingSpec::explicit_lambda(double lambda, std::size_t k) {
  if (k < 2) throw ConfigError("smoothing needs k >= 2");
  const double kd = static_cast<double>(k);
  if (!(lambda >= 0.0) || !(1.0 - kd * lambda > lambda)) {
    throw ConfigError("explicit lambda " + std::to_string(lambda) +
                      " must satisfy 0 <= lambda < 1/(k+1) for k=" + std::to_string(k));
  }
  return SmoothingSpec(SmoothingLevel::Custom, k, lambda);
}

LabelDistribution one_hot(std::size_t index, std::size_t k) {
  if (index >= k) {
    throw RangeError("one_hot: class index " + std::to_string(index) + " out of range for k=" +
                     std::to_string(k));
  }
  std::vector<double> p(k, 0.0);
  p[index] = 1.0;
  return LabelDistribution(std::move(p));
}

LabelDistribution smooth(const LabelDistribution& d, double lambda) {
  const double kd = static_cast<double>(d.k());
  if (!(lambda >= 0.0) || !(lambda * kd < 1.0)) {
    throw ConfigError("smooth: lambda " + std::to_string(lambda) + " must lie in [0, 1/" +
                      std::to_string(d.k()) + ")");
  }
  const double keep = 1.0 - kd * lambda;
  std::vector<double> out(d.k());
  for (std::size_t i = 0; i < d.k(); ++i) out[i] = d[i] * keep + lambda;
  return LabelDistribution(std::move(out));
}

std::size_t argmax_label(std::span<const double> probs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

}  // namespace lstext
