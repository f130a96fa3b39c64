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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lstext {

// Probability vector over k >= 2 classes. Construction validates
// non-negativity and normalization (|sum - 1| <= 1e-9).
class LabelDistribution {
 public:
  explicit LabelDistribution(std::vector<double> probs);

  std::size_t k() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;

 private:
  std::vector<double> probs_;
};

// Smoothing intensities. Baseline and LS1 both leave labels unchanged; they
// differ in the training objective (cross-entropy vs KL). Custom carries an
// explicit lambda for class counts without a named table entry.
enum class SmoothingLevel { Baseline, LS1, LS2, LS3, LS4, LS5, Custom };

std::string_view to_string(SmoothingLevel level);
// Accepts "Baseline", "LS1".."LS5" (case-insensitive).
SmoothingLevel parse_smoothing_level(std::string_view name);

// A smoothing level resolved to lambda for a given class count.
class SmoothingSpec {
 public:
  // Named level; resolves lambda through level_to_lambda.
  SmoothingSpec(SmoothingLevel level, std::size_t k);
  // Explicit lambda (level Custom). Requires 0 <= lambda < 1/(k+1) so the
  // target class stays strictly dominant.
  static SmoothingSpec explicit_lambda(double lambda, std::size_t k);

  SmoothingLevel level() const { return level_; }
  std::size_t k() const { return k_; }
  double lambda() const { return lambda_; }

 private:
  SmoothingSpec(SmoothingLevel level, std::size_t k, double lambda)
      : level_(level), k_(k), lambda_(lambda) {}

  SmoothingLevel level_;
  std::size_t k_;
  double lambda_;
};

LabelDistribution one_hot(std::size_t index, std::size_t k);

// (1 - k*lambda) * d + lambda, entrywise.
LabelDistribution smooth(const LabelDistribution& d, double lambda);

// Named levels are tabulated for k = 2 and k = 3 only:
//   k = 3: LS2 0.01, LS3 0.025, LS4 0.05, LS5 0.1
//   k = 2: LS2 0.01, LS3 0.05,  LS4 0.1,  LS5 0.15
// Baseline and LS1 map to 0 for any k.
double level_to_lambda(SmoothingLevel level, std::size_t k);

// Index of the largest entry; ties go to the lowest index.
std::size_t argmax_label(std::span<const double> probs);
inline std::size_t argmax_label(const LabelDistribution& d) { return argmax_label(d.probs()); }

}  // namespace lstext
