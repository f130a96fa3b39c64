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
#include <span>
#include <string_view>
#include <vector>

#include "lstext/labels.h"

namespace lstext {

// All losses are in nats. Predicted probabilities are floored at kLogFloor
// inside the logarithm only; they are not renormalized.
inline constexpr double kLogFloor = 1e-12;

enum class LossKind { CrossEntropy, KL, MultiLabelCE };

std::string_view to_string(LossKind kind);

struct LossValue {
  double value = 0.0;
  LossKind kind = LossKind::CrossEntropy;
};

// -sum p ln p, with 0 ln 0 = 0.
double entropy(const LabelDistribution& p);

// -sum p ln q. Throws InfiniteLossError if q is zero where p has mass.
double cross_entropy(const LabelDistribution& p, const LabelDistribution& q);

// sum p ln(p / q).
double kl_divergence(const LabelDistribution& p, const LabelDistribution& q);

// -(1/|Y|) sum_{y in Y} ln q_y. Throws InvalidInputError for an empty set.
double multi_label_cross_entropy(std::span<const std::size_t> labelset,
                                 const LabelDistribution& q);

struct LossAndGrad {
  LossValue loss;
  std::vector<double> grad;  // d loss / d logits
};

// Fused softmax + loss. The gradient with respect to the logits is
// softmax(logits) - target for both CrossEntropy and KL; the two losses
// differ by H(target), which does not depend on the logits.
LossAndGrad loss_and_grad_from_logits(const LabelDistribution& target,
                                      std::span<const double> logits, LossKind kind);

}  // namespace lstext
