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

#include "lstext/losses.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lstext/error.h"
#include "lstext/numerics.h"

namespace lstext {

namespace {

void require_same_k(const LabelDistribution& p, const LabelDistribution& q, const char* op) {
  if (p.k() != q.k()) {
    throw DimensionError(std::string(op) + ": class counts differ (" + std::to_string(p.k()) +
                         " vs " + std::to_string(q.k()) + ")");
  }
}

double safe_log(double q) { return std::log(std::max(q, kLogFloor)); }

void require_support(const LabelDistribution& p, const LabelDistribution& q, const char* op) {
  for (std::size_t i = 0; i < p.k(); ++i) {
    if (p[i] > 0.0 && !(q[i] > 0.0)) {
      throw InfiniteLossError(std::string(op) + ": predicted probability of class " +
                              std::to_string(i) + " is zero where the target has mass");
    }
  }
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::CrossEntropy: return "CrossEntropy";
    case LossKind::KL: return "KL";
    case LossKind::MultiLabelCE: return "MultiLabelCE";
  }
  return "?";
}

double entropy(const LabelDistribution& p) {
  double h = 0.0;
  for (double pi : p.probs()) {
    if (pi > 0.0) h -= pi * std::log(pi);
  }
  return h;
}

double cross_entropy(const LabelDistribution& p, const LabelDistribution& q) {
  require_same_k(p, q, "cross_entropy");
  require_support(p, q, "cross_entropy");
  double h = 0.0;
  for (std::size_t i = 0; i < p.k(); ++i) {
    if (p[i] > 0.0) h -= p[i] * safe_log(q[i]);
  }
  return h;
}

double kl_divergence(const LabelDistribution& p, const LabelDistribution& q) {
  require_same_k(p, q, "kl_divergence");
  require_support(p, q, "kl_divergence");
  double d = 0.0;
  for (std::size_t i = 0; i < p.k(); ++i) {
    if (p[i] > 0.0) d += p[i] * (std::log(p[i]) - safe_log(q[i]));
  }
  return d;
}

double multi_label_cross_entropy(std::span<const std::size_t> labelset,
                                 const LabelDistribution& q) {
  if (labelset.empty()) throw InvalidInputError("multi_label_cross_entropy: empty label set");
  double total = 0.0;
  for (std::size_t y : labelset) {
    if (y >= q.k()) {
      throw RangeError("multi_label_cross_entropy: label " + std::to_string(y) +
                       " out of range for k=" + std::to_string(q.k()));
    }
    if (!(q[y] > 0.0)) {
      throw InfiniteLossError("multi_label_cross_entropy: zero probability for label " +
                              std::to_string(y));
    }
    total -= safe_log(q[y]);
  }
  return total / static_cast<double>(labelset.size());
}

LossAndGrad loss_and_grad_from_logits(const LabelDistribution& target,
                                      std::span<const double> logits, LossKind kind) {
  if (logits.size() != target.k()) {
    throw DimensionError("loss_and_grad_from_logits: " + std::to_string(logits.size()) +
                         " logits for k=" + std::to_string(target.k()));
  }
  for (double z : logits) {
    if (!std::isfinite(z)) throw InvalidInputError("loss_and_grad_from_logits: non-finite logit");
  }
  if (kind == LossKind::MultiLabelCE) {
    throw ConfigError("loss_and_grad_from_logits: kind must be CrossEntropy or KL");
  }
  std::vector<double> q = softmax(logits);
  LossAndGrad out;
  out.grad.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out.grad[i] = q[i] - target[i];

  // softmax may underflow a class to exactly 0; the floor inside the log
  // keeps the loss finite without disturbing the gradient above.
  double value = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double p = target[i];
    if (p <= 0.0) continue;
    if (kind == LossKind::KL) {
      value += p * (std::log(p) - safe_log(q[i]));
    } else {
      value -= p * safe_log(q[i]);
    }
  }
  out.loss = LossValue{value, kind};
  return out;
}

}  // namespace lstext
