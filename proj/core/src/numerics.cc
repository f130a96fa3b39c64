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

#include "lstext/numerics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lstext/error.h"

namespace lstext {

std::vector<double> softmax(std::span<const double> v) {
  std::vector<double> out(v.size());
  if (v.empty()) return out;
  double mx = -INFINITY;
  for (double x : v) {
    if (std::isnan(x)) throw InvalidInputError("softmax: NaN input");
    mx = std::max(mx, x);
  }
  if (!std::isfinite(mx)) throw InvalidInputError("softmax: non-finite input");
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - mx);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

Tensor2 seeded_init(std::size_t rows, std::size_t cols, double low, double high, Rng& rng) {
  if (!(low < high)) {
    throw ConfigError("seeded_init: low (" + std::to_string(low) + ") must be < high (" +
                      std::to_string(high) + ")");
  }
  Tensor2 t(rows, cols);
  for (double& x : t.values()) x = rng.uniform(low, high);
  return t;
}

Tensor2 finite_diff_grad(const ScalarFn& f, const Tensor2& x, double eps) {
  if (!(eps > 0.0)) throw ConfigError("finite_diff_grad: eps must be positive");
  Tensor2 probe = x;
  Tensor2 grad(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe.values()[i];
    probe.values()[i] = orig + eps;
    const double fp = f(probe);
    probe.values()[i] = orig - eps;
    const double fm = f(probe);
    probe.values()[i] = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw InvalidInputError("finite_diff_grad: non-finite function value at coordinate " +
                              std::to_string(i));
    }
    grad.values()[i] = (fp - fm) / (2.0 * eps);
  }
  return grad;
}

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

double max_relative_error(const Tensor2& analytic, const Tensor2& numeric, double floor) {
  if (!analytic.same_shape(numeric)) {
    throw DimensionError("max_relative_error: shapes " + analytic.shape_string() + " and " +
                         numeric.shape_string());
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    worst = std::max(worst, relative_error(analytic.values()[i], numeric.values()[i], floor));
  }
  return worst;
}

}  // namespace lstext
