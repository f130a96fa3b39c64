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

#include "lstext/pca.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lstext/error.h"

namespace lstext {

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> mat_vec(const Tensor2& c, const std::vector<double>& v) {
  std::vector<double> out(c.rows(), 0.0);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    auto r = c.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[i] += r[j] * v[j];
  }
  return out;
}

// Fallback when the deflated matrix is numerically zero: the first basis
// vector, orthogonalized against `against`, with the largest residual.
std::vector<double> orthogonal_unit(const std::vector<double>& against) {
  const std::size_t d = against.size();
  std::vector<double> best;
  double best_norm = -1.0;
  for (std::size_t e = 0; e < d; ++e) {
    std::vector<double> v(d, 0.0);
    v[e] = 1.0;
    const double dot = against[e];
    for (std::size_t j = 0; j < d; ++j) v[j] -= dot * against[j];
    const double n = norm(v);
    if (n > best_norm + 1e-12) {
      best_norm = n;
      best = v;
    }
  }
  for (double& x : best) x /= best_norm;
  return best;
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t j = 1; j < v.size(); ++j)
    if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
  if (v[arg] < 0.0)
    for (double& x : v) x = -x;
}

}  // namespace

Projection pca_project(const Tensor2& features, const PowerIterationOptions& options) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  if (n < 3 || d < 2) {
    throw InvalidInputError("pca_project: need at least 3 rows and 2 columns, got " +
                            features.shape_string());
  }
  if (!features.all_finite()) throw InvalidInputError("pca_project: non-finite feature value");

  Projection p;
  p.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) p.mean[j] += features(i, j);
  for (double& m : p.mean) m /= static_cast<double>(n);

  Tensor2 centered = features;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) centered(i, j) -= p.mean[j];

  Tensor2 cov = matmul_at(centered, centered);
  for (double& x : cov.values()) x /= static_cast<double>(n - 1);
  double trace = 0.0;
  for (std::size_t j = 0; j < d; ++j) trace += cov(j, j);
  if (!(trace > 0.0)) {
    throw InvalidInputError("pca_project: all feature rows are identical (degenerate input)");
  }

  p.components = Tensor2(2, d);
  std::vector<double> previous;
  for (std::size_t comp = 0; comp < 2; ++comp) {
    std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
    double lambda = 0.0;
    bool degenerate = false;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      std::vector<double> w = mat_vec(cov, v);
      const double wn = norm(w);
      if (wn <= 1e-14 * trace) {
        degenerate = true;
        break;
      }
      for (double& x : w) x /= wn;
      const std::vector<double> cw = mat_vec(cov, w);
      lambda = 0.0;
      for (std::size_t j = 0; j < d; ++j) lambda += w[j] * cw[j];
      double resid = 0.0;
      for (std::size_t j = 0; j < d; ++j) resid += (cw[j] - lambda * w[j]) * (cw[j] - lambda * w[j]);
      v = std::move(w);
      if (std::sqrt(resid) <= options.tolerance * std::max(1.0, std::abs(lambda))) break;
    }
    if (degenerate) {
      v = comp == 0 ? std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d)))
                    : orthogonal_unit(previous);
      lambda = 0.0;
    }
    fix_sign(v);
    p.variances[comp] = lambda;
    for (std::size_t j = 0; j < d; ++j) p.components(comp, j) = v[j];
    // Deflate.
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) cov(i, j) -= lambda * v[i] * v[j];
    previous = v;
  }

  p.coords = matmul_bt(centered, p.components);
  return p;
}

Tensor2 reconstruct(const Projection& p) {
  Tensor2 out = matmul(p.coords, p.components);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += p.mean[j];
  return out;
}

}  // namespace lstext
