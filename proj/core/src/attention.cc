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

#include "lstext/attention.h"

#include <cmath>
#include <string>

#include "lstext/error.h"

namespace lstext {

Tensor2 attention_weights(const Tensor2& q, const Tensor2& k, std::span<const bool> key_valid) {
  if (q.cols() != k.cols()) {
    throw DimensionError("attention: query width " + q.shape_string() + " vs key width " +
                         k.shape_string());
  }
  if (!key_valid.empty() && key_valid.size() != k.rows()) {
    throw DimensionError("attention: key mask length " + std::to_string(key_valid.size()) +
                         " for " + std::to_string(k.rows()) + " keys");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  Tensor2 w = matmul_bt(q, k);
  for (std::size_t i = 0; i < w.rows(); ++i) {
    auto row = w.row(i);
    double mx = -INFINITY;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!key_valid.empty() && !key_valid[j]) continue;
      row[j] *= scale;
      mx = std::max(mx, row[j]);
    }
    if (mx == -INFINITY) {
      for (double& x : row) x = 0.0;
      continue;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!key_valid.empty() && !key_valid[j]) {
        row[j] = 0.0;
      } else {
        row[j] = std::exp(row[j] - mx);
        sum += row[j];
      }
    }
    for (double& x : row) x /= sum;
  }
  return w;
}

Tensor2 scaled_dot_attention(const Tensor2& q, const Tensor2& k, const Tensor2& v,
                             std::span<const bool> key_valid) {
  if (k.rows() != v.rows()) {
    throw DimensionError("attention: keys " + k.shape_string() + " and values " +
                         v.shape_string() + " differ in length");
  }
  return matmul(attention_weights(q, k, key_valid), v);
}

Tensor2 multi_head_attention(const Tensor2& h, std::span<const Tensor2> wq,
                             std::span<const Tensor2> wk, std::span<const Tensor2> wv,
                             const Tensor2& wo, std::span<const bool> key_valid) {
  const std::size_t heads = wq.size();
  if (heads == 0 || wk.size() != heads || wv.size() != heads) {
    throw ConfigError("multi_head_attention: need the same positive number of Q/K/V projections");
  }
  const std::size_t d = h.cols();
  if (d % heads != 0) {
    throw ConfigError("multi_head_attention: model width " + std::to_string(d) +
                      " not divisible by " + std::to_string(heads) + " heads");
  }
  const std::size_t dk = d / heads;
  Tensor2 concat(h.rows(), d);
  for (std::size_t i = 0; i < heads; ++i) {
    if (wq[i].rows() != d || wq[i].cols() != dk || !wk[i].same_shape(wq[i]) ||
        !wv[i].same_shape(wq[i])) {
      throw DimensionError("multi_head_attention: head " + std::to_string(i) +
                           " projections must be " + std::to_string(d) + "x" +
                           std::to_string(dk));
    }
    Tensor2 z = scaled_dot_attention(matmul(h, wq[i]), matmul(h, wk[i]), matmul(h, wv[i]),
                                     key_valid);
    for (std::size_t r = 0; r < z.rows(); ++r)
      for (std::size_t c = 0; c < dk; ++c) concat(r, i * dk + c) = z(r, c);
  }
  return matmul(concat, wo);
}

Tensor2 ffn(const Tensor2& z, const Tensor2& w1, const Tensor2& b1, const Tensor2& w2,
            const Tensor2& b2) {
  Tensor2 u = matmul(z, w1);
  add_row_bias(u, b1);
  Tensor2 out = matmul(u, w2);
  add_row_bias(out, b2);
  for (double& x : out.values()) x = x > 0.0 ? x : 0.0;
  return out;
}

}  // namespace lstext
