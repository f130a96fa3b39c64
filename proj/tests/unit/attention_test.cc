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
#include <numeric>

#include <gtest/gtest.h>

#include "lstext/attention.h"
#include "lstext/error.h"
#include "lstext/numerics.h"
#include "test_util.h"

namespace lstext {
namespace {

using testing::random_tensor;

// Unfused reference: explicit scores, exp, normalization, weighted sum.
Tensor2 direct_attention(const Tensor2& q, const Tensor2& k, const Tensor2& v) {
  Tensor2 out(q.rows(), v.cols());
  const long double scale = 1.0L / std::sqrt(static_cast<long double>(q.cols()));
  for (std::size_t i = 0; i < q.rows(); ++i) {
    std::vector<long double> w(k.rows());
    long double z = 0.0L;
    for (std::size_t j = 0; j < k.rows(); ++j) {
      long double s = 0.0L;
      for (std::size_t c = 0; c < q.cols(); ++c) s += static_cast<long double>(q(i, c)) * k(j, c);
      w[j] = std::exp(s * scale);
      z += w[j];
    }
    for (std::size_t c = 0; c < v.cols(); ++c) {
      long double acc = 0.0L;
      for (std::size_t j = 0; j < k.rows(); ++j) acc += w[j] / z * v(j, c);
      out(i, c) = static_cast<double>(acc);
    }
  }
  return out;
}

TEST(AttentionTest, SaturatesOnMatchingKey) {
  const Tensor2 q = Tensor2::from_rows({{100, 0, 0}});
  const Tensor2 k = Tensor2::from_rows({{100, 0, 0}, {0, 100, 0}, {0, 0, 100}});
  const Tensor2 v = Tensor2::from_rows({{1, 2}, {3, 4}, {5, 6}});
  const Tensor2 out = scaled_dot_attention(q, k, v);
  EXPECT_NEAR(out(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(out(0, 1), 2.0, 1e-12);
}

TEST(AttentionTest, EqualScoresGiveColumnMean) {
  Rng rng(1);
  const Tensor2 q(2, 4);
  const Tensor2 k = random_tensor(5, 4, rng);
  const Tensor2 v = random_tensor(5, 3, rng);
  const Tensor2 out = scaled_dot_attention(q, k, v);
  const Tensor2 mean = scaled(column_sums(v), 1.0 / 5.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(out(i, c), mean(0, c), 1e-15);
}

TEST(AttentionTest, MatchesDirectFormula) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor2 q = random_tensor(4, 8, rng, -2, 2);
    const Tensor2 k = random_tensor(4, 8, rng, -2, 2);
    const Tensor2 v = random_tensor(4, 8, rng, -2, 2);
    EXPECT_LE(max_abs_diff(scaled_dot_attention(q, k, v), direct_attention(q, k, v)), 1e-10);
  }
}

TEST(AttentionTest, ShapeMismatch) {
  EXPECT_THROW(scaled_dot_attention(Tensor2(2, 3), Tensor2(2, 4), Tensor2(2, 4)), DimensionError);
  EXPECT_THROW(scaled_dot_attention(Tensor2(2, 3), Tensor2(2, 3), Tensor2(3, 4)), DimensionError);
}

TEST(AttentionTest, MaskedRowsStayStochastic) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    const Tensor2 q = random_tensor(n, 4, rng, -3, 3), k = random_tensor(n, 4, rng, -3, 3);
    std::unique_ptr<bool[]> mask(new bool[n]);
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) any |= (mask[j] = rng.uniform() < 0.6);
    if (!any) mask[0] = true;
    const Tensor2 w = attention_weights(q, k, std::span<const bool>(mask.get(), n));
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!mask[j]) {
          EXPECT_EQ(w(i, j), 0.0);
        }
        sum += w(i, j);
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(AttentionTest, FullyMaskedRowIsZero) {
  const bool mask[] = {false, false};
  const Tensor2 w = attention_weights(Tensor2(1, 2, 1.0), Tensor2(2, 2, 1.0), mask);
  EXPECT_EQ(w, Tensor2(1, 2));
}

TEST(MultiHeadTest, SingleHeadEqualsProjectedAttention) {
  Rng rng(4);
  const Tensor2 h = random_tensor(5, 6, rng);
  const std::vector<Tensor2> wq{random_tensor(6, 6, rng)}, wk{random_tensor(6, 6, rng)},
      wv{random_tensor(6, 6, rng)};
  const Tensor2 wo = random_tensor(6, 6, rng);
  const Tensor2 expected =
      matmul(direct_attention(matmul(h, wq[0]), matmul(h, wk[0]), matmul(h, wv[0])), wo);
  const Tensor2 out = multi_head_attention(h, wq, wk, wv, wo);
  EXPECT_EQ(out.rows(), 5u);
  EXPECT_EQ(out.cols(), 6u);
  EXPECT_LE(max_abs_diff(out, expected), 1e-10);
}

TEST(MultiHeadTest, HeadPermutationEquivalence) {
  Rng rng(5);
  const std::size_t d = 12, heads = 4, dk = d / heads;
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor2 h = random_tensor(7, d, rng);
    std::vector<Tensor2> wq, wk, wv;
    for (std::size_t i = 0; i < heads; ++i) {
      wq.push_back(random_tensor(d, dk, rng));
      wk.push_back(random_tensor(d, dk, rng));
      wv.push_back(random_tensor(d, dk, rng));
    }
    const Tensor2 wo = random_tensor(d, d, rng);
    std::vector<std::size_t> perm(heads);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    std::vector<Tensor2> pq, pk, pv;
    Tensor2 pwo(d, d);
    for (std::size_t i = 0; i < heads; ++i) {
      pq.push_back(wq[perm[i]]);
      pk.push_back(wk[perm[i]]);
      pv.push_back(wv[perm[i]]);
      for (std::size_t r = 0; r < dk; ++r)
        for (std::size_t c = 0; c < d; ++c) pwo(i * dk + r, c) = wo(perm[i] * dk + r, c);
    }
    const Tensor2 out = multi_head_attention(h, wq, wk, wv, wo);
    EXPECT_EQ(out.rows(), 7u);
    EXPECT_EQ(out.cols(), d);
    EXPECT_LE(max_abs_diff(out, multi_head_attention(h, pq, pk, pv, pwo)), 1e-12);
  }
}

TEST(MultiHeadTest, HeadShapesMustDivide) {
  Rng rng(6);
  const Tensor2 h = random_tensor(3, 6, rng);
  const std::vector<Tensor2> w(4, Tensor2(6, 1));
  EXPECT_THROW(multi_head_attention(h, w, w, w, Tensor2(6, 6)), Error);
}

TEST(FfnTest, IdentityWeightsPassNonNegativeInput) {
  Rng rng(7);
  const Tensor2 z = random_tensor(4, 5, rng, 0, 2);
  const Tensor2 out = ffn(z, Tensor2::identity(5), Tensor2(1, 5), Tensor2::identity(5), Tensor2(1, 5));
  EXPECT_EQ(out, z);
}

TEST(FfnTest, NegativePreActivationGivesZero) {
  const Tensor2 z = Tensor2::from_rows({{-1, -2, -3}});
  const Tensor2 out = ffn(z, Tensor2::identity(3), Tensor2(1, 3), Tensor2::identity(3), Tensor2(1, 3));
  EXPECT_EQ(out, Tensor2(1, 3));
}

TEST(FfnTest, ShapeMismatch) {
  EXPECT_THROW(ffn(Tensor2(2, 3), Tensor2(4, 5), Tensor2(1, 5), Tensor2(5, 3), Tensor2(1, 3)),
               DimensionError);
}

TEST(FfnTest, InputGradientMatchesFiniteDifferences) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor2 z = random_tensor(3, 4, rng);
    const Tensor2 w1 = random_tensor(4, 6, rng), b1 = random_tensor(1, 6, rng);
    const Tensor2 w2 = random_tensor(6, 4, rng), b2 = random_tensor(1, 4, rng);
    const Tensor2 c = random_tensor(3, 4, rng);
    // Analytic gradient of sum(c * ffn(z)) written out by hand.
    Tensor2 pre = matmul(z, w1);
    add_row_bias(pre, b1);
    pre = matmul(pre, w2);
    add_row_bias(pre, b2);
    Tensor2 gate(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) gate(i, j) = pre(i, j) > 0 ? c(i, j) : 0.0;
    const Tensor2 analytic = matmul_bt(matmul_bt(gate, w2), w1);
    const Tensor2 numeric = finite_diff_grad(
        [&](const Tensor2& x) {
          const Tensor2 y = ffn(x, w1, b1, w2, b2);
          double s = 0.0;
          for (std::size_t i = 0; i < y.size(); ++i) s += y.values()[i] * c.values()[i];
          return s;
        },
        z);
    EXPECT_LE(max_relative_error(analytic, numeric), 1e-6);
  }
}

}  // namespace
}  // namespace lstext
