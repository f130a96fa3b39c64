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

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "lstext/error.h"
#include "lstext/pca.h"
#include "test_util.h"

namespace lstext {
namespace {

using testing::random_tensor;

struct EigenOracle {
  Eigen::VectorXd top[2];
  double values[2];
};

EigenOracle eigen_oracle(const Tensor2& x) {
  Eigen::MatrixXd m(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) m(i, j) = x(i, j);
  const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const auto d = static_cast<Eigen::Index>(x.cols());
  return {{es.eigenvectors().col(d - 1), es.eigenvectors().col(d - 2)},
          {es.eigenvalues()(d - 1), es.eigenvalues()(d - 2)}};
}

double sign_free_distance(const Tensor2& components, std::size_t r, const Eigen::VectorXd& v) {
  double plus = 0.0, minus = 0.0;
  for (std::size_t j = 0; j < components.cols(); ++j) {
    plus = std::max(plus, std::abs(components(r, j) - v(static_cast<Eigen::Index>(j))));
    minus = std::max(minus, std::abs(components(r, j) + v(static_cast<Eigen::Index>(j))));
  }
  return std::min(plus, minus);
}

Tensor2 anisotropic(std::size_t n, std::size_t d, Rng& rng) {
  Tensor2 x = random_tensor(n, d, rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) x(i, j) *= static_cast<double>(d - j);
  return x;
}

TEST(PcaTest, PlanarDataReconstructsExactly) {
  Rng rng(1);
  const Tensor2 basis = random_tensor(2, 10, rng);
  const Tensor2 coeffs = random_tensor(40, 2, rng, -3, 3);
  Tensor2 x = matmul(coeffs, basis);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 10; ++j) x(i, j) += 0.5 * static_cast<double>(j);
  const Projection p = pca_project(x);
  EXPECT_LE(max_abs_diff(reconstruct(p), x), 1e-8);
}

TEST(PcaTest, CoordinatesAreCentered) {
  Rng rng(2);
  const Projection p = pca_project(anisotropic(60, 5, rng));
  const Tensor2 sums = column_sums(p.coords);
  EXPECT_NEAR(sums(0, 0) / 60.0, 0.0, 1e-10);
  EXPECT_NEAR(sums(0, 1) / 60.0, 0.0, 1e-10);
}

TEST(PcaTest, MatchesDenseEigensolver) {
  for (std::uint64_t seed : {3u, 4u, 5u, 6u, 7u}) {
    Rng rng(seed);
    const Tensor2 x = anisotropic(50, 8, rng);
    const Projection p = pca_project(x);
    const EigenOracle o = eigen_oracle(x);
    for (std::size_t r = 0; r < 2; ++r) {
      EXPECT_LE(sign_free_distance(p.components, r, o.top[r]), 1e-6) << "seed " << seed;
      EXPECT_NEAR(p.variances[r], o.values[r], 1e-6 * o.values[0]);
    }
  }
}

TEST(PcaTest, MatchesDenseEigensolverOnUnscaledData) {
  for (std::uint64_t seed : {8u, 9u, 10u}) {
    Rng rng(seed);
    const Tensor2 x = random_tensor(50, 8, rng);
    const Projection p = pca_project(x);
    const EigenOracle o = eigen_oracle(x);
    for (std::size_t r = 0; r < 2; ++r)
      EXPECT_LE(sign_free_distance(p.components, r, o.top[r]), 1e-6) << "seed " << seed;
  }
}

TEST(PcaTest, SignConventionAndOrthonormality) {
  Rng rng(11);
  const Projection p = pca_project(anisotropic(30, 6, rng));
  for (std::size_t r = 0; r < 2; ++r) {
    std::size_t arg = 0;
    double norm = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      norm += p.components(r, j) * p.components(r, j);
      if (std::abs(p.components(r, j)) > std::abs(p.components(r, arg))) arg = j;
    }
    EXPECT_GT(p.components(r, arg), 0.0);
    EXPECT_NEAR(norm, 1.0, 1e-12);
  }
  double dot = 0.0;
  for (std::size_t j = 0; j < 6; ++j) dot += p.components(0, j) * p.components(1, j);
  EXPECT_NEAR(dot, 0.0, 1e-8);
  EXPECT_GE(p.variances[0], p.variances[1]);
}

TEST(PcaTest, RowPermutationInvariance) {
  Rng rng(12);
  const Tensor2 x = anisotropic(25, 4, rng);
  std::vector<std::size_t> perm(25);
  for (std::size_t i = 0; i < 25; ++i) perm[i] = i;
  rng.shuffle(perm);
  Tensor2 y(25, 4);
  for (std::size_t i = 0; i < 25; ++i)
    for (std::size_t j = 0; j < 4; ++j) y(i, j) = x(perm[i], j);
  const Projection a = pca_project(x), b = pca_project(y);
  EXPECT_LE(max_abs_diff(a.components, b.components), 1e-8);
  for (std::size_t i = 0; i < 25; ++i)
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(b.coords(i, c), a.coords(perm[i], c), 1e-8);
}

TEST(PcaTest, DegenerateInputs) {
  EXPECT_THROW(pca_project(Tensor2(10, 3, 2.5)), InvalidInputError);
  EXPECT_THROW(pca_project(Tensor2(2, 3)), InvalidInputError);
  EXPECT_THROW(pca_project(Tensor2(5, 1)), InvalidInputError);
}

}  // namespace
}  // namespace lstext
