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

#include <array>
#include <cstddef>
#include <vector>

#include "lstext/tensor.h"

namespace lstext {

struct Projection {
  Tensor2 coords;      // n x 2
  Tensor2 components;  // 2 x d, unit rows
  std::vector<double> mean;
  std::array<double, 2> variances{};  // eigenvalues of the sample covariance
};

struct PowerIterationOptions {
  std::size_t max_iterations = 1000;
  double tolerance = 1e-10;  // on ||C v - lambda v||, relative to max(1, lambda)
};

// Mean-centers the rows and projects onto the two leading principal
// components. Components come from power iteration on the sample covariance
// (start vector of ones) with deflation; each component's sign makes its
// largest-magnitude loading positive. Requires >= 3 rows and >= 2 columns;
// all-identical rows are rejected with InvalidInputError.
Projection pca_project(const Tensor2& features, const PowerIterationOptions& options = {});

// coords * components + mean.
Tensor2 reconstruct(const Projection& p);

}  // namespace lstext
