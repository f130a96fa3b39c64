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

#include <functional>
#include <span>
#include <vector>

#include "lstext/rng.h"
#include "lstext/tensor.h"

namespace lstext {

// Numerically stable softmax (max subtraction). Throws InvalidInputError on NaN.
std::vector<double> softmax(std::span<const double> v);

// Fills a rows x cols tensor with i.i.d. uniform draws in [low, high),
// consuming exactly rows*cols draws from rng in row-major order.
Tensor2 seeded_init(std::size_t rows, std::size_t cols, double low, double high, Rng& rng);

using ScalarFn = std::function<double(const Tensor2&)>;

// Central finite-difference gradient of f at x.
Tensor2 finite_diff_grad(const ScalarFn& f, const Tensor2& x, double eps = 1e-5);

// |a - n| / max(|a|, |n|, floor). The floor keeps near-zero coordinates
// from turning round-off into huge relative errors.
double relative_error(double analytic, double numeric, double floor = 1e-4);
double max_relative_error(const Tensor2& analytic, const Tensor2& numeric,
                          double floor = 1e-4);

}  // namespace lstext
