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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace lstext {

// Dense row-major matrix of doubles. Vectors are 1 x n or n x 1 tensors.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data);

  // Builds a tensor from nested rows; all rows must have equal length.
  static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor2 identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& storage() const { return data_; }

  void fill(double v);
  bool same_shape(const Tensor2& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;

  // "RxC" for diagnostics.
  std::string shape_string() const;

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Tensor2 matmul(const Tensor2& a, const Tensor2& b);
// a * b^T without materializing the transpose.
Tensor2 matmul_bt(const Tensor2& a, const Tensor2& b);
// a^T * b without materializing the transpose.
Tensor2 matmul_at(const Tensor2& a, const Tensor2& b);
Tensor2 transpose(const Tensor2& a);

// out += a * b^T etc., used to accumulate gradients in place.
void add_matmul_at(Tensor2& out, const Tensor2& a, const Tensor2& b);

void add_inplace(Tensor2& dst, const Tensor2& src, double scale = 1.0);
Tensor2 add(const Tensor2& a, const Tensor2& b);
Tensor2 scaled(const Tensor2& a, double s);
// Adds a 1 x cols bias row to every row.
void add_row_bias(Tensor2& m, const Tensor2& bias);
// Column sums as a 1 x cols tensor.
Tensor2 column_sums(const Tensor2& m);

double max_abs_diff(const Tensor2& a, const Tensor2& b);

}  // namespace lstext
