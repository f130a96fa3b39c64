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

#include <span>

#include "lstext/tensor.h"

namespace lstext {

// softmax(q k^T / sqrt(d_k)) row by row. Keys with key_valid[j] == false get
// weight 0; a row whose keys are all masked is all zeros. An empty mask
// means every key is valid.
Tensor2 attention_weights(const Tensor2& q, const Tensor2& k, std::span<const bool> key_valid = {});

// attention_weights(q, k, mask) * v.
Tensor2 scaled_dot_attention(const Tensor2& q, const Tensor2& k, const Tensor2& v,
                             std::span<const bool> key_valid = {});

// Self-attention over h with one (W^Q, W^K, W^V) triple per head, the head
// outputs concatenated column-wise and multiplied by the output projection.
// Each per-head matrix is d x d_k with d_k = d / heads; wo is d x d.
Tensor2 multi_head_attention(const Tensor2& h, std::span<const Tensor2> wq,
                             std::span<const Tensor2> wk, std::span<const Tensor2> wv,
                             const Tensor2& wo, std::span<const bool> key_valid = {});

// Position-wise relu((z w1 + b1) w2 + b2). The nonlinearity sits outside
// the second affine map; there is none between the two. Row-vector
// convention: w1 is d x inner, w2 is inner x d, biases are single rows.
Tensor2 ffn(const Tensor2& z, const Tensor2& w1, const Tensor2& b1, const Tensor2& w2,
            const Tensor2& b2);

}  // namespace lstext
