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

#include "lstext/models.h"

namespace lstext {

// Small trainable transformer encoder for sequence classification:
//
//   H0 = E[ids] + P[positions]                    (non-PAD positions only)
//   per layer:  M = MultiHead(H)
//               A = LN(H + M)      or  A = M       (residual_norm off)
//               F = relu((A W1 + b1) W2 + b2)
//               H = LN(A + F)      or  H = F
//   p  = per-dimension max over positions
//   logits = p W_y^T + b_y
//
// PAD positions are dropped before the first layer. That is equivalent to
// masking them as keys and excluding them from pooling, since no other
// position reads a PAD query row.
class Transformer final : public Classifier {
 public:
  Transformer(const TransformerConfig& cfg, Rng& rng);
  Transformer(const TransformerConfig& cfg, ParamSet params);

  const TransformerConfig& config() const { return cfg_; }

  Architecture architecture() const override { return Architecture::Transformer; }
  std::size_t num_classes() const override { return cfg_.num_classes; }
  std::size_t vocab_size() const override { return cfg_.vocab_size; }
  std::size_t max_len() const override { return cfg_.max_len; }
  std::size_t feature_dim() const override { return cfg_.d_model; }
  std::unique_ptr<Classifier> clone() const override;

  ForwardResult forward(const Batch& batch) const override;
  ParamSet backward(const ForwardCache& cache, const Tensor2& grad_logits) const override;
  Tensor2 penultimate(const Batch& batch) const override;

  // Multi-head attention sublayer of one layer, applied to h (seq x d).
  Tensor2 multi_head_attention(const Tensor2& h, std::size_t layer) const;
  // FFN sublayer of one layer.
  Tensor2 ffn(const Tensor2& z, std::size_t layer) const;

  static std::string param_name(std::size_t layer, std::string_view leaf);
  static std::string head_param_name(std::size_t layer, std::size_t head, std::string_view leaf);

 private:
  struct LayerCache;
  struct SequenceCache;
  struct Cache;

  void validate_config() const;
  void build_index();
  SequenceCache run_sequence(std::span<const TokenId> ids) const;

  TransformerConfig cfg_;
  // Parameter indices, resolved once.
  struct LayerIndex {
    std::vector<std::size_t> wq, wk, wv;
    std::size_t wo = 0, w1 = 0, b1 = 0, w2 = 0, b2 = 0;
    std::size_t ln1_gain = 0, ln1_bias = 0, ln2_gain = 0, ln2_bias = 0;
  };
  std::size_t embedding_ = 0, position_ = 0, cls_w_ = 0, cls_b_ = 0;
  std::vector<LayerIndex> layer_index_;
};

}  // namespace lstext
