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

// Convolutional text classifier. For each window size h, filter f and
// window start i the feature is c = relu(W_h[f] . x_{i:i+h-1} + b_h[f]),
// where x_{i:i+h-1} concatenates h word vectors. Each feature map is
// max-pooled over its windows and the pooled vector goes to the linear head.
//
// PAD tokens embed as zero vectors (their embedding row is never read or
// updated). A window consisting only of PAD tokens is skipped; a bank with
// no valid window pools to 0 and passes no gradient.
class TextCnn final : public Classifier {
 public:
  TextCnn(const TextCnnConfig& cfg, Rng& rng);
  // Wraps existing parameters (e.g. from a checkpoint); shapes are checked.
  TextCnn(const TextCnnConfig& cfg, ParamSet params);

  const TextCnnConfig& config() const { return cfg_; }

  Architecture architecture() const override { return Architecture::TextCnn; }
  std::size_t num_classes() const override { return cfg_.num_classes; }
  std::size_t vocab_size() const override { return cfg_.vocab_size; }
  std::size_t max_len() const override { return cfg_.max_len; }
  std::size_t feature_dim() const override { return cfg_.filters * cfg_.windows.size(); }
  std::unique_ptr<Classifier> clone() const override;

  ForwardResult forward(const Batch& batch) const override;
  ParamSet backward(const ForwardCache& cache, const Tensor2& grad_logits) const override;
  Tensor2 penultimate(const Batch& batch) const override;

  static std::string conv_weight_name(std::size_t window);
  static std::string conv_bias_name(std::size_t window);

 private:
  struct Cache;
  void validate_config() const;
  void check_ids(std::span<const TokenId> ids) const;
  // Pools one sequence; writes pooled features and the argmax window per filter.
  void pool_sequence(std::span<const TokenId> ids, std::span<double> pooled,
                     std::span<int> argmax) const;

  TextCnnConfig cfg_;
};

}  // namespace lstext
