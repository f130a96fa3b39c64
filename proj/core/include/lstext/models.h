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
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lstext/rng.h"
#include "lstext/tensor.h"
#include "lstext/textpipe.h"

namespace lstext {

enum class Architecture { TextCnn, Transformer };

std::string_view to_string(Architecture arch);
// "textcnn" or "transformer".
Architecture parse_architecture(std::string_view name);

// Ordered collection of named tensors. Model parameters and their gradients
// share this type; a gradient set always mirrors the names and shapes of the
// parameter set it was computed for.
class ParamSet {
 public:
  void add(std::string name, Tensor2 tensor);

  std::size_t size() const { return tensors_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  Tensor2& operator[](std::size_t i) { return tensors_[i]; }
  const Tensor2& operator[](std::size_t i) const { return tensors_[i]; }

  // Throws ContractError for unknown names.
  std::size_t index_of(std::string_view name) const;
  Tensor2& at(std::string_view name) { return tensors_[index_of(name)]; }
  const Tensor2& at(std::string_view name) const { return tensors_[index_of(name)]; }
  bool contains(std::string_view name) const;

  ParamSet zeros_like() const;
  // Same names in the same order with the same shapes.
  bool matches(const ParamSet& other) const;
  std::size_t total_size() const;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Tensor2> tensors_;
};

// A batch of fixed-length id sequences (views into a Dataset).
struct Batch {
  std::vector<std::span<const TokenId>> sequences;
  std::size_t size() const { return sequences.size(); }
};

Batch make_batch(const Dataset& d, std::span<const std::size_t> indices);
Batch make_batch(const Dataset& d);

// Intermediate activations of one forward call. Concrete models derive
// their own cache; backward rejects caches from another model, from another
// batch shape, or from before the parameters last changed.
struct ForwardCache {
  virtual ~ForwardCache() = default;
  std::uint64_t owner = 0;
  std::uint64_t param_version = 0;
  std::size_t batch_size = 0;
};

struct ForwardResult {
  Tensor2 logits;  // batch x k
  std::unique_ptr<ForwardCache> cache;
};

// Common interface of the text classifiers. Both models end in the same
// linear head: logits = features * classifier.weight^T + classifier.bias.
class Classifier {
 public:
  virtual ~Classifier() = default;
  Classifier(const Classifier&) = delete;
  Classifier& operator=(const Classifier&) = delete;

  virtual Architecture architecture() const = 0;
  virtual std::size_t num_classes() const = 0;
  virtual std::size_t vocab_size() const = 0;
  virtual std::size_t max_len() const = 0;
  // Width of the pooled representation fed to the classifier head.
  virtual std::size_t feature_dim() const = 0;
  virtual std::unique_ptr<Classifier> clone() const = 0;

  virtual ForwardResult forward(const Batch& batch) const = 0;
  // Gradients of sum_b <grad_logits[b], logits[b]> with respect to every
  // parameter, i.e. backprop of the given logit gradients.
  virtual ParamSet backward(const ForwardCache& cache, const Tensor2& grad_logits) const = 0;
  // Pooled features, one row per example.
  virtual Tensor2 penultimate(const Batch& batch) const = 0;

  // Applies the classifier head to pooled features.
  Tensor2 classify(const Tensor2& features) const;

  const ParamSet& params() const { return params_; }
  // Any mutable access invalidates outstanding forward caches.
  ParamSet& mutable_params() {
    ++version_;
    return params_;
  }
  std::uint64_t id() const { return id_; }
  std::uint64_t param_version() const { return version_; }

 protected:
  Classifier();
  void stamp(ForwardCache& cache, std::size_t batch_size) const;
  void check_cache(const ForwardCache& cache, const Tensor2& grad_logits) const;

  ParamSet params_;

 private:
  std::uint64_t id_;
  std::uint64_t version_ = 0;
};

struct TextCnnConfig {
  std::size_t vocab_size = 0;
  std::size_t num_classes = 2;
  std::size_t max_len = kDefaultMaxLen;
  std::size_t embed_dim = 128;
  std::vector<std::size_t> windows{3, 4, 5};
  std::size_t filters = 100;  // per window size
};

struct TransformerConfig {
  std::size_t vocab_size = 0;
  std::size_t num_classes = 2;
  std::size_t max_len = kDefaultMaxLen;
  std::size_t d_model = 64;
  std::size_t heads = 4;
  std::size_t layers = 2;
  std::size_t ffn_dim = 256;
  // Residual connection + layer normalization around attention and FFN.
  // Off gives the bare attention -> FFN stack.
  bool residual_norm = true;
};

using ModelConfig = std::variant<TextCnnConfig, TransformerConfig>;

Architecture architecture_of(const ModelConfig& cfg);
std::unique_ptr<Classifier> make_classifier(const ModelConfig& cfg, Rng& rng);

inline ParamSet model_backward(const Classifier& model, const ForwardCache& cache,
                               const Tensor2& grad_logits) {
  return model.backward(cache, grad_logits);
}
inline Tensor2 extract_penultimate(const Classifier& model, const Batch& batch) {
  return model.penultimate(batch);
}

}  // namespace lstext
