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

#include "lstext/models.h"

#include <atomic>

#include "lstext/error.h"
#include "lstext/textcnn.h"
#include "lstext/transformer.h"

namespace lstext {

std::string_view to_string(Architecture arch) {
  return arch == Architecture::TextCnn ? "textcnn" : "transformer";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "textcnn") return Architecture::TextCnn;
  if (name == "transformer") return Architecture::Transformer;
  throw ConfigError("unknown architecture '" + std::string(name) +
                    "' (expected textcnn or transformer)");
}

void ParamSet::add(std::string name, Tensor2 tensor) {
  if (contains(name)) throw ContractError("duplicate parameter name " + name);
  names_.push_back(std::move(name));
  tensors_.push_back(std::move(tensor));
}

std::size_t ParamSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw ContractError("no parameter named " + std::string(name));
}

bool ParamSet::contains(std::string_view name) const {
  for (const auto& n : names_)
    if (n == name) return true;
  return false;
}

ParamSet ParamSet::zeros_like() const {
  ParamSet out;
  for (std::size_t i = 0; i < size(); ++i)
    out.add(names_[i], Tensor2(tensors_[i].rows(), tensors_[i].cols()));
  return out;
}

bool ParamSet::matches(const ParamSet& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (names_[i] != other.names_[i] || !tensors_[i].same_shape(other.tensors_[i])) return false;
  }
  return true;
}

std::size_t ParamSet::total_size() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

Batch make_batch(const Dataset& d, std::span<const std::size_t> indices) {
  Batch b;
  b.sequences.reserve(indices.size());
  for (std::size_t i : indices) b.sequences.emplace_back(d.examples.at(i).ids);
  return b;
}

Batch make_batch(const Dataset& d) {
  Batch b;
  b.sequences.reserve(d.size());
  for (const auto& ex : d.examples) b.sequences.emplace_back(ex.ids);
  return b;
}

namespace {
std::atomic<std::uint64_t> next_model_id{1};
}

Classifier::Classifier() : id_(next_model_id.fetch_add(1)) {}

void Classifier::stamp(ForwardCache& cache, std::size_t batch_size) const {
  cache.owner = id_;
  cache.param_version = version_;
  cache.batch_size = batch_size;
}

void Classifier::check_cache(const ForwardCache& cache, const Tensor2& grad_logits) const {
  if (cache.owner != id_) throw ContractError("backward: cache was produced by another model");
  if (cache.param_version != version_) {
    throw ContractError("backward: parameters changed since the forward pass (stale cache)");
  }
  if (grad_logits.rows() != cache.batch_size || grad_logits.cols() != num_classes()) {
    throw ContractError("backward: grad_logits shape " + grad_logits.shape_string() +
                        " does not match batch " + std::to_string(cache.batch_size) + "x" +
                        std::to_string(num_classes()));
  }
}

Tensor2 Classifier::classify(const Tensor2& features) const {
  Tensor2 logits = matmul_bt(features, params_.at("classifier.weight"));
  add_row_bias(logits, params_.at("classifier.bias"));
  return logits;
}

Architecture architecture_of(const ModelConfig& cfg) {
  return std::holds_alternative<TextCnnConfig>(cfg) ? Architecture::TextCnn
                                                    : Architecture::Transformer;
}

std::unique_ptr<Classifier> make_classifier(const ModelConfig& cfg, Rng& rng) {
  if (const auto* c = std::get_if<TextCnnConfig>(&cfg)) return std::make_unique<TextCnn>(*c, rng);
  return std::make_unique<Transformer>(std::get<TransformerConfig>(cfg), rng);
}

}  // namespace lstext
