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

#include "lstext/textcnn.h"

#include <algorithm>
#include <cmath>

#include "lstext/error.h"
#include "lstext/numerics.h"

namespace lstext {

namespace {

double xavier_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

}  // namespace

struct TextCnn::Cache final : ForwardCache {
  std::vector<TokenIds> ids;
  Tensor2 pooled;                       // batch x feature_dim
  std::vector<std::vector<int>> argmax;  // per example, per filter; -1 if none
};

std::string TextCnn::conv_weight_name(std::size_t window) {
  return "conv" + std::to_string(window) + ".weight";
}
std::string TextCnn::conv_bias_name(std::size_t window) {
  return "conv" + std::to_string(window) + ".bias";
}

void TextCnn::validate_config() const {
  if (cfg_.vocab_size < 2) throw ConfigError("textcnn: vocab_size must be >= 2");
  if (cfg_.num_classes < 2) throw ConfigError("textcnn: num_classes must be >= 2");
  if (cfg_.embed_dim == 0 || cfg_.filters == 0 || cfg_.max_len == 0) {
    throw ConfigError("textcnn: embed_dim, filters and max_len must be positive");
  }
  if (cfg_.windows.empty()) throw ConfigError("textcnn: at least one window size required");
  for (std::size_t i = 0; i < cfg_.windows.size(); ++i) {
    if (cfg_.windows[i] == 0) throw ConfigError("textcnn: window sizes must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (cfg_.windows[i] == cfg_.windows[j]) throw ConfigError("textcnn: duplicate window size");
  }
}

TextCnn::TextCnn(const TextCnnConfig& cfg, Rng& rng) : cfg_(cfg) {
  validate_config();
  const std::size_t d = cfg_.embed_dim;
  params_.add("embedding", seeded_init(cfg_.vocab_size, d, -0.25, 0.25, rng));
  for (std::size_t h : cfg_.windows) {
    const double a = xavier_bound(h * d, cfg_.filters);
    params_.add(conv_weight_name(h), seeded_init(cfg_.filters, h * d, -a, a, rng));
    params_.add(conv_bias_name(h), Tensor2(1, cfg_.filters));
  }
  const double a = xavier_bound(feature_dim(), cfg_.num_classes);
  params_.add("classifier.weight", seeded_init(cfg_.num_classes, feature_dim(), -a, a, rng));
  params_.add("classifier.bias", Tensor2(1, cfg_.num_classes));
}

TextCnn::TextCnn(const TextCnnConfig& cfg, ParamSet params) : cfg_(cfg) {
  validate_config();
  Rng scratch(0);
  TextCnn reference(cfg, scratch);
  if (!reference.params().matches(params)) {
    throw ContractError("textcnn: parameter set does not match the configuration");
  }
  params_ = std::move(params);
}

std::unique_ptr<Classifier> TextCnn::clone() const {
  return std::make_unique<TextCnn>(cfg_, params_);
}

void TextCnn::check_ids(std::span<const TokenId> ids) const {
  for (TokenId id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= cfg_.vocab_size) {
      throw RangeError("textcnn: token id " + std::to_string(id) + " outside vocabulary of " +
                       std::to_string(cfg_.vocab_size));
    }
  }
}

void TextCnn::pool_sequence(std::span<const TokenId> ids, std::span<double> pooled,
                            std::span<int> argmax) const {
  check_ids(ids);
  const std::size_t d = cfg_.embed_dim;
  const std::size_t len = ids.size();
  const Tensor2& emb = params_[0];

  // Concatenated word vectors; PAD rows stay zero.
  std::vector<double> x(len * d, 0.0);
  for (std::size_t t = 0; t < len; ++t) {
    if (ids[t] == kPadId) continue;
    auto row = emb.row(static_cast<std::size_t>(ids[t]));
    std::copy(row.begin(), row.end(), x.begin() + static_cast<std::ptrdiff_t>(t * d));
  }

  std::size_t out = 0;
  for (std::size_t bank = 0; bank < cfg_.windows.size(); ++bank) {
    const std::size_t h = cfg_.windows[bank];
    const Tensor2& w = params_[1 + 2 * bank];
    const Tensor2& b = params_[2 + 2 * bank];
    std::vector<double> best(cfg_.filters, -INFINITY);
    std::vector<int> where(cfg_.filters, -1);
    for (std::size_t i = 0; i + h <= len; ++i) {
      bool any = false;
      for (std::size_t t = i; t < i + h; ++t) any = any || ids[t] != kPadId;
      if (!any) continue;
      const double* xi = x.data() + i * d;
      for (std::size_t f = 0; f < cfg_.filters; ++f) {
        const double* wf = w.row(f).data();
        double s = b(0, f);
        for (std::size_t j = 0; j < h * d; ++j) s += wf[j] * xi[j];
        if (s > best[f]) {
          best[f] = s;
          where[f] = static_cast<int>(i);
        }
      }
    }
    for (std::size_t f = 0; f < cfg_.filters; ++f, ++out) {
      // max over relu(c) == relu(max c). A non-positive max has zero slope.
      if (where[f] >= 0 && best[f] > 0.0) {
        pooled[out] = best[f];
        argmax[out] = where[f];
      } else {
        pooled[out] = 0.0;
        argmax[out] = -1;
      }
    }
  }
}

Tensor2 TextCnn::penultimate(const Batch& batch) const {
  Tensor2 pooled(batch.size(), feature_dim());
  std::vector<int> argmax(feature_dim());
  for (std::size_t b = 0; b < batch.size(); ++b) pool_sequence(batch.sequences[b], pooled.row(b), argmax);
  return pooled;
}

ForwardResult TextCnn::forward(const Batch& batch) const {
  auto cache = std::make_unique<Cache>();
  stamp(*cache, batch.size());
  cache->pooled = Tensor2(batch.size(), feature_dim());
  cache->argmax.assign(batch.size(), std::vector<int>(feature_dim(), -1));
  cache->ids.reserve(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    pool_sequence(batch.sequences[b], cache->pooled.row(b), cache->argmax[b]);
    cache->ids.emplace_back(batch.sequences[b].begin(), batch.sequences[b].end());
  }
  ForwardResult result;
  result.logits = classify(cache->pooled);
  result.cache = std::move(cache);
  return result;
}

ParamSet TextCnn::backward(const ForwardCache& base, const Tensor2& grad_logits) const {
  const auto* cache = dynamic_cast<const Cache*>(&base);
  if (cache == nullptr) throw ContractError("textcnn backward: cache from a different model type");
  check_cache(base, grad_logits);

  ParamSet grads = params_.zeros_like();
  const std::size_t d = cfg_.embed_dim;
  const std::size_t cls_w = grads.index_of("classifier.weight");
  const std::size_t cls_b = cls_w + 1;
  const Tensor2& wy = params_[cls_w];

  add_matmul_at(grads[cls_w], grad_logits, cache->pooled);
  add_inplace(grads[cls_b], column_sums(grad_logits));
  const Tensor2 d_pooled = matmul(grad_logits, wy);  // batch x features

  Tensor2& d_emb = grads[0];
  for (std::size_t b = 0; b < cache->batch_size; ++b) {
    const TokenIds& ids = cache->ids[b];
    std::size_t out = 0;
    for (std::size_t bank = 0; bank < cfg_.windows.size(); ++bank) {
      const std::size_t h = cfg_.windows[bank];
      const Tensor2& w = params_[1 + 2 * bank];
      Tensor2& dw = grads[1 + 2 * bank];
      Tensor2& db = grads[2 + 2 * bank];
      for (std::size_t f = 0; f < cfg_.filters; ++f, ++out) {
        const int pos = cache->argmax[b][out];
        if (pos < 0) continue;
        const double g = d_pooled(b, out);
        if (g == 0.0) continue;
        db(0, f) += g;
        const double* wf = w.row(f).data();
        double* dwf = dw.row(f).data();
        for (std::size_t t = 0; t < h; ++t) {
          const TokenId id = ids[static_cast<std::size_t>(pos) + t];
          if (id == kPadId) continue;
          const double* e = params_[0].row(static_cast<std::size_t>(id)).data();
          double* de = d_emb.row(static_cast<std::size_t>(id)).data();
          for (std::size_t j = 0; j < d; ++j) {
            dwf[t * d + j] += g * e[j];
            de[j] += g * wf[t * d + j];
          }
        }
      }
    }
  }
  return grads;
}

}  // namespace lstext
