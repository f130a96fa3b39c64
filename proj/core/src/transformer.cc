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

#include "lstext/transformer.h"

#include <algorithm>
#include <cmath>

#include "lstext/attention.h"
#include "lstext/error.h"
#include "lstext/numerics.h"

namespace lstext {

namespace {

constexpr double kLayerNormEps = 1e-5;

double xavier_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

struct NormCache {
  Tensor2 xhat;
  std::vector<double> inv_std;
};

Tensor2 layer_norm(const Tensor2& x, const Tensor2& gain, const Tensor2& bias, NormCache& cache) {
  const std::size_t d = x.cols();
  Tensor2 y(x.rows(), d);
  cache.xhat = Tensor2(x.rows(), d);
  cache.inv_std.assign(x.rows(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto xr = x.row(r);
    double mean = 0.0;
    for (double v : xr) mean += v;
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (double v : xr) var += (v - mean) * (v - mean);
    var /= static_cast<double>(d);
    const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
    cache.inv_std[r] = inv;
    for (std::size_t j = 0; j < d; ++j) {
      const double xh = (xr[j] - mean) * inv;
      cache.xhat(r, j) = xh;
      y(r, j) = gain(0, j) * xh + bias(0, j);
    }
  }
  return y;
}

// Returns dL/dx; accumulates gain and bias gradients.
Tensor2 layer_norm_backward(const Tensor2& dy, const NormCache& cache, const Tensor2& gain,
                            Tensor2& dgain, Tensor2& dbias) {
  const std::size_t d = dy.cols();
  const double inv_d = 1.0 / static_cast<double>(d);
  Tensor2 dx(dy.rows(), d);
  std::vector<double> dxhat(d);
  for (std::size_t r = 0; r < dy.rows(); ++r) {
    double mean_dxhat = 0.0;
    double mean_dxhat_xhat = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      dgain(0, j) += dy(r, j) * cache.xhat(r, j);
      dbias(0, j) += dy(r, j);
      dxhat[j] = dy(r, j) * gain(0, j);
      mean_dxhat += dxhat[j];
      mean_dxhat_xhat += dxhat[j] * cache.xhat(r, j);
    }
    mean_dxhat *= inv_d;
    mean_dxhat_xhat *= inv_d;
    for (std::size_t j = 0; j < d; ++j) {
      dx(r, j) = cache.inv_std[r] * (dxhat[j] - mean_dxhat - cache.xhat(r, j) * mean_dxhat_xhat);
    }
  }
  return dx;
}

Tensor2 columns(const Tensor2& m, std::size_t start, std::size_t count) {
  Tensor2 out(m.rows(), count);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = m(r, start + c);
  return out;
}

void set_columns(Tensor2& m, std::size_t start, const Tensor2& block) {
  for (std::size_t r = 0; r < block.rows(); ++r)
    for (std::size_t c = 0; c < block.cols(); ++c) m(r, start + c) = block(r, c);
}

void relu_inplace(Tensor2& m) {
  for (double& x : m.values()) x = x > 0.0 ? x : 0.0;
}

}  // namespace

struct Transformer::LayerCache {
  Tensor2 input;
  std::vector<Tensor2> q, k, v, attn;
  Tensor2 concat;
  NormCache ln1;
  Tensor2 a;      // attention sublayer output (after residual+norm when enabled)
  Tensor2 u;      // a W1 + b1
  Tensor2 v_pre;  // u W2 + b2
  NormCache ln2;
};

struct Transformer::SequenceCache {
  std::vector<std::size_t> positions;
  std::vector<TokenId> tokens;
  std::vector<LayerCache> layers;
  Tensor2 output;             // final hidden states, n x d
  std::vector<double> pooled;  // d
  std::vector<int> argmax;     // d; -1 when the sequence is all PAD
};

struct Transformer::Cache final : ForwardCache {
  std::vector<SequenceCache> sequences;
};

std::string Transformer::param_name(std::size_t layer, std::string_view leaf) {
  return "layer" + std::to_string(layer) + "." + std::string(leaf);
}

std::string Transformer::head_param_name(std::size_t layer, std::size_t head,
                                         std::string_view leaf) {
  return "layer" + std::to_string(layer) + ".head" + std::to_string(head) + "." +
         std::string(leaf);
}

void Transformer::validate_config() const {
  if (cfg_.vocab_size < 2) throw ConfigError("transformer: vocab_size must be >= 2");
  if (cfg_.num_classes < 2) throw ConfigError("transformer: num_classes must be >= 2");
  if (cfg_.d_model == 0 || cfg_.heads == 0 || cfg_.ffn_dim == 0 || cfg_.max_len == 0) {
    throw ConfigError("transformer: d_model, heads, ffn_dim and max_len must be positive");
  }
  if (cfg_.d_model % cfg_.heads != 0) {
    throw ConfigError("transformer: d_model " + std::to_string(cfg_.d_model) +
                      " not divisible by heads " + std::to_string(cfg_.heads));
  }
}

Transformer::Transformer(const TransformerConfig& cfg, Rng& rng) : cfg_(cfg) {
  validate_config();
  const std::size_t d = cfg_.d_model;
  const std::size_t dk = d / cfg_.heads;
  params_.add("embedding", seeded_init(cfg_.vocab_size, d, -0.1, 0.1, rng));
  params_.add("position", seeded_init(cfg_.max_len, d, -0.1, 0.1, rng));
  for (std::size_t l = 0; l < cfg_.layers; ++l) {
    const double ah = xavier_bound(d, dk);
    for (std::size_t h = 0; h < cfg_.heads; ++h) {
      params_.add(head_param_name(l, h, "wq"), seeded_init(d, dk, -ah, ah, rng));
      params_.add(head_param_name(l, h, "wk"), seeded_init(d, dk, -ah, ah, rng));
      params_.add(head_param_name(l, h, "wv"), seeded_init(d, dk, -ah, ah, rng));
    }
    const double ao = xavier_bound(d, d);
    params_.add(param_name(l, "wo"), seeded_init(d, d, -ao, ao, rng));
    if (cfg_.residual_norm) {
      params_.add(param_name(l, "ln1.gain"), Tensor2(1, d, 1.0));
      params_.add(param_name(l, "ln1.bias"), Tensor2(1, d));
    }
    const double a1 = xavier_bound(d, cfg_.ffn_dim);
    params_.add(param_name(l, "ffn.w1"), seeded_init(d, cfg_.ffn_dim, -a1, a1, rng));
    params_.add(param_name(l, "ffn.b1"), Tensor2(1, cfg_.ffn_dim));
    params_.add(param_name(l, "ffn.w2"), seeded_init(cfg_.ffn_dim, d, -a1, a1, rng));
    params_.add(param_name(l, "ffn.b2"), Tensor2(1, d));
    if (cfg_.residual_norm) {
      params_.add(param_name(l, "ln2.gain"), Tensor2(1, d, 1.0));
      params_.add(param_name(l, "ln2.bias"), Tensor2(1, d));
    }
  }
  const double ac = xavier_bound(d, cfg_.num_classes);
  params_.add("classifier.weight", seeded_init(cfg_.num_classes, d, -ac, ac, rng));
  params_.add("classifier.bias", Tensor2(1, cfg_.num_classes));
  build_index();
}

Transformer::Transformer(const TransformerConfig& cfg, ParamSet params) : cfg_(cfg) {
  validate_config();
  Rng scratch(0);
  Transformer reference(cfg, scratch);
  if (!reference.params().matches(params)) {
    throw ContractError("transformer: parameter set does not match the configuration");
  }
  params_ = std::move(params);
  build_index();
}

void Transformer::build_index() {
  embedding_ = params_.index_of("embedding");
  position_ = params_.index_of("position");
  cls_w_ = params_.index_of("classifier.weight");
  cls_b_ = params_.index_of("classifier.bias");
  layer_index_.assign(cfg_.layers, {});
  for (std::size_t l = 0; l < cfg_.layers; ++l) {
    LayerIndex& li = layer_index_[l];
    for (std::size_t h = 0; h < cfg_.heads; ++h) {
      li.wq.push_back(params_.index_of(head_param_name(l, h, "wq")));
      li.wk.push_back(params_.index_of(head_param_name(l, h, "wk")));
      li.wv.push_back(params_.index_of(head_param_name(l, h, "wv")));
    }
    li.wo = params_.index_of(param_name(l, "wo"));
    li.w1 = params_.index_of(param_name(l, "ffn.w1"));
    li.b1 = params_.index_of(param_name(l, "ffn.b1"));
    li.w2 = params_.index_of(param_name(l, "ffn.w2"));
    li.b2 = params_.index_of(param_name(l, "ffn.b2"));
    if (cfg_.residual_norm) {
      li.ln1_gain = params_.index_of(param_name(l, "ln1.gain"));
      li.ln1_bias = params_.index_of(param_name(l, "ln1.bias"));
      li.ln2_gain = params_.index_of(param_name(l, "ln2.gain"));
      li.ln2_bias = params_.index_of(param_name(l, "ln2.bias"));
    }
  }
}

std::unique_ptr<Classifier> Transformer::clone() const {
  return std::make_unique<Transformer>(cfg_, params_);
}

Tensor2 Transformer::multi_head_attention(const Tensor2& h, std::size_t layer) const {
  const LayerIndex& li = layer_index_.at(layer);
  std::vector<Tensor2> wq, wk, wv;
  for (std::size_t i = 0; i < cfg_.heads; ++i) {
    wq.push_back(params_[li.wq[i]]);
    wk.push_back(params_[li.wk[i]]);
    wv.push_back(params_[li.wv[i]]);
  }
  return lstext::multi_head_attention(h, wq, wk, wv, params_[li.wo]);
}

Tensor2 Transformer::ffn(const Tensor2& z, std::size_t layer) const {
  const LayerIndex& li = layer_index_.at(layer);
  return lstext::ffn(z, params_[li.w1], params_[li.b1], params_[li.w2], params_[li.b2]);
}

Transformer::SequenceCache Transformer::run_sequence(std::span<const TokenId> ids) const {
  if (ids.size() > cfg_.max_len) {
    throw DimensionError("transformer: sequence length " + std::to_string(ids.size()) +
                         " exceeds max_len " + std::to_string(cfg_.max_len));
  }
  SequenceCache sc;
  for (std::size_t t = 0; t < ids.size(); ++t) {
    const TokenId id = ids[t];
    if (id < 0 || static_cast<std::size_t>(id) >= cfg_.vocab_size) {
      throw RangeError("transformer: token id " + std::to_string(id) + " outside vocabulary of " +
                       std::to_string(cfg_.vocab_size));
    }
    if (id == kPadId) continue;
    sc.positions.push_back(t);
    sc.tokens.push_back(id);
  }
  const std::size_t n = sc.tokens.size();
  const std::size_t d = cfg_.d_model;
  const std::size_t dk = d / cfg_.heads;

  Tensor2 h(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    auto e = params_[embedding_].row(static_cast<std::size_t>(sc.tokens[r]));
    auto p = params_[position_].row(sc.positions[r]);
    for (std::size_t j = 0; j < d; ++j) h(r, j) = e[j] + p[j];
  }

  sc.layers.resize(cfg_.layers);
  for (std::size_t l = 0; l < cfg_.layers; ++l) {
    const LayerIndex& li = layer_index_[l];
    LayerCache& lc = sc.layers[l];
    lc.input = h;
    lc.concat = Tensor2(n, d);
    for (std::size_t hd = 0; hd < cfg_.heads; ++hd) {
      lc.q.push_back(matmul(h, params_[li.wq[hd]]));
      lc.k.push_back(matmul(h, params_[li.wk[hd]]));
      lc.v.push_back(matmul(h, params_[li.wv[hd]]));
      lc.attn.push_back(attention_weights(lc.q.back(), lc.k.back()));
      set_columns(lc.concat, hd * dk, matmul(lc.attn.back(), lc.v.back()));
    }
    Tensor2 m = matmul(lc.concat, params_[li.wo]);
    if (cfg_.residual_norm) {
      lc.a = layer_norm(add(h, m), params_[li.ln1_gain], params_[li.ln1_bias], lc.ln1);
    } else {
      lc.a = std::move(m);
    }
    lc.u = matmul(lc.a, params_[li.w1]);
    add_row_bias(lc.u, params_[li.b1]);
    lc.v_pre = matmul(lc.u, params_[li.w2]);
    add_row_bias(lc.v_pre, params_[li.b2]);
    Tensor2 f = lc.v_pre;
    relu_inplace(f);
    if (cfg_.residual_norm) {
      h = layer_norm(add(lc.a, f), params_[li.ln2_gain], params_[li.ln2_bias], lc.ln2);
    } else {
      h = std::move(f);
    }
  }

  sc.pooled.assign(d, 0.0);
  sc.argmax.assign(d, -1);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t r = 0; r < n; ++r) {
      if (sc.argmax[j] < 0 || h(r, j) > sc.pooled[j]) {
        sc.pooled[j] = h(r, j);
        sc.argmax[j] = static_cast<int>(r);
      }
    }
  }
  sc.output = std::move(h);
  return sc;
}

Tensor2 Transformer::penultimate(const Batch& batch) const {
  Tensor2 out(batch.size(), cfg_.d_model);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    SequenceCache sc = run_sequence(batch.sequences[b]);
    std::copy(sc.pooled.begin(), sc.pooled.end(), out.row(b).begin());
  }
  return out;
}

ForwardResult Transformer::forward(const Batch& batch) const {
  auto cache = std::make_unique<Cache>();
  stamp(*cache, batch.size());
  Tensor2 pooled(batch.size(), cfg_.d_model);
  cache->sequences.reserve(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    cache->sequences.push_back(run_sequence(batch.sequences[b]));
    const auto& p = cache->sequences.back().pooled;
    std::copy(p.begin(), p.end(), pooled.row(b).begin());
  }
  ForwardResult result;
  result.logits = classify(pooled);
  result.cache = std::move(cache);
  return result;
}

ParamSet Transformer::backward(const ForwardCache& base, const Tensor2& grad_logits) const {
  const auto* cache = dynamic_cast<const Cache*>(&base);
  if (cache == nullptr) {
    throw ContractError("transformer backward: cache from a different model type");
  }
  check_cache(base, grad_logits);

  ParamSet grads = params_.zeros_like();
  const std::size_t d = cfg_.d_model;
  const std::size_t dk = d / cfg_.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

  Tensor2 pooled(cache->batch_size, d);
  for (std::size_t b = 0; b < cache->batch_size; ++b) {
    const auto& p = cache->sequences[b].pooled;
    std::copy(p.begin(), p.end(), pooled.row(b).begin());
  }
  add_matmul_at(grads[cls_w_], grad_logits, pooled);
  add_inplace(grads[cls_b_], column_sums(grad_logits));
  const Tensor2 d_pooled = matmul(grad_logits, params_[cls_w_]);

  for (std::size_t b = 0; b < cache->batch_size; ++b) {
    const SequenceCache& sc = cache->sequences[b];
    const std::size_t n = sc.tokens.size();
    if (n == 0) continue;

    Tensor2 dh(n, d);
    for (std::size_t j = 0; j < d; ++j) dh(static_cast<std::size_t>(sc.argmax[j]), j) += d_pooled(b, j);

    for (std::size_t l = cfg_.layers; l-- > 0;) {
      const LayerIndex& li = layer_index_[l];
      const LayerCache& lc = sc.layers[l];

      // FFN sublayer.
      Tensor2 d_a(n, d);
      Tensor2 d_f;
      if (cfg_.residual_norm) {
        Tensor2 d_s2 = layer_norm_backward(dh, lc.ln2, params_[li.ln2_gain], grads[li.ln2_gain],
                                           grads[li.ln2_bias]);
        d_a = d_s2;
        d_f = std::move(d_s2);
      } else {
        d_f = std::move(dh);
      }
      Tensor2 d_vpre = std::move(d_f);
      for (std::size_t i = 0; i < d_vpre.size(); ++i) {
        if (!(lc.v_pre.values()[i] > 0.0)) d_vpre.values()[i] = 0.0;
      }
      add_matmul_at(grads[li.w2], lc.u, d_vpre);
      add_inplace(grads[li.b2], column_sums(d_vpre));
      const Tensor2 d_u = matmul_bt(d_vpre, params_[li.w2]);
      add_matmul_at(grads[li.w1], lc.a, d_u);
      add_inplace(grads[li.b1], column_sums(d_u));
      add_inplace(d_a, matmul_bt(d_u, params_[li.w1]));

      // Attention sublayer.
      Tensor2 d_m;
      Tensor2 d_in(n, d);
      if (cfg_.residual_norm) {
        d_m = layer_norm_backward(d_a, lc.ln1, params_[li.ln1_gain], grads[li.ln1_gain],
                                  grads[li.ln1_bias]);
        d_in = d_m;
      } else {
        d_m = std::move(d_a);
      }
      add_matmul_at(grads[li.wo], lc.concat, d_m);
      const Tensor2 d_concat = matmul_bt(d_m, params_[li.wo]);
      for (std::size_t hd = 0; hd < cfg_.heads; ++hd) {
        const Tensor2 d_z = columns(d_concat, hd * dk, dk);
        const Tensor2& attn = lc.attn[hd];
        const Tensor2 d_attn = matmul_bt(d_z, lc.v[hd]);
        const Tensor2 d_v = matmul_at(attn, d_z);
        Tensor2 d_scores(n, n);
        for (std::size_t i = 0; i < n; ++i) {
          double dot = 0.0;
          for (std::size_t j = 0; j < n; ++j) dot += attn(i, j) * d_attn(i, j);
          for (std::size_t j = 0; j < n; ++j) d_scores(i, j) = attn(i, j) * (d_attn(i, j) - dot) * scale;
        }
        const Tensor2 d_q = matmul(d_scores, lc.k[hd]);
        const Tensor2 d_k = matmul_at(d_scores, lc.q[hd]);
        add_matmul_at(grads[li.wq[hd]], lc.input, d_q);
        add_matmul_at(grads[li.wk[hd]], lc.input, d_k);
        add_matmul_at(grads[li.wv[hd]], lc.input, d_v);
        add_inplace(d_in, matmul_bt(d_q, params_[li.wq[hd]]));
        add_inplace(d_in, matmul_bt(d_k, params_[li.wk[hd]]));
        add_inplace(d_in, matmul_bt(d_v, params_[li.wv[hd]]));
      }
      dh = std::move(d_in);
    }

    Tensor2& d_emb = grads[embedding_];
    Tensor2& d_pos = grads[position_];
    for (std::size_t r = 0; r < n; ++r) {
      auto de = d_emb.row(static_cast<std::size_t>(sc.tokens[r]));
      auto dp = d_pos.row(sc.positions[r]);
      for (std::size_t j = 0; j < d; ++j) {
        de[j] += dh(r, j);
        dp[j] += dh(r, j);
      }
    }
  }
  return grads;
}

}  // namespace lstext
