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

#include "lstext/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lstext/error.h"
#include "lstext/numerics.h"

namespace lstext {

LossKind objective_for(SmoothingLevel level) {
  return level == SmoothingLevel::Baseline ? LossKind::CrossEntropy : LossKind::KL;
}

double default_learning_rate(Architecture arch) {
  return arch == Architecture::TextCnn ? 0.1 : 0.01;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("train: learning rate must be positive");
  }
  if (epochs == 0) throw ConfigError("train: epochs must be >= 1");
  if (batch_size == 0) throw ConfigError("train: batch size must be >= 1");
  if (loss_kind != objective_for(smoothing.level())) {
    throw ConfigError("train: level " + std::string(to_string(smoothing.level())) +
                      " requires the " + std::string(to_string(objective_for(smoothing.level()))) +
                      " objective");
  }
}

void sgd_step(ParamSet& params, const ParamSet& grads, double eta) {
  if (!params.matches(grads)) throw ContractError("sgd_step: gradients do not match parameters");
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i].values();
    auto g = grads[i].values();
    for (std::size_t j = 0; j < p.size(); ++j) p[j] -= eta * g[j];
  }
}

namespace {

std::vector<LabelDistribution> class_targets(const SmoothingSpec& smoothing, std::size_t k) {
  std::vector<LabelDistribution> targets;
  for (std::size_t c = 0; c < k; ++c) targets.push_back(smooth(one_hot(c, k), smoothing.lambda()));
  return targets;
}

void check_compatible(const Classifier& model, const Dataset& data) {
  if (data.examples.empty()) throw ConfigError("dataset is empty");
  if (data.k != model.num_classes()) {
    throw ConfigError("dataset has " + std::to_string(data.k) + " classes, model has " +
                      std::to_string(model.num_classes()));
  }
}

constexpr std::size_t kEvalChunk = 256;

}  // namespace

double train_epoch(Classifier& model, const Dataset& train, const TrainConfig& cfg,
                   std::size_t epoch) {
  check_compatible(model, train);
  if (cfg.smoothing.k() != train.k) {
    throw ConfigError("train: smoothing resolved for k=" + std::to_string(cfg.smoothing.k()) +
                      " but the data has k=" + std::to_string(train.k));
  }
  const auto targets = class_targets(cfg.smoothing, train.k);
  const auto batches = iter_batches(train.size(), cfg.batch_size, true, cfg.seed, epoch);

  double loss_sum = 0.0;
  for (std::size_t bi = 0; bi < batches.size(); ++bi) {
    const IndexBatch& idx = batches[bi];
    const Batch batch = make_batch(train, idx);
    ForwardResult fwd = model.forward(batch);

    const double inv_b = 1.0 / static_cast<double>(idx.size());
    Tensor2 grad_logits(idx.size(), train.k);
    double batch_loss = 0.0;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      LossAndGrad lg;
      try {
        lg = loss_and_grad_from_logits(targets[train.examples[idx[r]].label], fwd.logits.row(r),
                                       cfg.loss_kind);
      } catch (const InvalidInputError&) {
        throw DivergenceError("training diverged: non-finite logits in batch " +
                              std::to_string(bi) + " of epoch " + std::to_string(epoch + 1) +
                              " (learning rate " + format_real(cfg.learning_rate) + ")");
      }
      batch_loss += lg.loss.value;
      for (std::size_t c = 0; c < train.k; ++c) grad_logits(r, c) = lg.grad[c] * inv_b;
    }
    if (!std::isfinite(batch_loss)) {
      throw DivergenceError("training diverged: non-finite loss in batch " + std::to_string(bi) +
                            " of epoch " + std::to_string(epoch + 1) + " (learning rate " +
                            format_real(cfg.learning_rate) + ")");
    }
    if (cfg.on_objective) cfg.on_objective(cfg.loss_kind);
    loss_sum += batch_loss;

    const ParamSet grads = model.backward(*fwd.cache, grad_logits);
    sgd_step(model.mutable_params(), grads, cfg.learning_rate);
  }
  return loss_sum / static_cast<double>(train.size());
}

Evaluation evaluate_with_loss(const Classifier& model, const Dataset& data,
                              const SmoothingSpec& smoothing, LossKind kind) {
  check_compatible(model, data);
  const auto targets = class_targets(smoothing, data.k);
  Evaluation ev;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < data.size(); start += kEvalChunk) {
    std::vector<std::size_t> idx;
    for (std::size_t i = start; i < std::min(data.size(), start + kEvalChunk); ++i) idx.push_back(i);
    const Tensor2 logits = model.forward(make_batch(data, idx)).logits;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const std::size_t label = data.examples[idx[r]].label;
      if (argmax_label(softmax(logits.row(r))) == label) ++correct;
      ev.loss += loss_and_grad_from_logits(targets[label], logits.row(r), kind).loss.value;
    }
  }
  ev.loss /= static_cast<double>(data.size());
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  return ev;
}

double evaluate(const Classifier& model, const Dataset& data) {
  check_compatible(model, data);
  std::size_t correct = 0;
  for (std::size_t start = 0; start < data.size(); start += kEvalChunk) {
    std::vector<std::size_t> idx;
    for (std::size_t i = start; i < std::min(data.size(), start + kEvalChunk); ++i) idx.push_back(i);
    const Tensor2 logits = model.forward(make_batch(data, idx)).logits;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      if (argmax_label(softmax(logits.row(r))) == data.examples[idx[r]].label) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

ModelConfig bind_model_config(ModelConfig cfg, std::size_t vocab_size, std::size_t num_classes,
                              std::size_t max_len) {
  std::visit(
      [&](auto& c) {
        c.vocab_size = vocab_size;
        c.num_classes = num_classes;
        c.max_len = max_len;
      },
      cfg);
  return cfg;
}

RunResult train_run(const Dataset& train, const Dataset& val, const TrainConfig& cfg) {
  cfg.validate();
  Rng init_rng(mix_seed(cfg.seed, 1));
  RunResult result;
  result.model = make_classifier(cfg.model, init_rng);

  using Clock = std::chrono::steady_clock;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = Clock::now();
    MetricsRecord rec;
    rec.epoch = epoch + 1;
    rec.train_loss = train_epoch(*result.model, train, cfg, epoch);
    rec.train_accuracy = evaluate(*result.model, train);
    const Evaluation ev = evaluate_with_loss(*result.model, val, cfg.smoothing, cfg.loss_kind);
    rec.val_loss = ev.loss;
    rec.val_accuracy = ev.accuracy;
    if (cfg.record_time) {
      rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    if (result.metrics.empty() || rec.val_accuracy > result.best_val_accuracy) {
      result.best_val_accuracy = rec.val_accuracy;
      result.best_epoch = rec.epoch;
    }
    result.metrics.push_back(rec);
  }
  return result;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& metrics,
                       const std::string& algorithm) {
  out << kMetricsHeader << '\n';
  char secs[64];
  for (const auto& m : metrics) {
    std::snprintf(secs, sizeof(secs), "%.6f", m.seconds);
    out << m.epoch << ',' << algorithm << ",train," << format_real(m.train_loss) << ','
        << format_real(m.train_accuracy) << ',' << secs << '\n';
    out << m.epoch << ',' << algorithm << ",val," << format_real(m.val_loss) << ','
        << format_real(m.val_accuracy) << ',' << secs << '\n';
  }
}

}  // namespace lstext
