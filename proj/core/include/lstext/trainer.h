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
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "lstext/labels.h"
#include "lstext/losses.h"
#include "lstext/models.h"
#include "lstext/textpipe.h"

namespace lstext {

// Baseline trains with cross-entropy; every LS level (and Custom) with KL.
LossKind objective_for(SmoothingLevel level);

// 0.1 for TextCNN, 0.01 for the transformer.
double default_learning_rate(Architecture arch);

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  std::size_t epochs = 20;
  std::uint64_t seed = 0;
  SmoothingSpec smoothing{SmoothingLevel::Baseline, 2};
  LossKind loss_kind = LossKind::CrossEntropy;
  // vocab_size / num_classes / max_len must match the data.
  ModelConfig model = TextCnnConfig{};
  // When false, MetricsRecord::seconds is 0 so outputs are reproducible.
  bool record_time = true;
  // Called once per optimization step with the objective used.
  std::function<void(LossKind)> on_objective;

  // Throws ConfigError on eta <= 0, epochs == 0, batch_size == 0 or a loss
  // kind that does not match the smoothing level.
  void validate() const;
};

struct MetricsRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double seconds = 0.0;
};

struct RunResult {
  std::vector<MetricsRecord> metrics;
  double best_val_accuracy = 0.0;
  std::size_t best_epoch = 0;  // earliest epoch attaining the best
  std::unique_ptr<Classifier> model;
};

// theta <- theta - eta * grad for every tensor.
void sgd_step(ParamSet& params, const ParamSet& grads, double eta);

// One pass of mini-batch SGD. Batches are shuffled from (cfg.seed, epoch);
// targets are the smoothed one-hot labels. Returns the example-weighted
// mean training loss before each step. Throws DivergenceError if a loss or
// logit becomes non-finite.
double train_epoch(Classifier& model, const Dataset& train, const TrainConfig& cfg,
                   std::size_t epoch);

// Fraction of examples whose argmax prediction equals the hard label.
double evaluate(const Classifier& model, const Dataset& data);

struct Evaluation {
  double loss = 0.0;      // mean objective against the smoothed targets
  double accuracy = 0.0;  // against hard labels
};
Evaluation evaluate_with_loss(const Classifier& model, const Dataset& data,
                              const SmoothingSpec& smoothing, LossKind kind);

// Fills in vocab_size, num_classes and max_len of a model config from data.
ModelConfig bind_model_config(ModelConfig cfg, std::size_t vocab_size, std::size_t num_classes,
                              std::size_t max_len);

// Initializes a model from cfg.seed, trains for cfg.epochs and records
// metrics after every epoch.
RunResult train_run(const Dataset& train, const Dataset& val, const TrainConfig& cfg);

inline constexpr const char* kMetricsHeader = "epoch,algorithm,split,loss,accuracy,seconds";

// Two rows per epoch: split "train" and split "val".
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& metrics,
                       const std::string& algorithm);

// %.17g, so values survive a text round trip exactly.
std::string format_real(double v);

}  // namespace lstext
