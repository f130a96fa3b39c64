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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lstext/config.h"
#include "lstext/labels.h"
#include "lstext/models.h"
#include "lstext/textpipe.h"
#include "lstext/trainer.h"

namespace lstext {

struct DatasetSpec {
  std::filesystem::path path;
  LoadOptions load;
  std::string name;  // file stem unless overridden
};

// One smoothing algorithm in a sweep: a named level, or an explicit lambda.
struct Algorithm {
  SmoothingLevel level = SmoothingLevel::Baseline;
  double lambda = 0.0;  // used only when level == Custom
  std::string name() const;
};

struct SweepConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<Architecture> architectures{Architecture::TextCnn};
  std::vector<Algorithm> algorithms;
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path out_dir = "lstext-out";

  double lr_textcnn = 0.1;
  double lr_transformer = 0.01;
  std::size_t batch_size = 32;
  std::size_t epochs = 20;
  double val_fraction = 0.2;

  std::size_t max_len = kDefaultMaxLen;
  std::size_t min_freq = 1;
  std::size_t max_vocab = 20000;

  TextCnnConfig textcnn;
  TransformerConfig transformer;

  std::size_t workers = 1;
  // Wall-clock seconds in the metrics files. Off keeps outputs byte-identical.
  bool record_time = false;
  bool save_checkpoints = true;

  void validate() const;
};

// Recognized keys (all optional except dataset.path):
//   dataset.path, dataset.format, dataset.text_field, dataset.label_field,
//   model.arch, smooth.levels, smooth.lambda, seed.list, out.dir,
//   train.lr, train.lr.textcnn, train.lr.transformer, train.batch_size,
//   train.epochs, train.val_fraction, text.max_len, text.min_freq,
//   text.max_vocab, textcnn.embed_dim, textcnn.windows, textcnn.filters,
//   transformer.d_model, transformer.heads, transformer.layers,
//   transformer.ffn_dim, transformer.residual_norm, sweep.workers,
//   out.timing, out.checkpoints
// Relative dataset paths resolve against base_dir. The LSTEXT_OUT_DIR
// environment variable, when set, overrides out.dir.
SweepConfig sweep_config_from(const KeyValueConfig& kv, const std::filesystem::path& base_dir);
SweepConfig load_sweep_config(const std::filesystem::path& path);

struct ResultRow {
  std::string dataset;
  Architecture architecture = Architecture::TextCnn;
  std::string algorithm;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double best_val_accuracy = 0.0;
  std::size_t best_epoch = 0;
  bool best = false;  // highest mean accuracy for its (dataset, architecture)
  bool ok = true;
  std::string reason;  // failure diagnostics
  std::vector<MetricsRecord> metrics;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

inline constexpr const char* kResultsHeader =
    "dataset,architecture,algorithm,seed,lambda,best_val_accuracy,best_epoch,best,status,reason";
inline constexpr const char* kCurvesHeader = "dataset,architecture,algorithm,epoch,val_accuracy";

// Runs every (dataset, seed, architecture, algorithm) cell, writing
//   <out>/runs/<dataset>__<arch>__<algorithm>__seed<seed>.csv   per-epoch metrics
//   <out>/runs/<dataset>__<arch>__<algorithm>__seed<seed>.ckpt  final model
//   <out>/curves_seed<seed>.csv                                  validation curves
//   <out>/results.csv                                            aggregate table
// A failing cell becomes a failed row; the sweep continues.
ResultTable run_sweep(const SweepConfig& cfg);

// Long-form validation curves of the successful rows, in row order.
void emit_curves(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
void write_results_table(const ResultTable& table, const std::filesystem::path& path);

// Marks, per (dataset, architecture), the rows of the algorithm with the
// highest mean best-validation accuracy over its successful seeds.
void mark_best(ResultTable& table);

std::string csv_escape(const std::string& field);

}  // namespace lstext
