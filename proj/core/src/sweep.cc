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

#include "lstext/sweep.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "lstext/checkpoint.h"
#include "lstext/error.h"

namespace lstext {

std::string Algorithm::name() const {
  if (level != SmoothingLevel::Custom) return std::string(to_string(level));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "lambda%g", lambda);
  return buf;
}

void SweepConfig::validate() const {
  if (datasets.empty()) throw ConfigError("sweep: no dataset (dataset.path)");
  if (architectures.empty()) throw ConfigError("sweep: empty architecture list (model.arch)");
  if (algorithms.empty()) throw ConfigError("sweep: empty algorithm list (smooth.levels)");
  if (seeds.empty()) throw ConfigError("sweep: empty seed list (seed.list)");
  if (workers == 0) throw ConfigError("sweep: sweep.workers must be >= 1");
  if (!(lr_textcnn > 0.0) || !(lr_transformer > 0.0)) {
    throw ConfigError("sweep: learning rates must be positive");
  }
}

namespace {

std::vector<std::size_t> parse_counts(const std::vector<std::string>& items, const char* key) {
  std::vector<std::size_t> out;
  for (const auto& s : items) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ConfigError(std::string(key) + ": '" + s + "' is not a non-negative integer");
    }
    out.push_back(static_cast<std::size_t>(std::stoull(s)));
  }
  return out;
}

std::string join_csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  return out;
}

}  // namespace

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

SweepConfig sweep_config_from(const KeyValueConfig& kv, const std::filesystem::path& base_dir) {
  kv.reject_unknown({"dataset.path", "dataset.format", "dataset.text_field", "dataset.label_field",
                     "model.arch", "smooth.levels", "smooth.lambda", "seed.list", "out.dir",
                     "train.lr", "train.lr.textcnn", "train.lr.transformer", "train.batch_size",
                     "train.epochs", "train.val_fraction", "text.max_len", "text.min_freq",
                     "text.max_vocab", "textcnn.embed_dim", "textcnn.windows", "textcnn.filters",
                     "transformer.d_model", "transformer.heads", "transformer.layers",
                     "transformer.ffn_dim", "transformer.residual_norm", "sweep.workers",
                     "out.timing", "out.checkpoints"});
  SweepConfig cfg;

  const auto paths = kv.get_list("dataset.path");
  const auto formats = kv.get_list("dataset.format");
  if (!formats.empty() && formats.size() != 1 && formats.size() != paths.size()) {
    throw ConfigError(kv.source() + ": dataset.format needs one entry or one per dataset.path");
  }
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    DatasetSpec ds;
    ds.path = std::filesystem::path(paths[i]);
    if (ds.path.is_relative()) ds.path = base_dir / ds.path;
    ds.load.format = formats.empty() ? format_from_extension(ds.path)
                                     : parse_file_format(formats.size() == 1 ? formats[0] : formats[i]);
    ds.load.text_field = kv.get_string("dataset.text_field", "text");
    ds.load.label_field = kv.get_string("dataset.label_field", "label");
    ds.name = ds.path.stem().string();
    if (int n = seen[ds.name]++; n > 0) ds.name += "_" + std::to_string(n + 1);
    cfg.datasets.push_back(std::move(ds));
  }

  cfg.architectures.clear();
  for (const auto& a : kv.get_list("model.arch", {"textcnn"})) {
    cfg.architectures.push_back(parse_architecture(a));
  }
  for (const auto& l : kv.get_list("smooth.levels", {"Baseline", "LS1", "LS2", "LS3", "LS4", "LS5"})) {
    cfg.algorithms.push_back({parse_smoothing_level(l), 0.0});
  }
  for (const auto& s : kv.get_list("smooth.lambda")) {
    char* end = nullptr;
    const double lambda = std::strtod(s.c_str(), &end);
    if (*end != '\0') throw ConfigError(kv.source() + ": smooth.lambda: '" + s + "' is not a number");
    cfg.algorithms.push_back({SmoothingLevel::Custom, lambda});
  }
  cfg.seeds.clear();
  for (std::size_t s : parse_counts(kv.get_list("seed.list", {"0"}), "seed.list")) {
    cfg.seeds.push_back(static_cast<std::uint64_t>(s));
  }

  cfg.out_dir = kv.get_string("out.dir", "lstext-out");
  if (cfg.out_dir.is_relative()) cfg.out_dir = base_dir / cfg.out_dir;
  if (const char* env = std::getenv("LSTEXT_OUT_DIR"); env != nullptr && *env != '\0') {
    cfg.out_dir = env;
  }

  const double lr = kv.get_real("train.lr", 0.0);
  cfg.lr_textcnn = kv.get_real("train.lr.textcnn", lr > 0.0 ? lr : default_learning_rate(Architecture::TextCnn));
  cfg.lr_transformer =
      kv.get_real("train.lr.transformer", lr > 0.0 ? lr : default_learning_rate(Architecture::Transformer));
  cfg.batch_size = kv.get_count("train.batch_size", cfg.batch_size);
  cfg.epochs = kv.get_count("train.epochs", cfg.epochs);
  cfg.val_fraction = kv.get_real("train.val_fraction", cfg.val_fraction);

  cfg.max_len = kv.get_count("text.max_len", cfg.max_len);
  cfg.min_freq = kv.get_count("text.min_freq", cfg.min_freq);
  cfg.max_vocab = kv.get_count("text.max_vocab", cfg.max_vocab);

  cfg.textcnn.embed_dim = kv.get_count("textcnn.embed_dim", cfg.textcnn.embed_dim);
  if (kv.has("textcnn.windows")) {
    cfg.textcnn.windows = parse_counts(kv.get_list("textcnn.windows"), "textcnn.windows");
  }
  cfg.textcnn.filters = kv.get_count("textcnn.filters", cfg.textcnn.filters);
  cfg.transformer.d_model = kv.get_count("transformer.d_model", cfg.transformer.d_model);
  cfg.transformer.heads = kv.get_count("transformer.heads", cfg.transformer.heads);
  cfg.transformer.layers = kv.get_count("transformer.layers", cfg.transformer.layers);
  cfg.transformer.ffn_dim = kv.get_count("transformer.ffn_dim", cfg.transformer.ffn_dim);
  cfg.transformer.residual_norm = kv.get_bool("transformer.residual_norm", cfg.transformer.residual_norm);

  cfg.workers = kv.get_count("sweep.workers", cfg.workers);
  cfg.record_time = kv.get_bool("out.timing", cfg.record_time);
  cfg.save_checkpoints = kv.get_bool("out.checkpoints", cfg.save_checkpoints);
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  return sweep_config_from(KeyValueConfig::load(path), path.parent_path());
}

namespace {

struct PreparedData {
  std::string name;
  Vocabulary vocab;
  Dataset train;
  Dataset val;
};

struct Cell {
  const PreparedData* data;
  std::uint64_t seed;
  Architecture arch;
  Algorithm algorithm;
  std::string load_error;  // non-empty when the dataset failed to load
};

std::string run_stem(const Cell& c) {
  return c.data->name + "__" + std::string(to_string(c.arch)) + "__" + c.algorithm.name() +
         "__seed" + std::to_string(c.seed);
}

ResultRow run_cell(const SweepConfig& cfg, const Cell& cell, const std::string& dataset_name) {
  ResultRow row;
  row.dataset = dataset_name;
  row.architecture = cell.arch;
  row.algorithm = cell.algorithm.name();
  row.seed = cell.seed;
  if (!cell.load_error.empty()) {
    row.ok = false;
    row.reason = cell.load_error;
    return row;
  }
  try {
    const PreparedData& data = *cell.data;
    const std::size_t k = data.train.k;
    TrainConfig tc;
    tc.smoothing = cell.algorithm.level == SmoothingLevel::Custom
                       ? SmoothingSpec::explicit_lambda(cell.algorithm.lambda, k)
                       : SmoothingSpec(cell.algorithm.level, k);
    row.lambda = tc.smoothing.lambda();
    tc.loss_kind = objective_for(tc.smoothing.level());
    tc.learning_rate = cell.arch == Architecture::TextCnn ? cfg.lr_textcnn : cfg.lr_transformer;
    tc.batch_size = cfg.batch_size;
    tc.epochs = cfg.epochs;
    tc.seed = cell.seed;
    tc.record_time = cfg.record_time;
    const ModelConfig base = cell.arch == Architecture::TextCnn ? ModelConfig(cfg.textcnn)
                                                                : ModelConfig(cfg.transformer);
    tc.model = bind_model_config(base, data.vocab.size(), k, cfg.max_len);

    RunResult run = train_run(data.train, data.val, tc);
    row.best_val_accuracy = run.best_val_accuracy;
    row.best_epoch = run.best_epoch;
    row.metrics = run.metrics;

    const auto runs_dir = cfg.out_dir / "runs";
    std::ofstream metrics_out(runs_dir / (run_stem(cell) + ".csv"), std::ios::binary | std::ios::trunc);
    if (!metrics_out) throw IoError("cannot write metrics under " + runs_dir.string());
    write_metrics_csv(metrics_out, run.metrics, row.algorithm);
    if (cfg.save_checkpoints) {
      save_checkpoint(runs_dir / (run_stem(cell) + ".ckpt"), *run.model, data.vocab,
                      data.train.label_names);
    }
  } catch (const Error& e) {
    row.ok = false;
    row.reason = e.what();
  }
  return row;
}

}  // namespace

void mark_best(ResultTable& table) {
  // (dataset, architecture) -> algorithm -> (sum, count)
  std::map<std::pair<std::string, int>, std::map<std::string, std::pair<double, int>>> acc;
  for (const auto& r : table.rows) {
    if (!r.ok) continue;
    auto& slot = acc[{r.dataset, static_cast<int>(r.architecture)}][r.algorithm];
    slot.first += r.best_val_accuracy;
    slot.second += 1;
  }
  std::map<std::pair<std::string, int>, std::string> winner;
  for (const auto& [group, algos] : acc) {
    double best = -1.0;
    // First algorithm in row order wins ties.
    for (const auto& r : table.rows) {
      if (!r.ok || r.dataset != group.first || static_cast<int>(r.architecture) != group.second) continue;
      const auto& [sum, count] = algos.at(r.algorithm);
      const double mean = sum / count;
      if (mean > best) {
        best = mean;
        winner[group] = r.algorithm;
      }
    }
  }
  for (auto& r : table.rows) {
    auto it = winner.find({r.dataset, static_cast<int>(r.architecture)});
    r.best = r.ok && it != winner.end() && it->second == r.algorithm;
  }
}

void write_results_table(const ResultTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write results table " + path.string());
  out << kResultsHeader << '\n';
  for (const auto& r : table.rows) {
    out << join_csv_row({r.dataset, std::string(to_string(r.architecture)), r.algorithm,
                         std::to_string(r.seed), format_real(r.lambda),
                         r.ok ? format_real(r.best_val_accuracy) : "",
                         r.ok ? std::to_string(r.best_epoch) : "", r.best ? "1" : "0",
                         r.ok ? "ok" : "failed", r.reason})
        << '\n';
  }
  if (!out) throw IoError("failed writing results table " + path.string());
}

void emit_curves(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write curves file " + path.string());
  out << kCurvesHeader << '\n';
  for (const auto& r : rows) {
    if (!r.ok) continue;
    for (const auto& m : r.metrics) {
      out << join_csv_row({r.dataset, std::string(to_string(r.architecture)), r.algorithm,
                           std::to_string(m.epoch), format_real(m.val_accuracy)})
          << '\n';
    }
  }
  if (!out) throw IoError("failed writing curves file " + path.string());
}

ResultTable run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir / "runs", ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());

  // Data preparation is sequential: load, split per seed, build the
  // vocabulary on the training split only.
  std::vector<std::unique_ptr<PreparedData>> prepared;
  std::vector<Cell> cells;
  std::vector<std::string> cell_dataset;
  for (const auto& ds : cfg.datasets) {
    std::string load_error;
    std::optional<TextDataset> text;
    try {
      text = load_dataset(ds.path, ds.load);
    } catch (const Error& e) {
      load_error = e.what();
    }
    for (std::uint64_t seed : cfg.seeds) {
      auto pd = std::make_unique<PreparedData>();
      pd->name = ds.name;
      std::string error = load_error;
      if (error.empty()) {
        try {
          auto [train_text, val_text] = split_dataset(*text, cfg.val_fraction, seed);
          pd->vocab = build_vocab(tokenize_all(train_text), cfg.min_freq, cfg.max_vocab);
          pd->train = encode_dataset(train_text, pd->vocab, cfg.max_len);
          pd->val = encode_dataset(val_text, pd->vocab, cfg.max_len);
        } catch (const Error& e) {
          error = e.what();
        }
      }
      for (Architecture arch : cfg.architectures) {
        for (const Algorithm& algo : cfg.algorithms) {
          cells.push_back({pd.get(), seed, arch, algo, error});
          cell_dataset.push_back(ds.name);
        }
      }
      prepared.push_back(std::move(pd));
    }
  }

  ResultTable table;
  table.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
      table.rows[i] = run_cell(cfg, cells[i], cell_dataset[i]);
    }
  };
  const std::size_t n_threads = std::min(cfg.workers, std::max<std::size_t>(1, cells.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  mark_best(table);
  write_results_table(table, cfg.out_dir / "results.csv");
  for (std::uint64_t seed : cfg.seeds) {
    std::vector<ResultRow> rows;
    for (const auto& r : table.rows)
      if (r.seed == seed) rows.push_back(r);
    emit_curves(rows, cfg.out_dir / ("curves_seed" + std::to_string(seed) + ".csv"));
  }
  return table;
}

}  // namespace lstext
