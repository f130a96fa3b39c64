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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lstext/checkpoint.h"
#include "lstext/config.h"
#include "lstext/error.h"
#include "lstext/pca.h"
#include "lstext/sweep.h"
#include "lstext/trainer.h"

namespace lstext::cli {

namespace {

namespace fs = std::filesystem;

struct DataArgs {
  std::string path;
  std::string format;
  std::string text_field = "text";
  std::string label_field = "label";
};

void add_data_options(CLI::App& cmd, DataArgs& args) {
  cmd.add_option("--data", args.path, "Dataset file (csv, tsv or jsonl)")->required();
  cmd.add_option("--format", args.format, "Dataset format; inferred from the extension if omitted");
  cmd.add_option("--text-field", args.text_field, "Text column / JSON key");
  cmd.add_option("--label-field", args.label_field, "Label column / JSON key");
}

// Encodes a dataset against a checkpoint's vocabulary and label list.
Dataset load_for_model(const DataArgs& args, const LoadedModel& loaded) {
  LoadOptions opt;
  opt.format = args.format.empty() ? format_from_extension(args.path) : parse_file_format(args.format);
  opt.text_field = args.text_field;
  opt.label_field = args.label_field;
  opt.label_names = loaded.label_names;
  return encode_dataset(load_dataset(args.path, opt), loaded.vocab, loaded.model->max_len());
}

int cmd_train(const std::string& config_path, const std::optional<std::string>& arch,
              const std::optional<std::string>& level, const std::optional<std::uint64_t>& seed,
              const std::optional<std::string>& out_dir, std::ostream& out) {
  SweepConfig sc = load_sweep_config(config_path);
  if (out_dir) sc.out_dir = *out_dir;
  const Architecture a = arch ? parse_architecture(*arch) : sc.architectures.front();
  const Algorithm algo = level ? Algorithm{parse_smoothing_level(*level), 0.0} : sc.algorithms.front();
  const std::uint64_t s = seed ? *seed : sc.seeds.front();
  const DatasetSpec& ds = sc.datasets.front();

  TextDataset text = load_dataset(ds.path, ds.load);
  auto [train_text, val_text] = split_dataset(text, sc.val_fraction, s);
  Vocabulary vocab = build_vocab(tokenize_all(train_text), sc.min_freq, sc.max_vocab);
  Dataset train = encode_dataset(train_text, vocab, sc.max_len);
  Dataset val = encode_dataset(val_text, vocab, sc.max_len);

  TrainConfig tc;
  tc.smoothing = algo.level == SmoothingLevel::Custom ? SmoothingSpec::explicit_lambda(algo.lambda, text.k)
                                                      : SmoothingSpec(algo.level, text.k);
  tc.loss_kind = objective_for(tc.smoothing.level());
  tc.learning_rate = a == Architecture::TextCnn ? sc.lr_textcnn : sc.lr_transformer;
  tc.batch_size = sc.batch_size;
  tc.epochs = sc.epochs;
  tc.seed = s;
  tc.record_time = true;
  tc.model = bind_model_config(a == Architecture::TextCnn ? ModelConfig(sc.textcnn) : ModelConfig(sc.transformer),
                               vocab.size(), text.k, sc.max_len);
  RunResult run = train_run(train, val, tc);

  fs::create_directories(sc.out_dir);
  std::ofstream metrics(sc.out_dir / "train_metrics.csv", std::ios::binary | std::ios::trunc);
  if (!metrics) throw IoError("cannot write " + (sc.out_dir / "train_metrics.csv").string());
  write_metrics_csv(metrics, run.metrics, algo.name());
  save_checkpoint(sc.out_dir / "model.ckpt", *run.model, vocab, train.label_names);

  out << "dataset=" << ds.name << " arch=" << to_string(a) << " algorithm=" << algo.name()
      << " lambda=" << format_real(tc.smoothing.lambda()) << "\n";
  for (const auto& m : run.metrics) {
    out << "epoch " << m.epoch << " train_loss=" << m.train_loss << " train_acc=" << m.train_accuracy
        << " val_acc=" << m.val_accuracy << "\n";
  }
  out << "best_val_accuracy=" << format_real(run.best_val_accuracy) << " epoch=" << run.best_epoch
      << "\ncheckpoint=" << (sc.out_dir / "model.ckpt").string() << "\n";
  return kOk;
}

int cmd_sweep(const std::string& config_path, std::optional<std::size_t> workers, std::ostream& out) {
  SweepConfig sc = load_sweep_config(config_path);
  if (workers) sc.workers = *workers;
  const ResultTable table = run_sweep(sc);
  std::size_t failed = 0;
  for (const auto& r : table.rows) {
    out << r.dataset << ' ' << to_string(r.architecture) << ' ' << r.algorithm << " seed=" << r.seed;
    if (r.ok) {
      out << " best_val_accuracy=" << format_real(r.best_val_accuracy) << " epoch=" << r.best_epoch
          << (r.best ? " *" : "") << '\n';
    } else {
      ++failed;
      out << " FAILED: " << r.reason << '\n';
    }
  }
  out << "results=" << (sc.out_dir / "results.csv").string() << '\n';
  return failed == 0 ? kOk : kFailure;
}

int cmd_eval(const std::string& checkpoint, const DataArgs& data, std::ostream& out) {
  const LoadedModel loaded = load_checkpoint(checkpoint);
  const Dataset d = load_for_model(data, loaded);
  out << "examples=" << d.size() << " accuracy=" << format_real(evaluate(*loaded.model, d)) << '\n';
  return kOk;
}

int cmd_project(const std::string& checkpoint, const DataArgs& data, const std::string& out_path,
                std::ostream& out) {
  const LoadedModel loaded = load_checkpoint(checkpoint);
  const Dataset d = load_for_model(data, loaded);
  const Tensor2 features = extract_penultimate(*loaded.model, make_batch(d));
  const Projection proj = pca_project(features);

  std::ofstream csv(out_path, std::ios::binary | std::ios::trunc);
  if (!csv) throw IoError("cannot write projection file " + out_path);
  csv << "x,y,label\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    csv << format_real(proj.coords(i, 0)) << ',' << format_real(proj.coords(i, 1)) << ','
        << csv_escape(d.label_names[d.examples[i].label]) << '\n';
  }
  if (!csv) throw IoError("failed writing projection file " + out_path);
  out << "rows=" << d.size() << " explained_variance=" << format_real(proj.variances[0]) << ','
      << format_real(proj.variances[1]) << " out=" << out_path << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Label-smoothing text classification experiments", "lstext"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> arch, level, out_dir;
  std::optional<std::uint64_t> seed;
  auto* train = app.add_subcommand("train", "Train one model from a config file");
  train->add_option("--config", config_path, "key=value config file")->required();
  train->add_option("--arch", arch, "textcnn or transformer (default: first model.arch)");
  train->add_option("--level", level, "Baseline, LS1..LS5 (default: first smooth.levels)");
  train->add_option("--seed", seed, "Seed (default: first seed.list)");
  train->add_option("--out", out_dir, "Output directory (default: out.dir)");

  std::optional<std::size_t> workers;
  auto* sweep = app.add_subcommand("sweep", "Run a smoothing-level sweep");
  sweep->add_option("--config", config_path, "key=value config file")->required();
  sweep->add_option("--workers", workers, "Parallel runs");

  std::string checkpoint;
  DataArgs data;
  auto* eval = app.add_subcommand("eval", "Score a checkpoint on a dataset");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  add_data_options(*eval, data);

  std::string projection_out;
  auto* project = app.add_subcommand("project", "Export a 2-D projection of penultimate features");
  project->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  add_data_options(*project, data);
  project->add_option("--out", projection_out, "Output CSV (x,y,label)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "lstext: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (train->parsed()) return cmd_train(config_path, arch, level, seed, out_dir, out);
    if (sweep->parsed()) return cmd_sweep(config_path, workers, out);
    if (eval->parsed()) return cmd_eval(checkpoint, data, out);
    if (project->parsed()) return cmd_project(checkpoint, data, projection_out, out);
  } catch (const IoError& e) {
    err << "lstext: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "lstext: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "lstext: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace lstext::cli
