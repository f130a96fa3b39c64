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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "cli.h"
#include "grad_check.h"
#include "lstext/checkpoint.h"
#include "lstext/labels.h"
#include "lstext/losses.h"
#include "lstext/pca.h"
#include "lstext/sweep.h"
#include "lstext/textcnn.h"
#include "lstext/trainer.h"
#include "lstext/transformer.h"
#include "test_util.h"

namespace lstext {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// 1. Smoothed one-hot labels equal y * coef + lambda with the tabulated constants.
Outcome smoothing_golden() {
  struct Row {
    SmoothingLevel level;
    std::size_t k;
    double coef;
    double lambda;
  };
  const Row table[] = {
      {SmoothingLevel::Baseline, 3, 1.0, 0.0}, {SmoothingLevel::LS1, 3, 1.0, 0.0},
      {SmoothingLevel::LS2, 3, 0.97, 0.01},    {SmoothingLevel::LS3, 3, 0.925, 0.025},
      {SmoothingLevel::LS4, 3, 0.85, 0.05},    {SmoothingLevel::LS5, 3, 0.7, 0.1},
      {SmoothingLevel::Baseline, 2, 1.0, 0.0}, {SmoothingLevel::LS1, 2, 1.0, 0.0},
      {SmoothingLevel::LS2, 2, 0.98, 0.01},    {SmoothingLevel::LS3, 2, 0.9, 0.05},
      {SmoothingLevel::LS4, 2, 0.8, 0.1},      {SmoothingLevel::LS5, 2, 0.7, 0.15},
  };
  std::size_t checked = 0;
  for (const Row& r : table) {
    const double lambda = SmoothingSpec(r.level, r.k).lambda();
    if (lambda != r.lambda) {
      return {false, std::string(to_string(r.level)) + " k=" + std::to_string(r.k) + " lambda " +
                         fmt("%.17g", lambda)};
    }
    for (std::size_t c = 0; c < r.k; ++c) {
      const auto s = smooth(one_hot(c, r.k), lambda);
      for (std::size_t j = 0; j < r.k; ++j) {
        const double y = j == c ? 1.0 : 0.0;
        if (s[j] != y * r.coef + r.lambda) {
          return {false, std::string(to_string(r.level)) + " k=" + std::to_string(r.k) +
                             " entry " + std::to_string(j) + " = " + fmt("%.17g", s[j])};
        }
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " entries exact"};
}

// 2. KL = H(p,q) - H(p) and KL >= 0 on random pairs.
Outcome loss_identities() {
  Rng rng(2024);
  double worst_gap = 0.0, min_kl = 1e300;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t k = 2 + rng.below(9);
    const LabelDistribution p(testing::random_simplex(k, rng)), q(testing::random_simplex(k, rng));
    const double kl = kl_divergence(p, q);
    worst_gap = std::max(worst_gap, std::abs(kl - (cross_entropy(p, q) - entropy(p))));
    min_kl = std::min(min_kl, kl);
  }
  return {worst_gap <= 1e-12 && min_kl >= -1e-12,
          "max |KL-(H(p,q)-H(p))| = " + fmt("%.3g", worst_gap) + ", min KL = " + fmt("%.3g", min_kl)};
}

// 3. Analytic gradients against central differences.
Outcome gradient_oracle() {
  double worst = 0.0;
  std::string where;
  for (std::uint64_t seed : {101u, 102u, 103u}) {
    Rng rng(seed);
    TextCnnConfig cfg;
    cfg.vocab_size = 9;
    cfg.num_classes = 3;
    cfg.max_len = 7;
    cfg.embed_dim = 3;
    cfg.windows = {2, 3};
    cfg.filters = 2;
    TextCnn model(cfg, rng);
    for (std::size_t i = 0; i < model.params().size(); ++i)
      for (double& x : model.mutable_params()[i].values()) x = rng.uniform(-0.5, 0.5);
    const auto seqs = testing::random_sequences(4, 7, 9, rng);
    const auto rep = testing::check_gradients(model, testing::batch_of(seqs),
                                              testing::random_targets(4, 3, 0.05, rng));
    if (rep.max_error >= worst) worst = rep.max_error, where = "textcnn seed " + std::to_string(seed) + " " + rep.worst;
  }
  for (std::uint64_t seed : {201u, 202u, 203u}) {
    Rng rng(seed);
    TransformerConfig cfg;
    cfg.vocab_size = 10;
    cfg.num_classes = 3;
    cfg.max_len = 6;
    cfg.d_model = 8;
    cfg.heads = 2;
    cfg.layers = 1;
    cfg.ffn_dim = 6;
    cfg.residual_norm = false;
    Transformer model(cfg, rng);
    for (std::size_t i = 0; i < model.params().size(); ++i)
      for (double& x : model.mutable_params()[i].values()) x = rng.uniform(-0.5, 0.5);
    const auto seqs = testing::random_sequences(3, 6, 10, rng);
    const auto rep = testing::check_gradients(model, testing::batch_of(seqs),
                                              testing::random_targets(3, 3, 0.1, rng));
    if (rep.max_error >= worst) worst = rep.max_error, where = "transformer seed " + std::to_string(seed) + " " + rep.worst;
  }
  return {worst <= 1e-5, "max relative error " + fmt("%.3g", worst) + " (" + where + ")"};
}

TrainConfig toy_config(const testing::EncodedSplit& data, SmoothingLevel level, std::size_t epochs) {
  TrainConfig cfg;
  cfg.smoothing = SmoothingSpec(level, data.train.k);
  cfg.loss_kind = objective_for(level);
  cfg.epochs = epochs;
  cfg.seed = 7;
  cfg.record_time = false;
  cfg.learning_rate = default_learning_rate(Architecture::TextCnn);
  TextCnnConfig m;
  m.embed_dim = 16;
  m.filters = 8;
  cfg.model = bind_model_config(m, data.vocab.size(), data.train.k, data.train.examples[0].ids.size());
  return cfg;
}

// 4. Baseline (CE) and LS1 (KL, one-hot targets) runs coincide.
Outcome baseline_ls1() {
  const auto data = testing::load_encoded("toy_sentiment.csv", 24);
  const RunResult a = train_run(data.train, data.val, toy_config(data, SmoothingLevel::Baseline, 10));
  const RunResult b = train_run(data.train, data.val, toy_config(data, SmoothingLevel::LS1, 10));
  double worst = 0.0;
  bool same_acc = a.metrics.size() == b.metrics.size();
  for (std::size_t i = 0; same_acc && i < a.metrics.size(); ++i) {
    worst = std::max(worst, std::abs(a.metrics[i].train_loss - b.metrics[i].train_loss));
    same_acc = a.metrics[i].val_accuracy == b.metrics[i].val_accuracy;
  }
  return {same_acc && worst <= 1e-9, std::to_string(a.metrics.size()) +
                                         " epochs, max train-loss gap " + fmt("%.3g", worst) +
                                         (same_acc ? ", val accuracies identical" : ", val accuracies differ")};
}

// 5. Default TextCNN memorizes 32 examples.
Outcome overfit() {
  const Dataset d = testing::load_encoded_all("toy32.csv", 32);
  TrainConfig cfg;
  cfg.learning_rate = default_learning_rate(Architecture::TextCnn);
  cfg.seed = 3;
  cfg.record_time = false;
  std::size_t vocab = 0;
  for (const auto& ex : d.examples)
    for (TokenId id : ex.ids) vocab = std::max(vocab, static_cast<std::size_t>(id) + 1);
  cfg.model = bind_model_config(TextCnnConfig{}, vocab, d.k, 32);
  Rng rng(mix_seed(cfg.seed, 1));
  auto model = make_classifier(cfg.model, rng);
  double acc = 0.0;
  std::size_t epoch = 0;
  while (epoch < 200 && acc < 0.99) {
    train_epoch(*model, d, cfg, epoch++);
    acc = evaluate(*model, d);
  }
  return {acc >= 0.99, "train accuracy " + fmt("%.4f", acc) + " after " + std::to_string(epoch) +
                           " epochs (eta " + fmt("%g", cfg.learning_rate) + ")"};
}

SweepConfig rtr_sweep(const fs::path& out) {
  SweepConfig cfg = load_sweep_config(testing::data_path("sweep_rtr.cfg"));
  cfg.out_dir = out;
  return cfg;
}

// 6. Full sweep on the RTR-style corpus.
Outcome sweep(const fs::path& out) {
  fs::remove_all(out);
  const SweepConfig cfg = rtr_sweep(out);
  const ResultTable t = run_sweep(cfg);
  std::size_t ok = 0;
  double lowest = 1.0;
  std::string worst;
  for (const auto& r : t.rows) {
    if (!r.ok) return {false, r.algorithm + " failed: " + r.reason};
    ++ok;
    if (r.best_val_accuracy < lowest) {
      lowest = r.best_val_accuracy;
      worst = std::string(to_string(r.architecture)) + "/" + r.algorithm;
    }
  }
  std::size_t curve_rows = 0;
  {
    std::ifstream in(out / "curves_seed1.csv");
    for (std::string line; std::getline(in, line);) ++curve_rows;
  }
  const bool files = fs::exists(out / "results.csv") && curve_rows == 1 + 12 * cfg.epochs;
  std::ostringstream detail;
  detail << ok << "/12 runs ok, min best val accuracy " << fmt("%.4f", lowest) << " (" << worst
         << "), curves rows " << (curve_rows ? curve_rows - 1 : 0);
  for (const auto& r : t.rows)
    detail << "; " << to_string(r.architecture) << "/" << r.algorithm << "=" << fmt("%.3f", r.best_val_accuracy);
  return {ok == 12 && t.rows.size() == 12 && lowest >= 0.60 && files, detail.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 7. Second sweep, byte-for-byte comparison of the output trees.
Outcome determinism(const fs::path& first, const fs::path& second) {
  fs::remove_all(second);
  run_sweep(rtr_sweep(second));
  std::set<std::string> a, b;
  for (const auto& e : fs::recursive_directory_iterator(first))
    if (e.is_regular_file()) a.insert(fs::relative(e.path(), first).string());
  for (const auto& e : fs::recursive_directory_iterator(second))
    if (e.is_regular_file()) b.insert(fs::relative(e.path(), second).string());
  if (a != b) return {false, "file sets differ"};
  for (const auto& name : a)
    if (slurp(first / name) != slurp(second / name)) return {false, name + " differs"};
  return {true, std::to_string(a.size()) + " files byte-identical"};
}

// 8. Projection of trained features.
Outcome projection(const fs::path& sweep_dir, const fs::path& scratch) {
  const fs::path ckpt = sweep_dir / "runs" / "rtr_style_2k__textcnn__LS3__seed1.ckpt";
  const LoadedModel loaded = load_checkpoint(ckpt);
  const fs::path data = testing::data_path("rtr_style_2k.csv");
  LoadOptions opt;
  opt.label_names = loaded.label_names;
  const Dataset d = encode_dataset(load_dataset(data, opt), loaded.vocab, loaded.model->max_len());
  const Tensor2 features = extract_penultimate(*loaded.model, make_batch(d));
  const Projection p = pca_project(features);

  // Dense eigensolver on the same covariance.
  Eigen::MatrixXd m(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (std::size_t j = 0; j < features.cols(); ++j) m(i, j) = features(i, j);
  const Eigen::MatrixXd c = m.rowwise() - m.colwise().mean();
  const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(m.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const auto dim = static_cast<Eigen::Index>(features.cols());
  double eig_err = 0.0;
  for (std::size_t r = 0; r < 2; ++r) {
    const Eigen::VectorXd v = es.eigenvectors().col(dim - 1 - static_cast<Eigen::Index>(r));
    double plus = 0.0, minus = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      plus = std::max(plus, std::abs(p.components(r, static_cast<std::size_t>(j)) - v(j)));
      minus = std::max(minus, std::abs(p.components(r, static_cast<std::size_t>(j)) + v(j)));
    }
    eig_err = std::max(eig_err, std::min(plus, minus));
  }

  // Rank-2 version of the same features must round-trip exactly.
  const Tensor2 planar = reconstruct(p);
  const double lowrank_err = max_abs_diff(reconstruct(pca_project(planar)), planar);

  const fs::path out = scratch / "projection.csv";
  const std::string args[] = {"lstext", "project", "--checkpoint", ckpt.string(), "--data",
                              data.string(), "--out", out.string()};
  const char* argv[8];
  for (int i = 0; i < 8; ++i) argv[i] = args[i].c_str();
  std::ostringstream sout, serr;
  const int code = cli::run(8, argv, sout, serr);
  std::size_t rows = 0;
  std::string header;
  {
    std::ifstream in(out);
    std::getline(in, header);
    for (std::string line; std::getline(in, line);) ++rows;
  }
  const bool ok = eig_err <= 1e-6 && lowrank_err <= 1e-8 && code == 0 && header == "x,y,label" &&
                  rows == d.size();
  return {ok, "eigenvector error " + fmt("%.3g", eig_err) + ", low-rank error " +
                  fmt("%.3g", lowrank_err) + ", project exit " + std::to_string(code) + ", rows " +
                  std::to_string(rows) + "/" + std::to_string(d.size())};
}

}  // namespace
}  // namespace lstext

int main() {
  using namespace lstext;
  const fs::path scratch = testing::scratch_dir("acceptance");
  const fs::path first = scratch / "sweep_a", second = scratch / "sweep_b";
  criterion(1, "smoothing golden", smoothing_golden);
  criterion(2, "loss identities", loss_identities);
  criterion(3, "gradient oracle", gradient_oracle);
  criterion(4, "baseline equals LS1", baseline_ls1);
  criterion(5, "overfit sanity", overfit);
  criterion(6, "end-to-end sweep", [&] { return sweep(first); });
  criterion(7, "sweep determinism", [&] { return determinism(first, second); });
  criterion(8, "projection", [&] { return projection(first, scratch); });
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
