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

#include <benchmark/benchmark.h>

#include "lstext/numerics.h"
#include "lstext/pca.h"
#include "lstext/textcnn.h"
#include "lstext/transformer.h"

namespace lstext {
namespace {

std::vector<TokenIds> random_batch(std::size_t count, std::size_t len, std::size_t vocab, Rng& rng) {
  std::vector<TokenIds> out(count, TokenIds(len, kPadId));
  for (auto& ids : out) {
    const std::size_t n = len / 2 + rng.below(len / 2 + 1);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<TokenId>(2 + rng.below(vocab - 2));
  }
  return out;
}

Batch view(const std::vector<TokenIds>& seqs) {
  Batch b;
  for (const auto& s : seqs) b.sequences.emplace_back(s);
  return b;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Tensor2 a = seeded_init(n, n, -1, 1, rng), b = seeded_init(n, n, -1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(128);

template <class Model, class Config>
void run_model(benchmark::State& state, const Config& cfg, bool backward) {
  Rng rng(2);
  Model model(cfg, rng);
  const auto seqs = random_batch(32, cfg.max_len, cfg.vocab_size, rng);
  const Batch batch = view(seqs);
  const Tensor2 grad(32, cfg.num_classes, 0.01);
  for (auto _ : state) {
    ForwardResult r = model.forward(batch);
    if (backward) benchmark::DoNotOptimize(model.backward(*r.cache, grad));
    benchmark::DoNotOptimize(r.logits);
  }
  state.SetItemsProcessed(state.iterations() * 32);
}

TextCnnConfig bench_cnn() {
  TextCnnConfig cfg;
  cfg.vocab_size = 5000;
  cfg.max_len = 32;
  cfg.embed_dim = 32;
  cfg.filters = 16;
  return cfg;
}

TransformerConfig bench_transformer() {
  TransformerConfig cfg;
  cfg.vocab_size = 5000;
  cfg.max_len = 32;
  cfg.d_model = 32;
  cfg.layers = 1;
  cfg.ffn_dim = 64;
  return cfg;
}

void BM_TextCnnForward(benchmark::State& s) { run_model<TextCnn>(s, bench_cnn(), false); }
void BM_TextCnnForwardBackward(benchmark::State& s) { run_model<TextCnn>(s, bench_cnn(), true); }
void BM_TransformerForward(benchmark::State& s) { run_model<Transformer>(s, bench_transformer(), false); }
void BM_TransformerForwardBackward(benchmark::State& s) {
  run_model<Transformer>(s, bench_transformer(), true);
}
BENCHMARK(BM_TextCnnForward);
BENCHMARK(BM_TextCnnForwardBackward);
BENCHMARK(BM_TransformerForward);
BENCHMARK(BM_TransformerForwardBackward);

void BM_PcaProject(benchmark::State& state) {
  Rng rng(3);
  const Tensor2 x = seeded_init(2000, 48, -1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(pca_project(x));
}
BENCHMARK(BM_PcaProject)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lstext

BENCHMARK_MAIN();
