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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lstext/error.h"
#include "lstext/rng.h"

namespace lstext {

using TokenId = std::int32_t;
using TokenIds = std::vector<TokenId>;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr std::size_t kDefaultMaxLen = 64;

// Lowercases ASCII letters, splits on whitespace and emits every ASCII
// punctuation character as its own token. Bytes >= 0x80 are kept verbatim.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  // Only PAD and UNK.
  Vocabulary();
  // Rebuilds from an id-ordered token list whose first two entries are the
  // reserved tokens.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  TokenId id(std::string_view token) const;  // UNK when absent
  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  bool contains(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";

 private:
  void add(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

// Keeps tokens with count >= min_freq, ordered by (count desc, token asc),
// truncated so the vocabulary including PAD/UNK has at most max_size entries.
Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, std::size_t min_freq,
                       std::size_t max_size);

// Maps tokens to ids (UNK for unknown), truncates to max_len, right-pads with PAD.
TokenIds encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                std::size_t max_len);

struct TextExample {
  std::string text;
  std::size_t label = 0;
};

// Raw labeled text as read from disk.
struct TextDataset {
  std::vector<TextExample> examples;
  std::size_t k = 0;
  std::vector<std::string> label_names;
};

struct Example {
  TokenIds ids;
  std::size_t label = 0;
  std::size_t raw_length = 0;  // token count before padding/truncation
};

struct Dataset {
  std::vector<Example> examples;
  std::size_t k = 0;
  std::vector<std::string> label_names;

  std::size_t size() const { return examples.size(); }
  // Throws ContractError when a stated invariant does not hold.
  void validate() const;
};

enum class FileFormat { Csv, Tsv, Jsonl };

FileFormat parse_file_format(std::string_view name);
// Guesses from the extension (.csv/.tsv/.jsonl/.json); throws ConfigError otherwise.
FileFormat format_from_extension(const std::filesystem::path& path);

struct LoadOptions {
  FileFormat format = FileFormat::Csv;
  std::string text_field = "text";
  std::string label_field = "label";
  // When set, labels are mapped onto this list (in order) instead of the
  // sorted set of labels found in the file; unknown labels are errors.
  std::optional<std::vector<std::string>> label_names;
};

// Row numbers in error messages count data records from 1 (CSV/TSV header
// excluded; JSONL counts lines).
TextDataset load_dataset(const std::filesystem::path& path, const LoadOptions& options);

// Shuffles with a generator derived from seed and partitions into
// (train, validation). The validation share is round(n * val_fraction).
template <class D>
std::pair<D, D> split_dataset(const D& d, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw ConfigError("split_dataset: val_fraction must lie in (0, 1)");
  }
  const std::size_t n = d.examples.size();
  const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * val_fraction));
  if (n_val == 0 || n_val >= n) {
    throw ConfigError("split_dataset: fraction " + std::to_string(val_fraction) + " of " +
                      std::to_string(n) + " examples leaves an empty split");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(mix_seed(seed, 0x5e11));
  rng.shuffle(order);

  D train;
  D val;
  train.k = val.k = d.k;
  train.label_names = val.label_names = d.label_names;
  val.examples.reserve(n_val);
  train.examples.reserve(n - n_val);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_val ? val : train).examples.push_back(d.examples[order[i]]);
  }
  return {std::move(train), std::move(val)};
}

using IndexBatch = std::vector<std::size_t>;

// Example indices per batch for one epoch. With shuffle on, the order is a
// permutation drawn from a generator seeded by (seed, epoch).
std::vector<IndexBatch> iter_batches(std::size_t n_examples, std::size_t batch_size, bool shuffle,
                                     std::uint64_t seed, std::size_t epoch = 0);

// Tokenized training text for vocabulary building.
std::vector<std::vector<std::string>> tokenize_all(const TextDataset& d);

Dataset encode_dataset(const TextDataset& d, const Vocabulary& vocab, std::size_t max_len);

}  // namespace lstext
