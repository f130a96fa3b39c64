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

#include "lstext/textpipe.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

namespace lstext {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  flush();
  return out;
}

Vocabulary::Vocabulary() {
  add(std::string(kPadToken));
  add(std::string(kUnkToken));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kUnkToken) {
    throw InvalidInputError("vocabulary token list must start with <pad>, <unk>");
  }
  Vocabulary v;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    if (v.contains(tokens[i])) throw InvalidInputError("duplicate vocabulary token: " + tokens[i]);
    v.add(std::move(tokens[i]));
  }
  return v;
}

void Vocabulary::add(std::string token) {
  index_.emplace(token, static_cast<TokenId>(tokens_.size()));
  tokens_.push_back(std::move(token));
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) != 0;
}

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, std::size_t min_freq,
                       std::size_t max_size) {
  if (max_size < 2) throw ConfigError("build_vocab: max_size must be >= 2");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : corpus)
    for (const auto& tok : doc) ++counts[tok];

  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [tok, n] : counts) {
    if (n >= min_freq && tok != Vocabulary::kPadToken && tok != Vocabulary::kUnkToken) {
      ranked.emplace_back(tok, n);
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > max_size - 2) ranked.resize(max_size - 2);

  std::vector<std::string> tokens{std::string(Vocabulary::kPadToken),
                                  std::string(Vocabulary::kUnkToken)};
  for (auto& [tok, n] : ranked) tokens.push_back(std::move(tok));
  return Vocabulary::from_tokens(std::move(tokens));
}

TokenIds encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                std::size_t max_len) {
  if (max_len == 0) throw ConfigError("encode: max_len must be >= 1");
  TokenIds ids(max_len, kPadId);
  const std::size_t n = std::min(tokens.size(), max_len);
  for (std::size_t i = 0; i < n; ++i) ids[i] = vocab.id(tokens[i]);
  return ids;
}

void Dataset::validate() const {
  if (examples.empty()) throw ContractError("dataset is empty");
  if (label_names.size() != k) throw ContractError("dataset label name count differs from k");
  std::set<std::string> unique(label_names.begin(), label_names.end());
  if (unique.size() != label_names.size()) throw ContractError("dataset label names not distinct");
  const std::size_t len = examples.front().ids.size();
  for (const auto& ex : examples) {
    if (ex.label >= k) throw ContractError("dataset label out of range");
    if (ex.ids.size() != len) throw ContractError("dataset examples have unequal lengths");
  }
}

FileFormat parse_file_format(std::string_view name) {
  if (name == "csv") return FileFormat::Csv;
  if (name == "tsv") return FileFormat::Tsv;
  if (name == "jsonl") return FileFormat::Jsonl;
  throw ConfigError("unknown dataset format '" + std::string(name) + "' (csv, tsv, jsonl)");
}

FileFormat format_from_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return FileFormat::Csv;
  if (ext == ".tsv") return FileFormat::Tsv;
  if (ext == ".jsonl" || ext == ".json") return FileFormat::Jsonl;
  throw ConfigError("cannot infer dataset format from '" + path.string() +
                    "'; set the format explicitly");
}

namespace {

struct RawRow {
  std::size_t row;  // 1-based record number
  std::string text;
  std::string label;
};

[[noreturn]] void row_error(const std::filesystem::path& path, std::size_t row,
                            const std::string& what) {
  throw ParseError(path.string() + ": row " + std::to_string(row) + ": " + what);
}

// Reads one RFC 4180 record (quoted fields may span lines). Returns false at EOF.
bool read_csv_record(std::istream& in, char sep, std::vector<std::string>& fields,
                     bool& unterminated) {
  fields.clear();
  unterminated = false;
  std::string line;
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i >= line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next)) {
          unterminated = true;
          fields.push_back(std::move(field));
          return true;
        }
        if (!next.empty() && next.back() == '\r') next.pop_back();
        field.push_back('\n');
        line = std::move(next);
        i = 0;
        continue;
      }
      fields.push_back(std::move(field));
      return true;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == sep) {
      fields.push_back(std::move(field));
      field.clear();
      field_started_quoted = false;
    } else {
      field.push_back(c);
    }
    ++i;
  }
}

std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<RawRow> read_delimited(const std::filesystem::path& path, std::istream& in,
                                   bool tsv, const LoadOptions& opt) {
  std::vector<std::string> header;
  bool unterminated = false;
  auto next_record = [&](std::vector<std::string>& fields) -> bool {
    if (!tsv) return read_csv_record(in, ',', fields, unterminated);
    std::string line;
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fields = split_tsv(line);
    return true;
  };
  if (!next_record(header)) throw ParseError(path.string() + ": missing header row");
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  auto column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError(path.string() + ": header has no field '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t text_col = column(opt.text_field);
  const std::size_t label_col = column(opt.label_field);

  std::vector<RawRow> rows;
  std::vector<std::string> fields;
  std::size_t row = 0;
  while (next_record(fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (unterminated) row_error(path, row, "unterminated quoted field");
    if (fields.size() != header.size()) {
      row_error(path, row, "expected " + std::to_string(header.size()) + " fields, found " +
                               std::to_string(fields.size()));
    }
    if (fields[label_col].empty()) row_error(path, row, "empty '" + opt.label_field + "' field");
    rows.push_back({row, std::move(fields[text_col]), std::move(fields[label_col])});
  }
  return rows;
}

std::vector<RawRow> read_jsonl(const std::filesystem::path& path, std::istream& in,
                               const LoadOptions& opt) {
  std::vector<RawRow> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      row_error(path, row, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) row_error(path, row, "expected a JSON object");
    auto field = [&](const std::string& name) -> std::string {
      auto it = obj.find(name);
      if (it == obj.end()) row_error(path, row, "missing field '" + name + "'");
      if (it->is_string()) return it->get<std::string>();
      if (it->is_number() || it->is_boolean()) return it->dump();
      row_error(path, row, "field '" + name + "' must be a string or number");
    };
    std::string text = field(opt.text_field);
    std::string label = field(opt.label_field);
    if (label.empty()) row_error(path, row, "empty '" + opt.label_field + "' field");
    rows.push_back({row, std::move(text), std::move(label)});
  }
  return rows;
}

}  // namespace

TextDataset load_dataset(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file " + path.string());

  std::vector<RawRow> rows;
  switch (options.format) {
    case FileFormat::Csv: rows = read_delimited(path, in, false, options); break;
    case FileFormat::Tsv: rows = read_delimited(path, in, true, options); break;
    case FileFormat::Jsonl: rows = read_jsonl(path, in, options); break;
  }
  if (rows.empty()) throw ParseError(path.string() + ": no data rows");

  TextDataset out;
  if (options.label_names) {
    out.label_names = *options.label_names;
  } else {
    std::set<std::string> names;
    for (const auto& r : rows) names.insert(r.label);
    out.label_names.assign(names.begin(), names.end());
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < out.label_names.size(); ++i) index[out.label_names[i]] = i;
  out.k = out.label_names.size();
  out.examples.reserve(rows.size());
  for (auto& r : rows) {
    auto it = index.find(r.label);
    if (it == index.end()) row_error(path, r.row, "unknown label '" + r.label + "'");
    out.examples.push_back({std::move(r.text), it->second});
  }
  return out;
}

std::vector<IndexBatch> iter_batches(std::size_t n_examples, std::size_t batch_size, bool shuffle,
                                     std::uint64_t seed, std::size_t epoch) {
  if (batch_size == 0) throw ConfigError("iter_batches: batch_size must be >= 1");
  std::vector<std::size_t> order(n_examples);
  for (std::size_t i = 0; i < n_examples; ++i) order[i] = i;
  if (shuffle) {
    Rng rng(mix_seed(seed, 0xba7c4000ULL + epoch));
    rng.shuffle(order);
  }
  std::vector<IndexBatch> batches;
  for (std::size_t start = 0; start < n_examples; start += batch_size) {
    const std::size_t end = std::min(n_examples, start + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

std::vector<std::vector<std::string>> tokenize_all(const TextDataset& d) {
  std::vector<std::vector<std::string>> out;
  out.reserve(d.examples.size());
  for (const auto& ex : d.examples) out.push_back(tokenize(ex.text));
  return out;
}

Dataset encode_dataset(const TextDataset& d, const Vocabulary& vocab, std::size_t max_len) {
  Dataset out;
  out.k = d.k;
  out.label_names = d.label_names;
  out.examples.reserve(d.examples.size());
  for (const auto& ex : d.examples) {
    auto toks = tokenize(ex.text);
    out.examples.push_back({encode(toks, vocab, max_len), ex.label, toks.size()});
  }
  return out;
}

}  // namespace lstext
