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

#include "lstext/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lstext/error.h"
#include "lstext/textcnn.h"
#include "lstext/transformer.h"

namespace lstext {

namespace {

constexpr char kMagic[8] = {'L', 'S', 'T', 'X', 'C', 'K', 'P', 'T'};

template <class T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <class T>
  T get_le() {
    need(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return value;
  }

  std::string get_bytes(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw ParseError("checkpoint: truncated file");
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

nlohmann::json config_to_json(const ModelConfig& cfg) {
  nlohmann::json j;
  if (const auto* c = std::get_if<TextCnnConfig>(&cfg)) {
    j["vocab_size"] = c->vocab_size;
    j["num_classes"] = c->num_classes;
    j["max_len"] = c->max_len;
    j["embed_dim"] = c->embed_dim;
    j["windows"] = c->windows;
    j["filters"] = c->filters;
  } else {
    const auto& t = std::get<TransformerConfig>(cfg);
    j["vocab_size"] = t.vocab_size;
    j["num_classes"] = t.num_classes;
    j["max_len"] = t.max_len;
    j["d_model"] = t.d_model;
    j["heads"] = t.heads;
    j["layers"] = t.layers;
    j["ffn_dim"] = t.ffn_dim;
    j["residual_norm"] = t.residual_norm;
  }
  return j;
}

ModelConfig config_from_json(Architecture arch, const nlohmann::json& j) {
  if (arch == Architecture::TextCnn) {
    TextCnnConfig c;
    c.vocab_size = j.at("vocab_size").get<std::size_t>();
    c.num_classes = j.at("num_classes").get<std::size_t>();
    c.max_len = j.at("max_len").get<std::size_t>();
    c.embed_dim = j.at("embed_dim").get<std::size_t>();
    c.windows = j.at("windows").get<std::vector<std::size_t>>();
    c.filters = j.at("filters").get<std::size_t>();
    return c;
  }
  TransformerConfig t;
  t.vocab_size = j.at("vocab_size").get<std::size_t>();
  t.num_classes = j.at("num_classes").get<std::size_t>();
  t.max_len = j.at("max_len").get<std::size_t>();
  t.d_model = j.at("d_model").get<std::size_t>();
  t.heads = j.at("heads").get<std::size_t>();
  t.layers = j.at("layers").get<std::size_t>();
  t.ffn_dim = j.at("ffn_dim").get<std::size_t>();
  t.residual_norm = j.at("residual_norm").get<bool>();
  return t;
}

ModelConfig config_of(const Classifier& model) {
  if (const auto* c = dynamic_cast<const TextCnn*>(&model)) return c->config();
  if (const auto* t = dynamic_cast<const Transformer*>(&model)) return t->config();
  throw ContractError("checkpoint: unsupported model type");
}

}  // namespace

std::string serialize_checkpoint(const Classifier& model, const Vocabulary& vocab,
                                 const std::vector<std::string>& label_names) {
  nlohmann::json meta;
  meta["format_version"] = kCheckpointVersion;
  meta["architecture"] = std::string(to_string(model.architecture()));
  meta["model"] = config_to_json(config_of(model));
  meta["vocab"] = vocab.tokens();
  meta["labels"] = label_names;
  const std::string meta_text = meta.dump();

  std::string out(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, meta_text.size());
  out += meta_text;
  const ParamSet& params = model.params();
  put_le<std::uint64_t>(out, params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.name(i).size()));
    out += params.name(i);
    put_le<std::uint64_t>(out, params[i].rows());
    put_le<std::uint64_t>(out, params[i].cols());
    for (double v : params[i].values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

LoadedModel deserialize_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (in.get_bytes(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw ParseError("checkpoint: bad magic (not an lstext checkpoint)");
  }
  const auto version = in.get_le<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw ParseError("checkpoint: unsupported format version " + std::to_string(version));
  }
  const auto meta_len = in.get_le<std::uint64_t>();
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(in.get_bytes(meta_len));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint: bad metadata: ") + e.what());
  }

  ParamSet params;
  const auto count = in.get_le<std::uint64_t>();
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto name_len = in.get_le<std::uint32_t>();
    std::string name = in.get_bytes(name_len);
    const auto rows = in.get_le<std::uint64_t>();
    const auto cols = in.get_le<std::uint64_t>();
    std::vector<double> data(rows * cols);
    for (double& v : data) v = std::bit_cast<double>(in.get_le<std::uint64_t>());
    params.add(std::move(name), Tensor2(rows, cols, std::move(data)));
  }
  if (!in.at_end()) throw ParseError("checkpoint: trailing bytes");

  LoadedModel out;
  try {
    const Architecture arch = parse_architecture(meta.at("architecture").get<std::string>());
    const ModelConfig cfg = config_from_json(arch, meta.at("model"));
    if (arch == Architecture::TextCnn) {
      out.model = std::make_unique<TextCnn>(std::get<TextCnnConfig>(cfg), std::move(params));
    } else {
      out.model = std::make_unique<Transformer>(std::get<TransformerConfig>(cfg), std::move(params));
    }
    out.vocab = Vocabulary::from_tokens(meta.at("vocab").get<std::vector<std::string>>());
    out.label_names = meta.at("labels").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint: bad metadata: ") + e.what());
  }
  if (out.vocab.size() != out.model->vocab_size() ||
      out.label_names.size() != out.model->num_classes()) {
    throw ParseError("checkpoint: vocabulary or label list disagrees with the model config");
  }
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const Classifier& model,
                     const Vocabulary& vocab, const std::vector<std::string>& label_names) {
  const std::string bytes = serialize_checkpoint(model, vocab, label_names);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

LoadedModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_checkpoint(ss.str());
}

}  // namespace lstext
