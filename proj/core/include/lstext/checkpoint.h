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

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lstext/models.h"
#include "lstext/textpipe.h"

namespace lstext {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Everything needed to score raw text with a trained model.
struct LoadedModel {
  std::unique_ptr<Classifier> model;
  Vocabulary vocab;
  std::vector<std::string> label_names;
};

// Binary checkpoint, all integers and doubles little-endian:
//
//   magic      8 bytes  "LSTXCKPT"
//   version    u32      kCheckpointVersion
//   meta_len   u64
//   meta       meta_len bytes of UTF-8 JSON: architecture, model config,
//              vocabulary tokens (id order), label names, format_version
//   count      u64      number of tensors
//   count x { name_len u32, name bytes, rows u64, cols u64, rows*cols f64 }
//
// Tensors appear in the model's parameter order.
std::string serialize_checkpoint(const Classifier& model, const Vocabulary& vocab,
                                 const std::vector<std::string>& label_names);
LoadedModel deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const Classifier& model,
                     const Vocabulary& vocab, const std::vector<std::string>& label_names);
LoadedModel load_checkpoint(const std::filesystem::path& path);

}  // namespace lstext
