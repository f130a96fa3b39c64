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

#include <ostream>

namespace lstext::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

// Entry point behind the `lstext` binary, callable in-process.
//   lstext train   --config FILE [--arch A] [--level L] [--seed S] [--out DIR]
//   lstext sweep   --config FILE [--workers N]
//   lstext eval    --checkpoint FILE --data FILE [--format F]
//   lstext project --checkpoint FILE --data FILE --out FILE [--format F]
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lstext::cli
