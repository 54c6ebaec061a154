// Copyright 2026 The fairrank Authors.
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

#ifndef FAIRRANK_TOOLS_CLI_H_
#define FAIRRANK_TOOLS_CLI_H_

#include <iosfwd>

namespace fairrank::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;   // bad input or flags
inline constexpr int kExitInfeasible = 2;   // every query fell back
inline constexpr int kExitVerifyFailed = 3;

// Entry point of the `fairrank` tool. Diagnostics go to `err`, results
// without an --out file to `out`.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace fairrank::cli

#endif  // FAIRRANK_TOOLS_CLI_H_
