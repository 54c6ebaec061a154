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

#ifndef FAIRRANK_ERROR_H_
#define FAIRRANK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairrank {

enum class ErrorCode {
  kAllZero,
  kNegativeScore,
  kLengthMismatch,
  kValidation,
  kCoverage,
  kParse,
  kEmptyScope,
  kDomain,
  kModeMismatch,
  kSpec,
  kStreamOrder,
  kConfig,
  kPrecondition,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported by throwing fairrank::Error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fairrank

#endif  // FAIRRANK_ERROR_H_
