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

#include "fairrank/error.h"

namespace fairrank {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAllZero: return "AllZero";
    case ErrorCode::kNegativeScore: return "NegativeScore";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kCoverage: return "CoverageError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kEmptyScope: return "EmptyScope";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kModeMismatch: return "ModeMismatch";
    case ErrorCode::kSpec: return "SpecError";
    case ErrorCode::kStreamOrder: return "StreamOrder";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kPrecondition: return "PreconditionError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace fairrank
