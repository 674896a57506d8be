//
// Copyright 2026 The Unlearn Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "unlearn_audit/error.h"

#include <string>
#include <utility>

namespace unlearn_audit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kShape:
      return "shape";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kLabel:
      return "label";
    case ErrorCode::kSplit:
      return "split";
    case ErrorCode::kClass:
      return "class";
    case ErrorCode::kSizing:
      return "sizing";
    case ErrorCode::kBalance:
      return "balance";
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kNumerical:
      return "numerical";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + " error: " +
                         message),
      code_(code) {}

PhaseError::PhaseError(std::string phase, const Error& cause)
    : Error(cause.code(), "phase '" + phase + "': " + cause.what()),
      phase_(std::move(phase)) {}

PhaseError::PhaseError(std::string phase, ErrorCode code,
                       const std::string& cause)
    : Error(code, "phase '" + phase + "': " + cause), phase_(std::move(phase)) {}

}  // namespace unlearn_audit
