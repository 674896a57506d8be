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

#ifndef UNLEARN_AUDIT_ERROR_H_
#define UNLEARN_AUDIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace unlearn_audit {

enum class ErrorCode {
  kInvalidArgument,
  kShape,
  kParse,
  kLabel,
  kSplit,
  kClass,
  kSizing,
  kBalance,
  kConfig,
  kNumerical,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Wraps a failure with the name of the pipeline phase that raised it.
class PhaseError : public Error {
 public:
  PhaseError(std::string phase, const Error& cause);
  PhaseError(std::string phase, ErrorCode code, const std::string& cause);

  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_ERROR_H_
