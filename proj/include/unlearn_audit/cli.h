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

#ifndef UNLEARN_AUDIT_CLI_H_
#define UNLEARN_AUDIT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace unlearn_audit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Parses `args` (without the program name) and runs one subcommand:
// gen-data, split, train, attack, unlearn, run, sweep or report.
// Returns 0 on success, 1 on usage errors and 2 on runtime failures.
int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_CLI_H_
