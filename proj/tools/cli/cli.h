// Copyright 2026 The rirsde Authors
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

#ifndef RIRSDE_TOOLS_CLI_CLI_H_
#define RIRSDE_TOOLS_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace rirsde::cli {

// Process exit codes; stable for scripting.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitMissingData = 3,
  kExitSchemaMismatch = 4,
};

// Entry point shared by the binary and the tests.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rirsde::cli

#endif  // RIRSDE_TOOLS_CLI_CLI_H_
