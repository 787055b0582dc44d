// Copyright 2026 The SHDH Authors.
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

// The `shdh` command line as a library so tests can drive it in-process.

#ifndef SHDH_TOOLS_CLI_HPP_
#define SHDH_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace shdh::cli {

/// Runs one invocation. `args` excludes the program name. Returns the process
/// exit code: 0 ok, 2 input/file error, 3 validation error, 4 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shdh::cli

#endif  // SHDH_TOOLS_CLI_HPP_
