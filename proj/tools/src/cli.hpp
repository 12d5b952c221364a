// Copyright 2026 The theta-forge Authors
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

#pragma once

// Front-end for the theta-forge command line tool. `run_cli` is the whole
// program minus process plumbing so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace theta_forge::cli {

enum ExitCode : int {
  kOk = 0,
  kIdentityFailure = 1,
  kIoError = 2,
  kUsageError = 3,
  kInvalidInput = 4,
};

// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace theta_forge::cli
