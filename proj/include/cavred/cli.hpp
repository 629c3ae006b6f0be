// Copyright (c) 2026 The cavred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cavred::cli {

  /// Exit codes.
  inline constexpr int exit_ok = 0;
  inline constexpr int exit_failure = 1;
  inline constexpr int exit_config = 2;
  inline constexpr int exit_not_converged = 3;

  /// Runs the command line (args excludes the program name). Outputs go to the
  /// directory given by --out, else $CAVRED_OUT_DIR, else the working directory.
  int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cavred::cli
