// Copyright 2026 The GlassSeg Authors.
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

#ifndef GLASSSEG_TOOLS_CLI_H_
#define GLASSSEG_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace glassseg::cli {

inline constexpr char kVersion[] = "1.0.0";

// Runs the command line `args` (args[0] is the program name). Returns the
// process exit status: 0 on success, 1 on usage or validation errors, 2 on
// I/O errors.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace glassseg::cli

#endif  // GLASSSEG_TOOLS_CLI_H_
