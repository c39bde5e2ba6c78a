// Copyright 2026 The topicrate Authors
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

#ifndef TOPICRATE_CLI_H_
#define TOPICRATE_CLI_H_

#include <string>
#include <vector>

namespace topicrate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace topicrate::cli

#endif  // TOPICRATE_CLI_H_
