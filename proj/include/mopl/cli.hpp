// Copyright 2025 The mopl authors
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

#ifndef MOPL_CLI_HPP_
#define MOPL_CLI_HPP_

#include <string>
#include <vector>

namespace mopl {

// Runs one CLI invocation (args excludes the program name). Returns 0 on
// success, 1 on usage/validation errors, 2 on I/O errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace mopl

#endif  // MOPL_CLI_HPP_
