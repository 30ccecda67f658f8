// Copyright 2026 The qtraj Authors
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


#ifndef QTRAJ_COMMANDS_HPP
#define QTRAJ_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace qtraj {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitIo = 2,
  kExitBoundViolation = 3,
  kExitFailure = 4,
};

struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> route;
  std::optional<std::string> figure;
};

int cmd_trajectories(const CommandOptions& opt, std::ostream& log);
int cmd_spectrum(const CommandOptions& opt, std::ostream& log);
int cmd_figures(const CommandOptions& opt, std::ostream& log);
int cmd_bounds(const CommandOptions& opt, std::ostream& log);

/// Runs `command` and maps library errors to exit codes, reporting them on `err`.
int run_command(const std::string& command, const CommandOptions& opt, std::ostream& log,
                std::ostream& err);

}  // namespace qtraj

#endif  // QTRAJ_COMMANDS_HPP
