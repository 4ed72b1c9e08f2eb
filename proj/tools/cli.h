// Copyright 2026 The rzone Authors
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

#ifndef RZONE_TOOLS_CLI_H_
#define RZONE_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rzone/error.h"

namespace rzone::cli {

enum ExitCode {
  kExitOk = 0,
  kExitConfig = 1,
  kExitInfeasible = 2,
  kExitSolverLimit = 3,
  kExitCertification = 4,
};

int ExitCodeFor(ErrorKind kind);

struct ScenarioSource {
  std::string file;  // empty = generate
  int count = 200;
  uint64_t seed = 42;
  int reduce_to = 10;  // 0 = keep all
};

// One row of a stability run.
struct ModelSpec {
  std::string model = "stochastic";
  double q = 0.05;
  int zones = 1;
  double chi = 0.0;

  std::string Label() const;
};

struct RunConfig {
  std::string case_path;
  ScenarioSource scenarios;
  std::string model = "stochastic";
  double q = 0.05;
  int zones = 1;
  double chi = 0.0;
  int min_size = 1;
  int max_size = 0;
  // solver
  double rel_gap = 1e-4;
  double time_limit = 1e30;
  int64_t node_limit = 2'000'000;
  double epsilon = 1e-4;
  int max_iter = 100;
  double dual_bound = 0.0;
  // stability
  int omega = 5;
  uint64_t omega_seed = 1000;
  std::vector<ModelSpec> compare;

  std::string output = "rzone_out";
  bool mps = false;
  int jobs = 1;
};

// Parses a JSON config; relative paths are resolved against `base_dir`.
// Throws Error(kConfig) naming the line or key at fault.
RunConfig ParseConfig(const std::string& text, const std::string& base_dir = "");
RunConfig LoadConfig(const std::string& path);
void ValidateConfig(const RunConfig& config);

// Writes through a temporary file in the same directory and renames.
void WriteFileAtomic(const std::string& path, const std::string& contents);

// Full command line, without the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace rzone::cli

#endif  // RZONE_TOOLS_CLI_H_
