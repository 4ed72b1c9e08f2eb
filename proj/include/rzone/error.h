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

#ifndef RZONE_ERROR_H_
#define RZONE_ERROR_H_

#include <stdexcept>
#include <string>

namespace rzone {

enum class ErrorKind {
  kConfig,         // bad configuration, unreadable or malformed input
  kInfeasible,     // the requested model has no feasible point
  kSolverLimit,    // a node, time or iteration limit stopped a solve
  kCertification,  // big-M audit or lower-level optimality check failed
  kSolverFailure,  // numerical breakdown inside the simplex
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ConfigError(const std::string& what) {
  return Error(ErrorKind::kConfig, what);
}
inline Error InfeasibleError(const std::string& what) {
  return Error(ErrorKind::kInfeasible, what);
}

}  // namespace rzone

#endif  // RZONE_ERROR_H_
